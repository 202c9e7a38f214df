#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dynascore/error.hpp"
#include "dynascore/generators.hpp"
#include "dynascore/oracles.hpp"
#include "dynascore/rng.hpp"
#include "dynascore/score.hpp"

namespace dynascore {

inline constexpr std::uint64_t kDefaultSeed = 1;

namespace detail {

// Streaming mean / sample standard deviation (Welford).
class RunningStats {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::int64_t n() const { return n_; }
    double mean() const { return mean_; }
    double stddev() const {
        return n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1)) : 0.0;
    }

private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Advances the chain through all transitions, feeding post-burn-in per-step
// edge scores and destination densities to the accumulators.
inline void accumulate_emgg_scores(EmggChain& chain, RngStream& rng,
                                   std::int64_t steps, std::int64_t burn_in,
                                   RunningStats& score_stats,
                                   RunningStats& density_stats) {
    const double slots = static_cast<double>(chain.current().slots());
    for (std::int64_t t = 0; t < steps; ++t) {
        chain.step(rng);
        if (t < burn_in) {
            continue;
        }
        const JaccardCounts counts = chain.last_transition();
        const double score =
            counts.union_size == 0
                ? 0.0
                : static_cast<double>(counts.sym_diff) /
                      static_cast<double>(counts.union_size);
        score_stats.add(score);
        density_stats.add(slots == 0.0
                              ? 0.0
                              : static_cast<double>(chain.current().count()) / slots);
    }
}

} // namespace detail

struct EmggRunStats {
    double mean_e_score = 0.0;
    double stddev_e_score = 0.0;
    double mean_density = 0.0;
    std::int64_t n_samples = 0;
};

// Time-averaged per-step edge score and density of one chain run, with the
// first burn_in transitions discarded. Matches scoring generate_emgg output
// pairwise: both consume the "emgg" stream of params.seed in the same order.
inline EmggRunStats run_emgg_average(const EmggParams& params, std::int64_t burn_in) {
    validate(params);
    if (burn_in < 0 || burn_in >= params.steps) {
        throw ParamError("burn_in must lie in [0, steps), got " +
                         std::to_string(burn_in));
    }
    EmggChain chain(params);
    RngStream rng(params.seed, derive_stream("emgg"));
    detail::RunningStats scores;
    detail::RunningStats densities;
    detail::accumulate_emgg_scores(chain, rng, params.steps, burn_in, scores,
                                   densities);
    return EmggRunStats{scores.mean(), scores.stddev(), densities.mean(),
                        scores.n()};
}

// ---------------------------------------------------------------------------
// (p, q) grid sweep
// ---------------------------------------------------------------------------

inline std::vector<double> default_probability_grid() {
    std::vector<double> grid;
    for (int k = 0; k < 10; ++k) {
        grid.push_back(0.05 + 0.1 * static_cast<double>(k));
    }
    return grid;
}

struct SweepConfig {
    std::int64_t n = 150;
    std::vector<double> p_values = default_probability_grid();
    std::vector<double> q_values = default_probability_grid();
    std::int64_t steps = 700;
    std::int64_t burn_in = 200;
    std::int64_t runs = 1;
    std::uint64_t seed = kDefaultSeed;
    G0Spec g0; // empty by default; converged cells forget g0 past burn-in
};

inline void validate(const SweepConfig& config) {
    if (config.n < 1) {
        throw ParamError("sweep needs n >= 1");
    }
    if (config.p_values.empty() || config.q_values.empty()) {
        throw ParamError("sweep needs non-empty p and q grids");
    }
    for (double v : config.p_values) {
        if (v < 0.0 || v > 1.0) {
            throw ParamError("p grid value outside [0,1]: " + std::to_string(v));
        }
    }
    for (double v : config.q_values) {
        if (v < 0.0 || v > 1.0) {
            throw ParamError("q grid value outside [0,1]: " + std::to_string(v));
        }
    }
    if (config.runs < 1) {
        throw ParamError("sweep needs runs >= 1");
    }
    if (config.burn_in < 0 || config.burn_in >= config.steps) {
        throw ParamError("burn_in must lie in [0, steps)");
    }
}

struct SweepCell {
    double p = 0.0;
    double q = 0.0;
    double mean_e_score = 0.0;
    double stddev_e_score = 0.0;
    double mean_density = 0.0;
    std::int64_t n_samples = 0;
    double predicted_score = 0.0;   // 2(1-p)/(2-p); NaN for degenerate cells
    double predicted_density = 0.0; // m*; NaN for degenerate cells
};

// Cells in row-major order: p outer, q inner.
struct SweepResult {
    SweepConfig config;
    std::vector<SweepCell> cells;
};

// Runs every (p, q) cell of the grid, `runs` replicates each. Cell (pi, qi,
// run) draws from stream derive_stream("sweep", pi, qi, run) of the master
// seed, so results are independent of scheduling: any worker count yields
// the identical SweepResult. workers = 0 means hardware concurrency.
inline SweepResult run_sweep(const SweepConfig& config, int workers = 0) {
    validate(config);
    const std::size_t p_count = config.p_values.size();
    const std::size_t q_count = config.q_values.size();
    const std::size_t cell_count = p_count * q_count;

    SweepResult result;
    result.config = config;
    result.cells.resize(cell_count);

    auto compute_cell = [&config](std::size_t pi, std::size_t qi) {
        const double p = config.p_values[pi];
        const double q = config.q_values[qi];
        detail::RunningStats scores;
        detail::RunningStats densities;
        const Snapshot g0 = g0_preset(config.g0, config.n);
        for (std::int64_t run = 0; run < config.runs; ++run) {
            EmggChain chain(config.n, p, q, g0);
            RngStream rng(config.seed,
                          derive_stream("sweep", pi, qi,
                                        static_cast<std::uint64_t>(run)));
            detail::accumulate_emgg_scores(chain, rng, config.steps,
                                           config.burn_in, scores, densities);
        }
        SweepCell cell;
        cell.p = p;
        cell.q = q;
        cell.mean_e_score = scores.mean();
        cell.stddev_e_score = scores.stddev();
        cell.mean_density = densities.mean();
        cell.n_samples = scores.n();
        if (is_degenerate_chain(p, q)) {
            cell.predicted_score = std::numeric_limits<double>::quiet_NaN();
            cell.predicted_density = std::numeric_limits<double>::quiet_NaN();
        } else {
            cell.predicted_score = score_at_fixed_point(p, q);
            cell.predicted_density = fixed_point_density(p, q);
        }
        return cell;
    };

    int thread_count = workers > 0
                           ? workers
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (thread_count < 1) {
        thread_count = 1;
    }
    thread_count = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(thread_count), cell_count));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= cell_count || failed.load()) {
                return;
            }
            try {
                result.cells[index] = compute_cell(index / q_count, index % q_count);
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int i = 0; i < thread_count; ++i) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    if (failed.load()) {
        std::rethrow_exception(failure);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Closed-form agreement check for the growth model
// ---------------------------------------------------------------------------

struct BaCheckReport {
    bool pass = false;
    std::int64_t transitions_checked = 0;
    // Transition index of the first score that disagrees with its formula.
    std::optional<std::int64_t> first_mismatch;
    std::string detail;
    // Formula step indices whose closed-form edge value is 0/0 (reported 0
    // by convention); only index 0 of an edgeless seed qualifies, and it has
    // no simulated counterpart.
    std::vector<std::int64_t> convention_flagged;
};

// Generates a growth run and compares every per-transition score against
// the closed forms, exactly (rational equality). Transition k, which
// compares G_k to G_k+1, must match ba_v_score at k and ba_e_score at k+1;
// see ba_e_score for the one-step index offset of the edge formula.
inline BaCheckReport run_ba_check(const BaParams& params) {
    validate(params);
    const SnapshotSequence seq = generate_ba(params);
    const BaTheory theory{params.n0, params.m0, params.m};
    BaCheckReport report;
    if (!ba_e_score_defined(theory, 0)) {
        report.convention_flagged.push_back(0);
    }
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        const std::int64_t t = static_cast<std::int64_t>(k);
        const Rational v = v_dynamic_score(seq[k], seq[k + 1]);
        const Rational e = e_dynamic_score(seq[k], seq[k + 1]);
        if (v != ba_v_score(theory, t)) {
            report.first_mismatch = t;
            report.detail = "vertex score at transition " + std::to_string(t) +
                            ": got " + v.to_string() + ", predicted " +
                            ba_v_score(theory, t).to_string();
            return report;
        }
        if (e != ba_e_score(theory, t + 1)) {
            report.first_mismatch = t;
            report.detail = "edge score at transition " + std::to_string(t) +
                            ": got " + e.to_string() + ", predicted " +
                            ba_e_score(theory, t + 1).to_string();
            return report;
        }
        ++report.transitions_checked;
    }
    report.pass = true;
    return report;
}

// ---------------------------------------------------------------------------
// Stationary-regime frequency check
// ---------------------------------------------------------------------------

struct StationarityReport {
    std::vector<double> slot_frequency; // per-slot presence frequency
    double pooled_frequency = 0.0;      // over all slots and sampled steps
    double predicted_presence = 0.0;    // m* = (1-q)/(2-p-q)
    std::int64_t samples_per_slot = 0;
    double max_slot_deviation = 0.0;
    // 3 sqrt(pi (1-pi) / N) for N = slots * samples, the binomial bound the
    // pooled frequency is held to.
    double pooled_tolerance_3sigma = 0.0;
    bool pooled_within_tolerance = false;
};

// Empirical per-slot presence frequencies after burn-in against the
// stationary presence probability. Rejects degenerate chains.
inline StationarityReport stationarity_check(const EmggParams& params,
                                             std::int64_t burn_in) {
    validate(params);
    if (is_degenerate_chain(params.p, params.q)) {
        throw DegenerateError(
            "stationarity check needs |p+q-1| < 1 (" +
            to_string(classify_chain(params.p, params.q)) + " chain)");
    }
    if (burn_in < 0 || burn_in >= params.steps) {
        throw ParamError("burn_in must lie in [0, steps)");
    }
    EmggChain chain(params);
    RngStream rng(params.seed, derive_stream("emgg"));
    const std::int64_t slots = chain.current().slots();
    std::vector<std::int64_t> presence(slots, 0);
    for (std::int64_t t = 0; t < params.steps; ++t) {
        chain.step(rng);
        if (t < burn_in) {
            continue;
        }
        for (std::int64_t s = 0; s < slots; ++s) {
            presence[s] += chain.current().test(s) ? 1 : 0;
        }
    }

    StationarityReport report;
    report.samples_per_slot = params.steps - burn_in;
    report.predicted_presence = fixed_point_density(params.p, params.q);
    report.slot_frequency.resize(slots);
    std::int64_t total = 0;
    for (std::int64_t s = 0; s < slots; ++s) {
        total += presence[s];
        report.slot_frequency[s] = static_cast<double>(presence[s]) /
                                   static_cast<double>(report.samples_per_slot);
        report.max_slot_deviation =
            std::max(report.max_slot_deviation,
                     std::abs(report.slot_frequency[s] - report.predicted_presence));
    }
    const double pooled_samples =
        static_cast<double>(slots) * static_cast<double>(report.samples_per_slot);
    report.pooled_frequency = static_cast<double>(total) / pooled_samples;
    report.pooled_tolerance_3sigma =
        3.0 * std::sqrt(report.predicted_presence *
                        (1.0 - report.predicted_presence) / pooled_samples);
    report.pooled_within_tolerance =
        std::abs(report.pooled_frequency - report.predicted_presence) <=
        report.pooled_tolerance_3sigma;
    return report;
}

} // namespace dynascore
