#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dynascore/error.hpp"
#include "dynascore/graph.hpp"
#include "dynascore/rng.hpp"
#include "dynascore/score.hpp"

namespace dynascore {

constexpr std::int64_t slot_count(std::int64_t n) { return n * (n - 1) / 2; }

// Index of edge (u,v), u < v, in the row-wise upper-triangle layout.
constexpr std::int64_t edge_slot(std::int64_t u, std::int64_t v, std::int64_t n) {
    return u * n - u * (u + 1) / 2 + (v - u - 1);
}

// Inverse of edge_slot: the (u,v) pair stored at a slot index.
inline std::pair<std::int64_t, std::int64_t> slot_edge(std::int64_t slot,
                                                       std::int64_t n) {
    std::int64_t u = 0;
    while (slot >= n - 1 - u) {
        slot -= n - 1 - u;
        ++u;
    }
    return {u, u + 1 + slot};
}

// Dense presence bitset over the n(n-1)/2 edge slots of an n-vertex graph
// with vertex labels 0..n-1.
class EdgeBits {
public:
    explicit EdgeBits(std::int64_t n)
        : n_(n), slots_(slot_count(n)), words_((slots_ + 63) / 64, 0) {}

    static EdgeBits from_snapshot(const Snapshot& s, std::int64_t n) {
        EdgeBits bits(n);
        for (const Edge& e : s.edges()) {
            if (e.high() >= n) {
                throw ParamError("edge (" + std::to_string(e.low()) + "," +
                                 std::to_string(e.high()) + ") does not fit in a " +
                                 std::to_string(n) + "-vertex slot table");
            }
            bits.set(edge_slot(e.low(), e.high(), n), true);
        }
        return bits;
    }

    std::int64_t n() const { return n_; }
    std::int64_t slots() const { return slots_; }

    bool test(std::int64_t slot) const {
        return (words_[slot >> 6] >> (slot & 63)) & 1ULL;
    }

    void set(std::int64_t slot, bool value) {
        const std::uint64_t mask = 1ULL << (slot & 63);
        if (value) {
            words_[slot >> 6] |= mask;
        } else {
            words_[slot >> 6] &= ~mask;
        }
    }

    std::int64_t count() const {
        std::int64_t total = 0;
        for (std::uint64_t w : words_) {
            total += std::popcount(w);
        }
        return total;
    }

    // Symmetric-difference and union sizes against another state on the
    // same slot table.
    static JaccardCounts transition_counts(const EdgeBits& a, const EdgeBits& b) {
        JaccardCounts c;
        for (std::size_t i = 0; i < a.words_.size(); ++i) {
            c.sym_diff += std::popcount(a.words_[i] ^ b.words_[i]);
            c.union_size += std::popcount(a.words_[i] | b.words_[i]);
        }
        return c;
    }

    // Materializes the state as a snapshot on all n labeled vertices.
    Snapshot to_snapshot(std::int64_t t) const {
        std::vector<VertexId> vertices(n_);
        for (std::int64_t v = 0; v < n_; ++v) {
            vertices[v] = v;
        }
        std::vector<Edge> edges;
        edges.reserve(count());
        std::int64_t slot = 0;
        for (std::int64_t u = 0; u < n_; ++u) {
            for (std::int64_t v = u + 1; v < n_; ++v, ++slot) {
                if (test(slot)) {
                    edges.emplace_back(u, v);
                }
            }
        }
        return Snapshot(t, std::move(vertices), std::move(edges));
    }

    bool operator==(const EdgeBits&) const = default;

private:
    std::int64_t n_;
    std::int64_t slots_;
    std::vector<std::uint64_t> words_;
};

// Initial-graph preset: empty, complete, or an Erdős–Rényi draw where each
// slot is present independently with the given probability.
struct G0Spec {
    enum class Kind { empty, complete, gnp };

    Kind kind = Kind::empty;
    double prob = 0.5;      // gnp only
    std::uint64_t seed = 0; // gnp only
};

inline Snapshot g0_preset(const G0Spec& spec, std::int64_t n) {
    if (n < 1) {
        throw ParamError("preset graph needs n >= 1, got " + std::to_string(n));
    }
    EdgeBits bits(n);
    switch (spec.kind) {
    case G0Spec::Kind::empty:
        break;
    case G0Spec::Kind::complete:
        for (std::int64_t s = 0; s < bits.slots(); ++s) {
            bits.set(s, true);
        }
        break;
    case G0Spec::Kind::gnp: {
        if (spec.prob < 0.0 || spec.prob > 1.0) {
            throw ParamError("gnp probability must lie in [0,1]");
        }
        RngStream rng(spec.seed, derive_stream("gnp"));
        for (std::int64_t s = 0; s < bits.slots(); ++s) {
            bits.set(s, rng.bernoulli(spec.prob));
        }
        break;
    }
    }
    return bits.to_snapshot(0);
}

// ---------------------------------------------------------------------------
// Edge-Markovian generator
// ---------------------------------------------------------------------------

struct EmggParams {
    std::int64_t n = 1;   // constant vertex count, labels 0..n-1
    double p = 0.5;       // probability a present edge stays present
    double q = 0.5;       // probability an absent edge stays absent
    G0Spec g0;
    std::int64_t steps = 0;
    std::uint64_t seed = 0;
};

inline void validate(const EmggParams& params) {
    if (params.n < 1) {
        throw ParamError("emgg needs n >= 1, got " + std::to_string(params.n));
    }
    if (params.p < 0.0 || params.p > 1.0) {
        throw ParamError("p must lie in [0,1], got " + std::to_string(params.p));
    }
    if (params.q < 0.0 || params.q > 1.0) {
        throw ParamError("q must lie in [0,1], got " + std::to_string(params.q));
    }
    if (params.steps < 0) {
        throw ParamError("steps must be non-negative");
    }
}

// Two-state chain over every edge slot, advanced in ascending slot order
// with one bernoulli draw per slot per step; the draw order is part of the
// determinism contract. The vertex set never changes.
class EmggChain {
public:
    EmggChain(std::int64_t n, double p, double q, const Snapshot& g0)
        : p_(p), q_(q), cur_(n), prev_(n) {
        if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0) {
            throw ParamError("emgg probabilities must lie in [0,1]");
        }
        if (g0.order() != n) {
            throw ParamError("g0 has " + std::to_string(g0.order()) +
                             " vertices, expected n=" + std::to_string(n));
        }
        for (std::int64_t v = 0; v < n; ++v) {
            if (v >= g0.order() || g0.vertices()[v] != v) {
                throw ParamError("g0 vertices must be labeled 0.." +
                                 std::to_string(n - 1));
            }
        }
        cur_ = EdgeBits::from_snapshot(g0, n);
        prev_ = cur_;
    }

    explicit EmggChain(const EmggParams& params)
        : EmggChain(params.n, params.p, params.q, g0_preset(params.g0, params.n)) {
        validate(params);
    }

    void step(RngStream& rng) {
        prev_ = cur_;
        for (std::int64_t s = 0; s < cur_.slots(); ++s) {
            if (prev_.test(s)) {
                cur_.set(s, rng.bernoulli(p_)); // stays present with prob p
            } else {
                cur_.set(s, rng.bernoulli(1.0 - q_)); // appears with prob 1-q
            }
        }
        ++transitions_;
    }

    const EdgeBits& current() const { return cur_; }
    const EdgeBits& previous() const { return prev_; }
    std::int64_t transitions() const { return transitions_; }

    JaccardCounts last_transition() const {
        return EdgeBits::transition_counts(prev_, cur_);
    }

private:
    double p_;
    double q_;
    EdgeBits cur_;
    EdgeBits prev_;
    std::int64_t transitions_ = 0;
};

// Runs the chain for params.steps transitions and materializes every state.
// Deterministic in (params.seed); uses stream derive_stream("emgg").
inline SnapshotSequence generate_emgg(const EmggParams& params) {
    validate(params);
    EmggChain chain(params);
    RngStream rng(params.seed, derive_stream("emgg"));
    std::vector<Snapshot> snapshots;
    snapshots.reserve(params.steps + 1);
    snapshots.push_back(chain.current().to_snapshot(0));
    for (std::int64_t t = 1; t <= params.steps; ++t) {
        chain.step(rng);
        snapshots.push_back(chain.current().to_snapshot(t));
    }
    return SnapshotSequence(std::move(snapshots));
}

// ---------------------------------------------------------------------------
// Preferential-attachment growth
// ---------------------------------------------------------------------------

struct BaParams {
    std::int64_t n0 = 1;    // seed vertex count
    std::int64_t m0 = 0;    // seed edge count
    std::int64_t m = 1;     // edges attached per new vertex
    std::int64_t steps = 0; // growth steps
    std::uint64_t seed = 0;
};

inline void validate(const BaParams& params) {
    if (params.n0 < 1) {
        throw ParamError("ba needs n0 >= 1, got " + std::to_string(params.n0));
    }
    if (params.m0 < 0 || params.m0 > slot_count(params.n0)) {
        throw ParamError("m0 must lie in [0, n0(n0-1)/2], got " +
                         std::to_string(params.m0));
    }
    if (params.m < 1 || params.m > params.n0) {
        throw ParamError("m must lie in [1, n0], got " + std::to_string(params.m));
    }
    if (params.steps < 0) {
        throw ParamError("steps must be non-negative");
    }
}

namespace detail {

// m0 distinct edge slots drawn uniformly from the n0-vertex slot table
// (Floyd's sampling, one rng draw per selected slot).
inline std::vector<std::int64_t> sample_seed_slots(std::int64_t n0, std::int64_t m0,
                                                   RngStream& rng) {
    const std::int64_t total = slot_count(n0);
    std::unordered_set<std::int64_t> picked;
    picked.reserve(static_cast<std::size_t>(m0) * 2);
    for (std::int64_t j = total - m0; j < total; ++j) {
        const std::int64_t r =
            static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
        if (!picked.insert(r).second) {
            picked.insert(j);
        }
    }
    std::vector<std::int64_t> slots(picked.begin(), picked.end());
    std::sort(slots.begin(), slots.end());
    return slots;
}

} // namespace detail

// Growth process: each step adds one vertex and attaches it to m distinct
// existing vertices, each chosen by degree roulette over start-of-step
// degrees with already-chosen targets rejected. When no unchosen vertex
// with positive degree remains (all-isolated seed, or the positive-degree
// pool is exhausted), the remaining picks are uniform over the unchosen
// vertices, which keeps |V| and |E| growth exact at every step.
// Deterministic in (params.seed); uses stream derive_stream("ba").
inline SnapshotSequence generate_ba(const BaParams& params) {
    validate(params);
    RngStream rng(params.seed, derive_stream("ba"));

    const std::int64_t final_order = params.n0 + params.steps;
    std::vector<std::int64_t> degree(final_order, 0);
    std::vector<Edge> edges;
    edges.reserve(params.m0 + params.steps * params.m);

    for (std::int64_t slot : detail::sample_seed_slots(params.n0, params.m0, rng)) {
        const auto [u, v] = slot_edge(slot, params.n0);
        edges.emplace_back(u, v);
        ++degree[u];
        ++degree[v];
    }

    auto materialize = [&edges](std::int64_t t, std::int64_t order) {
        std::vector<VertexId> vertices(order);
        for (std::int64_t v = 0; v < order; ++v) {
            vertices[v] = v;
        }
        return Snapshot(t, std::move(vertices), edges);
    };

    std::vector<Snapshot> snapshots;
    snapshots.reserve(params.steps + 1);
    snapshots.push_back(materialize(0, params.n0));

    std::vector<char> chosen(final_order, 0);
    for (std::int64_t s = 1; s <= params.steps; ++s) {
        const std::int64_t existing = params.n0 + s - 1;
        const std::int64_t new_vertex = existing;
        const std::int64_t total_degree = 2 * static_cast<std::int64_t>(edges.size());

        std::fill(chosen.begin(), chosen.begin() + existing, 0);
        std::vector<std::int64_t> targets;
        targets.reserve(params.m);

        for (std::int64_t pick = 0; pick < params.m; ++pick) {
            std::int64_t positive_unchosen = 0;
            for (std::int64_t v = 0; v < existing; ++v) {
                if (!chosen[v] && degree[v] > 0) {
                    ++positive_unchosen;
                }
            }
            std::int64_t target = -1;
            if (positive_unchosen > 0) {
                for (;;) {
                    std::int64_t r = static_cast<std::int64_t>(
                        rng.below(static_cast<std::uint64_t>(total_degree)));
                    std::int64_t v = 0;
                    while (r >= degree[v]) {
                        r -= degree[v];
                        ++v;
                    }
                    if (!chosen[v]) {
                        target = v;
                        break;
                    }
                }
            } else {
                const std::int64_t unchosen = existing - pick;
                std::int64_t k = static_cast<std::int64_t>(
                    rng.below(static_cast<std::uint64_t>(unchosen)));
                for (std::int64_t v = 0; v < existing; ++v) {
                    if (!chosen[v] && k-- == 0) {
                        target = v;
                        break;
                    }
                }
            }
            if (target < 0 || chosen[target]) {
                throw InternalError("ba attachment failed to pick a fresh target");
            }
            chosen[target] = 1;
            targets.push_back(target);
        }

        const std::size_t before = edges.size();
        for (std::int64_t target : targets) {
            edges.emplace_back(target, new_vertex);
            ++degree[target];
        }
        degree[new_vertex] = params.m;
        if (edges.size() != before + static_cast<std::size_t>(params.m)) {
            throw InternalError("ba step did not add exactly m edges");
        }
        snapshots.push_back(materialize(s, existing + 1));
    }
    return SnapshotSequence(std::move(snapshots));
}

} // namespace dynascore
