#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dynascore/error.hpp"
#include "dynascore/generators.hpp"
#include "dynascore/graph.hpp"
#include "dynascore/rational.hpp"

namespace dynascore {

// Arbitrary-precision rational used by the exhaustive oracle, where exact
// products of many transition probabilities overflow 64-bit components.
using BigRational = boost::multiprecision::cpp_rational;

inline BigRational to_big(const Rational& r) { return BigRational(r.num(), r.den()); }

inline double to_double(const BigRational& r) { return r.convert_to<double>(); }

// ---------------------------------------------------------------------------
// Preferential-attachment closed forms
// ---------------------------------------------------------------------------

struct BaTheory {
    std::int64_t n0 = 1;
    std::int64_t m0 = 0;
    std::int64_t m = 1;
};

// Predicted vertex score for the pair (G_t, G_t+1): one vertex joins, none
// leave, so the ratio is 1 / (n0 + t + 1).
inline Rational ba_v_score(const BaTheory& theory, std::int64_t t) {
    if (t < 0) {
        throw ParamError("ba_v_score needs t >= 0");
    }
    return Rational(1, theory.n0 + t + 1);
}

// False only for (m0 = 0, t = 0), where the formula below degenerates to 0/0.
inline bool ba_e_score_defined(const BaTheory& theory, std::int64_t t) {
    return theory.m0 + t * theory.m > 0;
}

// Predicted edge score m / (m0 + t m). Note the index convention: this
// value equals the simulated edge score of the pair (G_t-1, G_t), whose
// union is the m0 + t m edges alive at step t. It sits one step ahead of
// ba_v_score, which is indexed by the earlier snapshot of its pair.
// The undefined t = 0 entry of an edgeless seed is 0 by the 0/0 convention;
// probe ba_e_score_defined to tell that case apart.
inline Rational ba_e_score(const BaTheory& theory, std::int64_t t) {
    if (t < 0) {
        throw ParamError("ba_e_score needs t >= 0");
    }
    if (!ba_e_score_defined(theory, t)) {
        return Rational(0);
    }
    return Rational(theory.m, theory.m0 + t * theory.m);
}

// ---------------------------------------------------------------------------
// Two-state chain closed forms. F is double, Rational, or BigRational; the
// formulas only need field arithmetic, comparisons, and F(int).
// ---------------------------------------------------------------------------

namespace detail {
template <class F>
F abs_value(F x) {
    return x < F(0) ? -x : x;
}
} // namespace detail

// p + q - 1: the second eigenvalue of the transition matrix and the
// contraction factor of the expected-density map.
template <class F>
F chain_drift(F p, F q) {
    return p + q - F(1);
}

// |p+q-1| == 1 holds exactly for p=q=1 (frozen) and p=q=0 (blinking).
template <class F>
bool is_degenerate_chain(F p, F q) {
    return detail::abs_value(chain_drift(p, q)) == F(1);
}

enum class ChainRegime {
    ergodic,     // |p+q-1| < 1, stationary regime exists
    static_chain, // p = q = 1: every snapshot equals g0
    blinking,    // p = q = 0: each edge set is the complement of the last
};

template <class F>
ChainRegime classify_chain(F p, F q) {
    if (!is_degenerate_chain(p, q)) {
        return ChainRegime::ergodic;
    }
    return p == F(1) ? ChainRegime::static_chain : ChainRegime::blinking;
}

inline std::string to_string(ChainRegime regime) {
    switch (regime) {
    case ChainRegime::ergodic:
        return "ergodic";
    case ChainRegime::static_chain:
        return "static";
    case ChainRegime::blinking:
        return "blinking";
    }
    return "unknown";
}

// One step of the expected-density map: f(m) = p m + (1-q)(1-m).
// (The alternative form (p+q-1) m drops the constant term (1-q) and has a
// fixed point only at 0; this affine map is the one whose fixed point is
// (1-q)/(2-p-q), so it is the form implemented throughout.)
template <class F>
F density_step(F p, F q, F m_hat) {
    return p * m_hat + (F(1) - q) * (F(1) - m_hat);
}

// Fixed point m* = (1-q)/(2-p-q) of density_step; also the stationary
// per-slot presence probability.
template <class F>
F fixed_point_density(F p, F q) {
    if (is_degenerate_chain(p, q)) {
        throw DegenerateError("no fixed-point density: |p+q-1| = 1 (" +
                              to_string(classify_chain(p, q)) + " chain)");
    }
    return (F(1) - q) / (F(2) - p - q);
}

// False only for m_hat = 0 with q = 1, where the expected union is empty.
template <class F>
bool expected_e_score_defined(F q, F m_hat) {
    return !(m_hat == F(0) && q == F(1));
}

// Ratio-of-expectations edge score at density m_hat:
//
//     ((1-p) m + (1-q)(1-m)) / (m + (1-q)(1-m))
//
// i.e. expected symmetric-difference size over expected union size. This is
// an estimate of the expected per-step ratio, exact only in the many-slot
// concentration limit; SmallChainOracle quantifies the finite-size gap.
// The empty-union case (m_hat = 0, q = 1) returns 0 by the 0/0 convention.
template <class F>
F expected_e_score(F p, F q, F m_hat) {
    const F appearing = (F(1) - q) * (F(1) - m_hat);
    const F union_size = m_hat + appearing;
    if (union_size == F(0)) {
        return F(0);
    }
    return ((F(1) - p) * m_hat + appearing) / union_size;
}

// expected_e_score evaluated at m*: simplifies to 2(1-p)/(2-p), independent
// of q. q only gates the degeneracy check.
template <class F>
F score_at_fixed_point(F p, F q) {
    if (is_degenerate_chain(p, q)) {
        throw DegenerateError("no fixed-point score: |p+q-1| = 1 (" +
                              to_string(classify_chain(p, q)) + " chain)");
    }
    return F(2) * (F(1) - p) / (F(2) - p);
}

// Bundle of the closed-form predictions for one (p, q) pair. For degenerate
// chains the numeric fields stay empty and the regime tells which special
// behavior applies.
template <class F>
struct EmggTheory {
    F p;
    F q;
    ChainRegime regime = ChainRegime::ergodic;
    std::optional<F> pi_star;          // stationary presence probability
    std::optional<F> m_star;           // fixed-point density; equals pi_star
    std::optional<F> score_at_m_star;  // 2(1-p)/(2-p)
};

template <class F>
EmggTheory<F> make_emgg_theory(F p, F q) {
    EmggTheory<F> theory;
    theory.p = p;
    theory.q = q;
    theory.regime = classify_chain(p, q);
    if (theory.regime == ChainRegime::ergodic) {
        theory.m_star = fixed_point_density(p, q);
        theory.pi_star = theory.m_star;
        theory.score_at_m_star = score_at_fixed_point(p, q);
    }
    return theory;
}

// ---------------------------------------------------------------------------
// Exhaustive small-n oracle
// ---------------------------------------------------------------------------

// Ground-truth expectations for the edge score of an n-vertex chain with
// n <= 4, by direct enumeration of all (E_t, E_t+1) edge-set pairs with
// exact rational transition probabilities. Deliberately brute force: this
// is the independent check for the closed forms above, so it shares no
// algebra with them beyond the per-slot transition rule.
class SmallChainOracle {
public:
    static constexpr std::int64_t kMaxVertices = 4;

    SmallChainOracle(std::int64_t n, const Rational& p, const Rational& q)
        : SmallChainOracle(n, to_big(p), to_big(q)) {}

    SmallChainOracle(std::int64_t n, BigRational p, BigRational q)
        : n_(n), slots_(slot_count(n)), p_(std::move(p)), q_(std::move(q)) {
        if (n < 2 || n > kMaxVertices) {
            throw ParamError("exhaustive oracle handles 2 <= n <= 4, got n=" +
                             std::to_string(n));
        }
        if (p_ < 0 || p_ > 1 || q_ < 0 || q_ > 1) {
            throw ParamError("probabilities must lie in [0,1]");
        }
        const auto powers = [this](const BigRational& base) {
            std::vector<BigRational> table(slots_ + 1);
            table[0] = 1;
            for (std::int64_t i = 1; i <= slots_; ++i) {
                table[i] = table[i - 1] * base;
            }
            return table;
        };
        stay_present_ = powers(p_);
        vanish_ = powers(BigRational(1) - p_);
        appear_ = powers(BigRational(1) - q_);
        stay_absent_ = powers(q_);
    }

    std::int64_t n() const { return n_; }
    std::int64_t slots() const { return slots_; }

    // Exact probability of moving from edge set e to edge set f in one step.
    BigRational pair_probability(std::uint32_t e, std::uint32_t f) const {
        const std::uint32_t mask = state_mask();
        const int kept = std::popcount(e & f);
        const int vanished = std::popcount(e & ~f & mask);
        const int appeared = std::popcount(~e & f & mask);
        const int stayed_out = slots_ - kept - vanished - appeared;
        return stay_present_[kept] * vanish_[vanished] * appear_[appeared] *
               stay_absent_[stayed_out];
    }

    // E[|E_t △ E_t+1| / |E_t ∪ E_t+1|] with E_t drawn from the stationary
    // product distribution (0/0 terms contribute 0), as an exact rational.
    BigRational stationary_expected_score() const {
        return expected_score_from(stationary_distribution());
    }

    // Same expectation with E_t reached from g0 after `step` transitions.
    BigRational expected_score_after(const Snapshot& g0, std::int64_t step) const {
        if (step < 0) {
            throw ParamError("step must be non-negative");
        }
        std::vector<BigRational> mu(state_count());
        mu[state_of(g0)] = 1;
        for (std::int64_t i = 0; i < step; ++i) {
            mu = evolve(mu);
        }
        return expected_score_from(mu);
    }

    // Stationary distribution as the per-slot product form, cross-checked
    // exactly against one evolution step before use.
    std::vector<BigRational> stationary_distribution() const {
        if (is_degenerate_chain(p_, q_)) {
            throw DegenerateError("no stationary distribution: |p+q-1| = 1");
        }
        const BigRational present = fixed_point_density(p_, q_);
        const BigRational absent = BigRational(1) - present;
        std::vector<BigRational> pi(state_count());
        for (std::uint32_t e = 0; e < state_count(); ++e) {
            BigRational prob = 1;
            for (std::int64_t s = 0; s < slots_; ++s) {
                prob *= ((e >> s) & 1u) ? present : absent;
            }
            pi[e] = prob;
        }
        if (evolve(pi) != pi) {
            throw InternalError("product distribution is not stationary");
        }
        return pi;
    }

private:
    std::uint32_t state_count() const { return 1u << slots_; }
    std::uint32_t state_mask() const { return state_count() - 1; }

    std::uint32_t state_of(const Snapshot& g0) const {
        if (g0.order() != n_) {
            throw ParamError("g0 has " + std::to_string(g0.order()) +
                             " vertices, expected n=" + std::to_string(n_));
        }
        for (std::int64_t v = 0; v < n_; ++v) {
            if (g0.vertices()[v] != v) {
                throw ParamError("g0 vertices must be labeled 0.." +
                                 std::to_string(n_ - 1));
            }
        }
        std::uint32_t state = 0;
        for (const Edge& e : g0.edges()) {
            state |= 1u << edge_slot(e.low(), e.high(), n_);
        }
        return state;
    }

    std::vector<BigRational> evolve(const std::vector<BigRational>& mu) const {
        std::vector<BigRational> next(state_count());
        for (std::uint32_t e = 0; e < state_count(); ++e) {
            if (mu[e] == 0) {
                continue;
            }
            for (std::uint32_t f = 0; f < state_count(); ++f) {
                next[f] += mu[e] * pair_probability(e, f);
            }
        }
        return next;
    }

    BigRational expected_score_from(const std::vector<BigRational>& mu) const {
        BigRational total = 0;
        for (std::uint32_t e = 0; e < state_count(); ++e) {
            if (mu[e] == 0) {
                continue;
            }
            for (std::uint32_t f = 0; f < state_count(); ++f) {
                const int union_size = std::popcount(e | f);
                if (union_size == 0) {
                    continue; // identical empty sets: score 0
                }
                const BigRational score(std::popcount(e ^ f), union_size);
                total += mu[e] * pair_probability(e, f) * score;
            }
        }
        return total;
    }

    std::int64_t n_;
    std::int64_t slots_;
    BigRational p_;
    BigRational q_;
    std::vector<BigRational> stay_present_;
    std::vector<BigRational> vanish_;
    std::vector<BigRational> appear_;
    std::vector<BigRational> stay_absent_;
};

} // namespace dynascore
