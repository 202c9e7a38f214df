#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynascore/error.hpp"
#include "dynascore/graph.hpp"
#include "dynascore/rational.hpp"

namespace dynascore {

// Symmetric-difference and union cardinalities of a set pair.
struct JaccardCounts {
    std::int64_t sym_diff = 0;
    std::int64_t union_size = 0;

    bool operator==(const JaccardCounts&) const = default;
};

// Counts over two sorted, duplicate-free ranges (single merge pass).
template <class T>
JaccardCounts jaccard_counts(const std::vector<T>& a, const std::vector<T>& b) {
    JaccardCounts c;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++c.sym_diff;
            ++i;
        } else if (b[j] < a[i]) {
            ++c.sym_diff;
            ++j;
        } else {
            ++i;
            ++j;
        }
        ++c.union_size;
    }
    const std::int64_t tail =
        static_cast<std::int64_t>((a.size() - i) + (b.size() - j));
    c.sym_diff += tail;
    c.union_size += tail;
    return c;
}

// |A △ B| / |A ∪ B|. Two empty sets are identical, so 0/0 counts as 0;
// this keeps "score 0 iff equal sets" an equivalence.
inline Rational jaccard_distance(const JaccardCounts& c) {
    if (c.union_size == 0) {
        return Rational(0);
    }
    return Rational(c.sym_diff, c.union_size);
}

inline Rational v_dynamic_score(const Snapshot& g_t, const Snapshot& g_t1) {
    return jaccard_distance(jaccard_counts(g_t.vertices(), g_t1.vertices()));
}

// Compares canonical edge sets only; vertex churn that leaves an edge's
// endpoints in place does not move this score.
inline Rational e_dynamic_score(const Snapshot& g_t, const Snapshot& g_t1) {
    return jaccard_distance(jaccard_counts(g_t.edges(), g_t1.edges()));
}

enum class ScoreKind { vertex, edge, both };

// Score sample for one consecutive pair. Counts keep the ratios exact;
// absent counts mean the corresponding score was not requested.
struct ScorePoint {
    std::int64_t t = 0; // earlier snapshot of the compared pair
    std::optional<JaccardCounts> vertex_counts;
    std::optional<JaccardCounts> edge_counts;

    std::optional<Rational> v_score() const {
        if (!vertex_counts) {
            return std::nullopt;
        }
        return jaccard_distance(*vertex_counts);
    }
    std::optional<Rational> e_score() const {
        if (!edge_counts) {
            return std::nullopt;
        }
        return jaccard_distance(*edge_counts);
    }
};

// One point per consecutive snapshot pair, in step order.
struct ScoreSeries {
    std::vector<ScorePoint> points;
};

inline ScoreSeries score_sequence(const SnapshotSequence& seq,
                                  ScoreKind kind = ScoreKind::both) {
    if (seq.size() < 2) {
        throw ParamError("nothing to compare: need at least 2 snapshots, got " +
                         std::to_string(seq.size()));
    }
    ScoreSeries series;
    series.points.reserve(seq.size() - 1);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        ScorePoint point;
        point.t = seq[i].step();
        if (kind != ScoreKind::edge) {
            point.vertex_counts = jaccard_counts(seq[i].vertices(), seq[i + 1].vertices());
        }
        if (kind != ScoreKind::vertex) {
            point.edge_counts = jaccard_counts(seq[i].edges(), seq[i + 1].edges());
        }
        series.points.push_back(point);
    }
    return series;
}

} // namespace dynascore
