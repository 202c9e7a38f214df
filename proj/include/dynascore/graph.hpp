#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynascore/error.hpp"
#include "dynascore/rational.hpp"

namespace dynascore {

// Vertex identity is a non-negative integer label, stable across snapshots.
using VertexId = std::int64_t;

// Undirected simple edge; endpoints are stored in canonical (low, high)
// order, so Edge(u, v) == Edge(v, u). Self-loops are rejected.
class Edge {
public:
    Edge(VertexId u, VertexId v) {
        if (u == v) {
            throw ParamError("self-loop edge (" + std::to_string(u) + "," +
                             std::to_string(v) + ") is not allowed");
        }
        if (u < 0 || v < 0) {
            throw ParamError("negative vertex id on edge (" + std::to_string(u) +
                             "," + std::to_string(v) + ")");
        }
        low_ = std::min(u, v);
        high_ = std::max(u, v);
    }

    VertexId low() const { return low_; }
    VertexId high() const { return high_; }

    friend auto operator<=>(const Edge&, const Edge&) = default;

private:
    VertexId low_;
    VertexId high_;
};

// One static graph of a dynamic sequence. Immutable after construction:
// vertex and edge lists are sorted and duplicate-free, and every edge
// endpoint is a member of the vertex list. Safe to share across threads.
class Snapshot {
public:
    Snapshot() = default;

    Snapshot(std::int64_t t, std::vector<VertexId> vertices, std::vector<Edge> edges)
        : t_(t), vertices_(std::move(vertices)), edges_(std::move(edges)) {
        if (t_ < 0) {
            throw ParamError("snapshot step must be non-negative, got " +
                             std::to_string(t_));
        }
        for (VertexId v : vertices_) {
            if (v < 0) {
                throw ParamError("negative vertex id " + std::to_string(v));
            }
        }
        for (const Edge& e : edges_) {
            vertices_.push_back(e.low());
            vertices_.push_back(e.high());
        }
        std::sort(vertices_.begin(), vertices_.end());
        vertices_.erase(std::unique(vertices_.begin(), vertices_.end()),
                        vertices_.end());
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    }

    std::int64_t step() const { return t_; }
    const std::vector<VertexId>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::int64_t order() const { return static_cast<std::int64_t>(vertices_.size()); }
    std::int64_t size() const { return static_cast<std::int64_t>(edges_.size()); }

    bool has_vertex(VertexId v) const {
        return std::binary_search(vertices_.begin(), vertices_.end(), v);
    }
    bool has_edge(const Edge& e) const {
        return std::binary_search(edges_.begin(), edges_.end(), e);
    }

    bool operator==(const Snapshot&) const = default;

private:
    std::int64_t t_ = 0;
    std::vector<VertexId> vertices_;
    std::vector<Edge> edges_;
};

// Builds a snapshot from raw labels and endpoint pairs: edges are
// canonicalized and deduplicated, endpoints are added to the vertex set.
inline Snapshot make_snapshot(std::int64_t t,
                              const std::vector<VertexId>& vertex_labels,
                              const std::vector<std::pair<VertexId, VertexId>>& edge_pairs) {
    std::vector<Edge> edges;
    edges.reserve(edge_pairs.size());
    for (const auto& [u, v] : edge_pairs) {
        edges.emplace_back(u, v);
    }
    return Snapshot(t, vertex_labels, std::move(edges));
}

// |E| / (n(n-1)/2). The denominator count defaults to the snapshot's order;
// pass n_override when the slot count is fixed externally (e.g. a constant
// vertex population with isolated vertices missing from an ingested trace).
inline Rational density(const Snapshot& s,
                        std::optional<std::int64_t> n_override = std::nullopt) {
    const std::int64_t n = n_override.value_or(s.order());
    if (n < 2) {
        throw ParamError("density undefined for fewer than 2 vertices (n=" +
                         std::to_string(n) + ")");
    }
    if (n < s.order()) {
        throw ParamError("density override n=" + std::to_string(n) +
                         " is smaller than the snapshot order " +
                         std::to_string(s.order()));
    }
    return Rational(s.size(), n * (n - 1) / 2);
}

// Ordered snapshots with consecutive step indices; scores compare t to t+1.
class SnapshotSequence {
public:
    SnapshotSequence() = default;

    explicit SnapshotSequence(std::vector<Snapshot> snapshots)
        : snapshots_(std::move(snapshots)) {
        for (std::size_t i = 1; i < snapshots_.size(); ++i) {
            if (snapshots_[i].step() != snapshots_[i - 1].step() + 1) {
                throw ParamError("snapshot steps must be consecutive: step " +
                                 std::to_string(snapshots_[i].step()) + " follows " +
                                 std::to_string(snapshots_[i - 1].step()));
            }
        }
    }

    std::size_t size() const { return snapshots_.size(); }
    bool empty() const { return snapshots_.empty(); }
    const Snapshot& operator[](std::size_t i) const { return snapshots_[i]; }
    const Snapshot& front() const { return snapshots_.front(); }
    const Snapshot& back() const { return snapshots_.back(); }
    auto begin() const { return snapshots_.begin(); }
    auto end() const { return snapshots_.end(); }

    std::int64_t first_step() const {
        return snapshots_.empty() ? 0 : snapshots_.front().step();
    }

    bool operator==(const SnapshotSequence&) const = default;

private:
    std::vector<Snapshot> snapshots_;
};

} // namespace dynascore
