#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dynascore/error.hpp"
#include "dynascore/graph.hpp"
#include "dynascore/harness.hpp"
#include "dynascore/score.hpp"

namespace dynascore {

// Text formats, all ASCII with LF line endings.
//
// Snapshot file: one block per snapshot, headed by "# t=<k>" with
// consecutive step indices. Body lines are "v <id>" (isolated vertex) or
// "e <u> <w>" (edge; endpoints need no v line). Blank lines and other
// "#" lines are ignored.
//
// Score CSV: "t,v_score,e_score", scores with 6 decimals, "nan" when a
// score was not computed.
//
// Sweep CSV: "p,q,nervousnessAverage" ('nervousness' is an older name for
// this metric, kept so existing plotting pipelines consume the file
// unchanged); the extended schema appends ",stddev,meanDensity,predicted".

namespace detail {

inline std::string format_fixed6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

inline std::string format_prob(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

} // namespace detail

inline void write_snapshot_file(std::ostream& os, const SnapshotSequence& seq) {
    std::vector<VertexId> endpoints;
    for (const Snapshot& snapshot : seq) {
        os << "# t=" << snapshot.step() << "\n";
        endpoints.clear();
        endpoints.reserve(snapshot.edges().size() * 2);
        for (const Edge& e : snapshot.edges()) {
            endpoints.push_back(e.low());
            endpoints.push_back(e.high());
        }
        std::sort(endpoints.begin(), endpoints.end());
        for (VertexId v : snapshot.vertices()) {
            if (!std::binary_search(endpoints.begin(), endpoints.end(), v)) {
                os << "v " << v << "\n";
            }
        }
        for (const Edge& e : snapshot.edges()) {
            os << "e " << e.low() << " " << e.high() << "\n";
        }
    }
}

inline SnapshotSequence read_snapshot_file(std::istream& is) {
    std::vector<Snapshot> snapshots;
    std::vector<VertexId> vertices;
    std::vector<std::pair<VertexId, VertexId>> edge_pairs;
    std::int64_t current_t = -1;
    bool in_snapshot = false;

    auto parse_int = [](const std::string& token, std::int64_t line,
                        const char* what) {
        try {
            std::size_t used = 0;
            const std::int64_t value = std::stoll(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
            return value;
        } catch (const std::exception&) {
            throw ParseError(line, std::string("invalid ") + what + " '" + token +
                                       "'");
        }
    };

    auto flush = [&]() {
        if (in_snapshot) {
            snapshots.push_back(make_snapshot(current_t, vertices, edge_pairs));
            vertices.clear();
            edge_pairs.clear();
        }
    };

    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::istringstream tokens(line);
        std::string head;
        if (!(tokens >> head)) {
            continue; // blank
        }
        if (head == "#") {
            std::string rest;
            tokens >> rest;
            if (rest.rfind("t=", 0) != 0) {
                continue; // comment
            }
            const std::int64_t t = parse_int(rest.substr(2), line_no, "step index");
            if (t < 0) {
                throw ParseError(line_no, "negative step index");
            }
            if (in_snapshot && t != current_t + 1) {
                throw ParseError(line_no, "snapshot steps must be consecutive: t=" +
                                              std::to_string(t) + " follows t=" +
                                              std::to_string(current_t));
            }
            flush();
            current_t = t;
            in_snapshot = true;
            continue;
        }
        if (head.front() == '#') {
            continue; // comment without space, e.g. "#note"
        }
        if (!in_snapshot) {
            throw ParseError(line_no, "'" + head + "' line before the first '# t=' header");
        }
        if (head == "v") {
            std::string id;
            if (!(tokens >> id)) {
                throw ParseError(line_no, "vertex line needs an id: 'v <id>'");
            }
            std::string extra;
            if (tokens >> extra) {
                throw ParseError(line_no, "unexpected token '" + extra + "'");
            }
            vertices.push_back(parse_int(id, line_no, "vertex id"));
        } else if (head == "e") {
            std::string u;
            std::string w;
            if (!(tokens >> u >> w)) {
                throw ParseError(line_no, "edge line needs two endpoints: 'e <u> <w>'");
            }
            std::string extra;
            if (tokens >> extra) {
                throw ParseError(line_no, "unexpected token '" + extra + "'");
            }
            const std::int64_t a = parse_int(u, line_no, "vertex id");
            const std::int64_t b = parse_int(w, line_no, "vertex id");
            if (a == b) {
                throw ParseError(line_no, "self-loop edge (" + u + "," + w + ")");
            }
            if (a < 0 || b < 0) {
                throw ParseError(line_no, "negative vertex id");
            }
            edge_pairs.emplace_back(a, b);
        } else {
            throw ParseError(line_no, "unknown directive '" + head + "'");
        }
    }
    flush();
    return SnapshotSequence(std::move(snapshots));
}

inline void write_score_csv(std::ostream& os, const ScoreSeries& series) {
    os << "t,v_score,e_score\n";
    for (const ScorePoint& point : series.points) {
        const auto v = point.v_score();
        const auto e = point.e_score();
        os << point.t << ","
           << (v ? detail::format_fixed6(v->to_double()) : "nan") << ","
           << (e ? detail::format_fixed6(e->to_double()) : "nan") << "\n";
    }
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& result,
                            bool extended = false) {
    os << "p,q,nervousnessAverage";
    if (extended) {
        os << ",stddev,meanDensity,predicted";
    }
    os << "\n";
    for (const SweepCell& cell : result.cells) {
        os << detail::format_prob(cell.p) << "," << detail::format_prob(cell.q)
           << "," << detail::format_fixed6(cell.mean_e_score);
        if (extended) {
            os << "," << detail::format_fixed6(cell.stddev_e_score) << ","
               << detail::format_fixed6(cell.mean_density) << ","
               << detail::format_fixed6(cell.predicted_score);
        }
        os << "\n";
    }
}

} // namespace dynascore
