#pragma once

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sgm/core.hpp"

namespace sgm {

// Interned label tokens. Ids are dense and assigned in first-seen order, so
// re-reading the same input reproduces the same ids.
class LabelTable {
public:
    LabelId intern(std::string_view token) {
        auto it = ids_.find(std::string(token));
        if (it != ids_.end()) return it->second;
        LabelId id = static_cast<LabelId>(tokens_.size());
        tokens_.emplace_back(token);
        ids_.emplace(tokens_.back(), id);
        return id;
    }

    std::optional<LabelId> find(std::string_view token) const {
        auto it = ids_.find(std::string(token));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& token(LabelId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const { return tokens_.size(); }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, LabelId> ids_;
};

struct Edge {
    VertexId u, v; // u < v
    LabelId label;
};

struct AdjEntry {
    VertexId to;
    LabelId label;
};

struct LabeledGraph {
    GraphId id = 0;
    std::vector<LabelId> vertex_labels;            // dense 0..|V|-1
    std::vector<Edge> edges;                       // normalized u < v
    std::vector<std::vector<AdjEntry>> adjacency;  // per vertex, sorted by `to`

    std::size_t vertex_count() const { return vertex_labels.size(); }
    std::size_t edge_count() const { return edges.size(); }

    bool has_edge(VertexId a, VertexId b) const {
        const auto& row = adjacency[a];
        auto it = std::lower_bound(row.begin(), row.end(), b,
                                   [](const AdjEntry& e, VertexId x) { return e.to < x; });
        return it != row.end() && it->to == b;
    }

    std::optional<LabelId> edge_label(VertexId a, VertexId b) const {
        const auto& row = adjacency[a];
        auto it = std::lower_bound(row.begin(), row.end(), b,
                                   [](const AdjEntry& e, VertexId x) { return e.to < x; });
        if (it == row.end() || it->to != b) return std::nullopt;
        return it->label;
    }

    void rebuild_adjacency() {
        adjacency.assign(vertex_count(), {});
        for (const Edge& e : edges) {
            adjacency[e.u].push_back({e.v, e.label});
            adjacency[e.v].push_back({e.u, e.label});
        }
        for (auto& row : adjacency)
            std::sort(row.begin(), row.end(),
                      [](const AdjEntry& a, const AdjEntry& b) { return a.to < b.to; });
    }

    bool connected() const {
        const std::size_t n = vertex_count();
        if (n == 0) return false;
        std::vector<char> seen(n, 0);
        std::vector<VertexId> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (const AdjEntry& a : adjacency[v]) {
                if (!seen[a.to]) {
                    seen[a.to] = 1;
                    ++reached;
                    stack.push_back(a.to);
                }
            }
        }
        return reached == n;
    }

    // Validates simplicity (no self-loops, no multi-edges) and index ranges.
    static LabeledGraph build(GraphId id, std::vector<LabelId> vlabels, std::vector<Edge> edge_list) {
        LabeledGraph g;
        g.id = id;
        g.vertex_labels = std::move(vlabels);
        const auto n = g.vertex_count();
        std::set<std::pair<VertexId, VertexId>> seen;
        for (Edge e : edge_list) {
            if (e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
            if (e.u == e.v) throw Error("self-loop");
            if (e.u > e.v) std::swap(e.u, e.v);
            if (!seen.insert({e.u, e.v}).second) throw Error("duplicate edge");
            g.edges.push_back(e);
        }
        g.rebuild_adjacency();
        return g;
    }
};

struct GraphDatabase {
    std::vector<LabeledGraph> graphs;
    LabelTable vertex_labels;
    LabelTable edge_labels;

    std::size_t size() const { return graphs.size(); }
};

struct ParseReport {
    std::size_t transactions_seen = 0;
    std::size_t accepted = 0;
    std::size_t rejected_nonsimple = 0;
    std::size_t rejected_disconnected = 0;
    std::size_t rejected_empty = 0;
    std::vector<std::string> warnings;

    std::size_t rejected() const {
        return rejected_nonsimple + rejected_disconnected + rejected_empty;
    }
};

namespace detail {

struct PendingGraph {
    bool active = false;
    std::vector<std::string> vertex_tokens;
    std::vector<std::tuple<VertexId, VertexId, std::string>> edge_records;
    std::set<std::pair<VertexId, VertexId>> edge_keys;
    std::string reject_reason; // nonempty => drop at flush
};

inline void flush_pending(PendingGraph& pend, GraphDatabase& db, ParseReport& report) {
    if (!pend.active) return;
    ++report.transactions_seen;
    auto reject = [&](std::size_t& counter, const std::string& why) {
        ++counter;
        report.warnings.push_back("skipping transaction " +
                                  std::to_string(report.transactions_seen - 1) + ": " + why);
    };
    if (!pend.reject_reason.empty()) {
        reject(report.rejected_nonsimple, pend.reject_reason);
    } else if (pend.vertex_tokens.empty()) {
        reject(report.rejected_empty, "no vertices");
    } else {
        std::vector<LabelId> vlabels;
        vlabels.reserve(pend.vertex_tokens.size());
        for (const auto& tok : pend.vertex_tokens) vlabels.push_back(db.vertex_labels.intern(tok));
        std::vector<Edge> edges;
        edges.reserve(pend.edge_records.size());
        for (const auto& [u, v, tok] : pend.edge_records)
            edges.push_back({u, v, db.edge_labels.intern(tok)});
        LabeledGraph g = LabeledGraph::build(static_cast<GraphId>(db.graphs.size()),
                                             std::move(vlabels), std::move(edges));
        if (!g.connected()) {
            reject(report.rejected_disconnected, "disconnected");
        } else {
            db.graphs.push_back(std::move(g));
            ++report.accepted;
        }
    }
    pend = PendingGraph{};
}

} // namespace detail

// Transaction format: `t # <gid>` starts a graph, `v <vid> <label>` declares a
// vertex, `e <u> <v> <label>` declares an undirected edge. Vertices must
// precede the edges that reference them; `#` lines outside transactions are
// comments. Malformed lines abort with a line-numbered error; transactions
// violating graph invariants are skipped and counted in the report.
inline GraphDatabase parse_database(std::istream& in, ParseReport* report_out = nullptr) {
    GraphDatabase db;
    ParseReport report;
    detail::PendingGraph pend;

    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw Error("parse error at line " + std::to_string(lineno) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue; // blank line

        if (tag == "t") {
            std::string hash;
            long long gid = 0;
            if (!(ss >> hash >> gid) || hash != "#" || gid < 0) fail("bad transaction header");
            detail::flush_pending(pend, db, report);
            pend.active = true;
        } else if (tag == "v") {
            if (!pend.active) fail("vertex outside a transaction");
            long long vid = -1;
            std::string label;
            if (!(ss >> vid >> label)) fail("bad vertex record");
            if (vid != static_cast<long long>(pend.vertex_tokens.size()))
                fail("vertex ids must be dense and in order");
            pend.vertex_tokens.push_back(label);
        } else if (tag == "e") {
            if (!pend.active) fail("edge outside a transaction");
            long long u = -1, v = -1;
            std::string label;
            if (!(ss >> u >> v >> label)) fail("bad edge record");
            const long long n = static_cast<long long>(pend.vertex_tokens.size());
            if (u < 0 || v < 0 || u >= n || v >= n) fail("edge references undeclared vertex");
            if (u == v) {
                if (pend.reject_reason.empty()) pend.reject_reason = "self-loop";
                continue;
            }
            auto a = static_cast<VertexId>(std::min(u, v));
            auto b = static_cast<VertexId>(std::max(u, v));
            if (!pend.edge_keys.insert({a, b}).second) {
                if (pend.reject_reason.empty()) pend.reject_reason = "duplicate edge";
                continue;
            }
            pend.edge_records.emplace_back(a, b, label);
        } else if (tag[0] == '#') {
            if (pend.active) fail("comment inside a transaction");
        } else {
            fail("unknown record '" + tag + "'");
        }
    }
    detail::flush_pending(pend, db, report);

    if (report_out) *report_out = report;
    return db;
}

inline GraphDatabase parse_database(const std::string& text, ParseReport* report_out = nullptr) {
    std::istringstream ss(text);
    return parse_database(ss, report_out);
}

inline void write_database(const GraphDatabase& db, std::ostream& out) {
    for (const LabeledGraph& g : db.graphs) {
        out << "t # " << g.id << '\n';
        for (std::size_t v = 0; v < g.vertex_count(); ++v)
            out << "v " << v << ' ' << db.vertex_labels.token(g.vertex_labels[v]) << '\n';
        for (const Edge& e : g.edges)
            out << "e " << e.u << ' ' << e.v << ' ' << db.edge_labels.token(e.label) << '\n';
    }
}

inline std::string write_database(const GraphDatabase& db) {
    std::ostringstream ss;
    write_database(db, ss);
    return ss.str();
}

struct DbStats {
    std::size_t graph_count = 0;
    double avg_vertices = 0.0;
    double avg_edges = 0.0;
    std::size_t vertex_label_count = 0;
    std::size_t edge_label_count = 0;
};

inline DbStats db_stats(const GraphDatabase& db) {
    DbStats s;
    s.graph_count = db.size();
    s.vertex_label_count = db.vertex_labels.size();
    s.edge_label_count = db.edge_labels.size();
    if (db.size() == 0) return s;
    double vsum = 0.0, esum = 0.0;
    for (const auto& g : db.graphs) {
        vsum += static_cast<double>(g.vertex_count());
        esum += static_cast<double>(g.edge_count());
    }
    s.avg_vertices = vsum / static_cast<double>(db.size());
    s.avg_edges = esum / static_cast<double>(db.size());
    return s;
}

// Structural equality over graphs and label tokens (table ids may differ).
inline bool databases_equal(const GraphDatabase& a, const GraphDatabase& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& ga = a.graphs[i];
        const auto& gb = b.graphs[i];
        if (ga.vertex_count() != gb.vertex_count() || ga.edge_count() != gb.edge_count())
            return false;
        for (std::size_t v = 0; v < ga.vertex_count(); ++v)
            if (a.vertex_labels.token(ga.vertex_labels[v]) !=
                b.vertex_labels.token(gb.vertex_labels[v]))
                return false;
        auto ea = ga.edges;
        auto eb = gb.edges;
        auto key = [](const Edge& e) { return std::make_pair(e.u, e.v); };
        std::sort(ea.begin(), ea.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
        std::sort(eb.begin(), eb.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
        for (std::size_t k = 0; k < ea.size(); ++k) {
            if (ea[k].u != eb[k].u || ea[k].v != eb[k].v) return false;
            if (a.edge_labels.token(ea[k].label) != b.edge_labels.token(eb[k].label)) return false;
        }
    }
    return true;
}

} // namespace sgm
