#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "sgm/graph.hpp"

namespace sgm {

// One edge of a DFS code. i and j are DFS discovery indices; a forward edge
// has j == max(seen)+1, a backward edge has j < i.
struct DfsEdge {
    int i, j;
    LabelId li, le, lj;

    bool operator==(const DfsEdge&) const = default;
};

// DFS lexicographic edge order. Structure dominates labels: for distinct
// (i,j) pairs the neighborhood-restriction rules decide, for equal pairs the
// label triple does.
inline bool dfs_edge_less(const DfsEdge& a, const DfsEdge& b) {
    if (a.i == b.i && a.j == b.j) {
        if (a.li != b.li) return a.li < b.li;
        if (a.le != b.le) return a.le < b.le;
        return a.lj < b.lj;
    }
    const bool afwd = a.i < a.j;
    const bool bfwd = b.i < b.j;
    if (afwd && bfwd) return a.j < b.j || (a.j == b.j && a.i > b.i);
    if (!afwd && !bfwd) return a.i < b.i || (a.i == b.i && a.j < b.j);
    if (!afwd && bfwd) return a.i < b.j;
    return a.j <= b.i; // a forward, b backward
}

inline bool dfs_code_less(const std::vector<DfsEdge>& a, const std::vector<DfsEdge>& b) {
    const std::size_t m = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < m; ++k) {
        if (dfs_edge_less(a[k], b[k])) return true;
        if (dfs_edge_less(b[k], a[k])) return false;
    }
    return a.size() < b.size();
}

struct CanonicalCode {
    std::vector<DfsEdge> edges;
    LabelId single_vertex_label = kNoLabel; // set only when the graph has one vertex

    bool operator==(const CanonicalCode&) const = default;
};

namespace detail {

// A partially built DFS walk: the emitted tuple prefix is shared by all live
// walks, only the host-side realization differs.
struct DfsWalk {
    std::vector<VertexId> host_of;  // dfs index -> host vertex
    std::vector<int> dfs_of;        // host vertex -> dfs index or -1
    std::vector<char> edge_used;    // by edge slot in the pair matrix
    std::vector<int> rm_path;       // dfs indices, root..rightmost
};

struct DfsCandidate {
    DfsEdge edge;
    std::size_t walk;
    bool backward;
    int path_pos;  // forward: rightmost-path position extended from
    VertexId host; // forward: the new host vertex; backward: the target
};

// edge slot lookup for hosts with <= 64 vertices (canonical codes only ever
// see pattern-sized graphs)
struct EdgeSlots {
    std::size_t n;
    std::vector<int> slot; // n*n, -1 when absent

    explicit EdgeSlots(const LabeledGraph& g) : n(g.vertex_count()), slot(n * n, -1) {
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            const Edge& e = g.edges[k];
            slot[e.u * n + e.v] = static_cast<int>(k);
            slot[e.v * n + e.u] = static_cast<int>(k);
        }
    }

    int at(VertexId a, VertexId b) const { return slot[a * n + b]; }
};

} // namespace detail

// Minimum DFS code of a connected labeled graph: the lexicographically
// smallest tuple sequence over all DFS traversals. Computed by advancing all
// prefix-minimal walks in lockstep; only extensions achieving the smallest
// next tuple survive, so the emitted sequence is the minimum. Worst case is
// exponential for highly symmetric inputs, which pattern-sized graphs stay
// far away from.
inline CanonicalCode min_dfs_code(const LabeledGraph& g, std::size_t max_vertices = 16) {
    const std::size_t n = g.vertex_count();
    if (n == 0) throw Error("min_dfs_code: empty graph");
    if (n > max_vertices) throw Error("min_dfs_code: graph exceeds vertex limit");
    if (!g.connected()) throw Error("min_dfs_code: disconnected graph");

    CanonicalCode code;
    if (n == 1) {
        code.single_vertex_label = g.vertex_labels[0];
        return code;
    }

    const std::size_t m = g.edge_count();
    detail::EdgeSlots slots(g);

    // first tuple: minimal (la, le, lb) over both orientations of every edge
    DfsEdge first{0, 1, 0, 0, 0};
    bool have_first = false;
    for (const Edge& e : g.edges) {
        for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            DfsEdge t{0, 1, g.vertex_labels[a], e.label, g.vertex_labels[b]};
            if (!have_first || dfs_edge_less(t, first)) {
                first = t;
                have_first = true;
            }
        }
    }
    code.edges.push_back(first);

    std::vector<detail::DfsWalk> walks;
    for (const Edge& e : g.edges) {
        for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            DfsEdge t{0, 1, g.vertex_labels[a], e.label, g.vertex_labels[b]};
            if (t == first) {
                detail::DfsWalk w;
                w.host_of = {a, b};
                w.dfs_of.assign(n, -1);
                w.dfs_of[a] = 0;
                w.dfs_of[b] = 1;
                w.edge_used.assign(m, 0);
                w.edge_used[static_cast<std::size_t>(slots.at(a, b))] = 1;
                w.rm_path = {0, 1};
                walks.push_back(std::move(w));
            }
        }
    }

    std::vector<detail::DfsCandidate> cands;
    for (std::size_t step = 1; step < m; ++step) {
        cands.clear();
        bool have_best = false;
        DfsEdge best{};

        auto offer = [&](const detail::DfsCandidate& c) {
            if (!have_best || dfs_edge_less(c.edge, best)) {
                best = c.edge;
                have_best = true;
                cands.clear();
                cands.push_back(c);
            } else if (!dfs_edge_less(best, c.edge)) {
                cands.push_back(c);
            }
        };

        for (std::size_t wi = 0; wi < walks.size(); ++wi) {
            const detail::DfsWalk& w = walks[wi];
            const int r = w.rm_path.back();
            const VertexId rv = w.host_of[static_cast<std::size_t>(r)];

            // pending backward edge from the rightmost vertex: forced, and the
            // lowest-index target comes first
            bool has_backward = false;
            for (std::size_t pi = 0; pi + 1 < w.rm_path.size(); ++pi) {
                const int anc = w.rm_path[pi];
                const VertexId av = w.host_of[static_cast<std::size_t>(anc)];
                const int s = slots.at(rv, av);
                if (s < 0 || w.edge_used[static_cast<std::size_t>(s)]) continue;
                DfsEdge t{r, anc, g.vertex_labels[rv], g.edges[static_cast<std::size_t>(s)].label,
                          g.vertex_labels[av]};
                offer({t, wi, true, 0, av});
                has_backward = true;
                break;
            }
            if (has_backward) continue;

            // otherwise a forward edge from the deepest rightmost-path vertex
            // that still has an unvisited neighbor
            for (int pi = static_cast<int>(w.rm_path.size()) - 1; pi >= 0; --pi) {
                const int wd = w.rm_path[static_cast<std::size_t>(pi)];
                const VertexId wv = w.host_of[static_cast<std::size_t>(wd)];
                bool any = false;
                for (const AdjEntry& a : g.adjacency[wv]) {
                    if (w.dfs_of[a.to] >= 0) continue;
                    DfsEdge t{wd, static_cast<int>(w.host_of.size()), g.vertex_labels[wv],
                              a.label, g.vertex_labels[a.to]};
                    offer({t, wi, false, pi, a.to});
                    any = true;
                }
                if (any) break;
            }
        }

        if (!have_best) throw Error("min_dfs_code: internal walk exhaustion");
        code.edges.push_back(best);

        std::vector<detail::DfsWalk> next;
        next.reserve(cands.size());
        for (const detail::DfsCandidate& c : cands) {
            detail::DfsWalk w = walks[c.walk];
            if (c.backward) {
                const VertexId rv = w.host_of[static_cast<std::size_t>(w.rm_path.back())];
                w.edge_used[static_cast<std::size_t>(slots.at(rv, c.host))] = 1;
            } else {
                const VertexId from =
                    w.host_of[static_cast<std::size_t>(w.rm_path[static_cast<std::size_t>(c.path_pos)])];
                w.rm_path.resize(static_cast<std::size_t>(c.path_pos) + 1);
                const int idx = static_cast<int>(w.host_of.size());
                w.dfs_of[c.host] = idx;
                w.host_of.push_back(c.host);
                w.rm_path.push_back(idx);
                w.edge_used[static_cast<std::size_t>(slots.at(from, c.host))] = 1;
            }
            next.push_back(std::move(w));
        }
        walks = std::move(next);
        if (walks.size() > (1u << 20))
            throw Error("min_dfs_code: too many symmetric traversals");
    }

    return code;
}

namespace detail {

inline void append_escaped(std::string& out, const std::string& token) {
    for (char c : token) {
        if (c == '\\' || c == ',' || c == ';' || c == '(' || c == ')') out.push_back('\\');
        out.push_back(c);
    }
}

} // namespace detail

// ASCII rendering of the tuple sequence, ';'-joined; stable hash key and
// readable dump. A one-vertex graph renders as its bare vertex token.
inline std::string code_to_string(const CanonicalCode& code, const LabelTable& vlabels,
                                  const LabelTable& elabels) {
    std::string out;
    if (code.single_vertex_label != kNoLabel) {
        out.push_back('(');
        detail::append_escaped(out, vlabels.token(code.single_vertex_label));
        out.push_back(')');
        return out;
    }
    for (std::size_t k = 0; k < code.edges.size(); ++k) {
        const DfsEdge& e = code.edges[k];
        if (k) out.push_back(';');
        out.push_back('(');
        out += std::to_string(e.i);
        out.push_back(',');
        out += std::to_string(e.j);
        out.push_back(',');
        detail::append_escaped(out, vlabels.token(e.li));
        out.push_back(',');
        detail::append_escaped(out, elabels.token(e.le));
        out.push_back(',');
        detail::append_escaped(out, vlabels.token(e.lj));
        out.push_back(')');
    }
    return out;
}

// The induced pattern on a sorted vertex subset of a host graph, re-indexed
// to 0..p-1.
inline LabeledGraph induced_subgraph(const LabeledGraph& host, std::span<const VertexId> verts) {
    std::vector<LabelId> vlabels;
    vlabels.reserve(verts.size());
    for (VertexId v : verts) vlabels.push_back(host.vertex_labels[v]);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        for (const AdjEntry& a : host.adjacency[verts[i]]) {
            if (a.to <= verts[i]) continue;
            auto it = std::lower_bound(verts.begin(), verts.end(), a.to);
            if (it != verts.end() && *it == a.to)
                edges.push_back({static_cast<VertexId>(i),
                                 static_cast<VertexId>(it - verts.begin()), a.label});
        }
    }
    return LabeledGraph::build(0, std::move(vlabels), std::move(edges));
}

// Permutation-based isomorphism check for small graphs; the independent
// oracle the canonical property is validated against.
inline bool is_isomorphic_bruteforce(const LabeledGraph& a, const LabeledGraph& b,
                                     std::size_t max_vertices = 8) {
    if (a.vertex_count() > max_vertices || b.vertex_count() > max_vertices)
        throw Error("is_isomorphic_bruteforce: graph exceeds vertex limit");
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;

    const std::size_t n = a.vertex_count();
    auto sorted_labels = [](const LabeledGraph& g) {
        auto ls = g.vertex_labels;
        std::sort(ls.begin(), ls.end());
        return ls;
    };
    if (sorted_labels(a) != sorted_labels(b)) return false;

    std::vector<int> map_ab(n, -1);
    std::vector<char> used(n, 0);

    auto compatible = [&](VertexId va, VertexId vb) {
        if (a.vertex_labels[va] != b.vertex_labels[vb]) return false;
        if (a.adjacency[va].size() != b.adjacency[vb].size()) return false;
        // edges to already-mapped vertices must match with labels
        for (const AdjEntry& e : a.adjacency[va]) {
            if (map_ab[e.to] < 0) continue;
            auto lb = b.edge_label(vb, static_cast<VertexId>(map_ab[e.to]));
            if (!lb || *lb != e.label) return false;
        }
        for (const AdjEntry& e : b.adjacency[vb]) {
            // reverse direction: mapped preimages must be adjacent in a
            for (std::size_t va2 = 0; va2 < n; ++va2) {
                if (map_ab[va2] == static_cast<int>(e.to)) {
                    auto la = a.edge_label(va, static_cast<VertexId>(va2));
                    if (!la || *la != e.label) return false;
                }
            }
        }
        return true;
    };

    auto rec = [&](auto&& self, std::size_t va) -> bool {
        if (va == n) return true;
        for (std::size_t vb = 0; vb < n; ++vb) {
            if (used[vb]) continue;
            if (!compatible(static_cast<VertexId>(va), static_cast<VertexId>(vb))) continue;
            map_ab[va] = static_cast<int>(vb);
            used[vb] = 1;
            if (self(self, va + 1)) return true;
            used[vb] = 0;
            map_ab[va] = -1;
        }
        return false;
    };
    return rec(rec, 0);
}

// Test utility: does code equality agree with the permutation oracle?
inline bool codes_equal_iff_isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
    const bool same_code = min_dfs_code(a) == min_dfs_code(b);
    const bool iso = is_isomorphic_bruteforce(a, b);
    return same_code == iso;
}

} // namespace sgm
