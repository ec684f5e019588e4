#pragma once

// Shared test fixtures. Expected values in the tests that use these are
// derived by hand or by the brute-force oracles next to them.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sgm/generate.hpp"
#include "sgm/graph.hpp"
#include "sgm/rng.hpp"

namespace fixtures {

// G0: path A-B-C, G1: triangle A,B,C; all edge labels 1.
// Edge supports: (A,1,B) -> {0,1}, (B,1,C) -> {0,1}, (A,1,C) -> {1}.
inline std::string two_graph_text() {
    return "t # 0\n"
           "v 0 A\n"
           "v 1 B\n"
           "v 2 C\n"
           "e 0 1 1\n"
           "e 1 2 1\n"
           "t # 1\n"
           "v 0 A\n"
           "v 1 B\n"
           "v 2 C\n"
           "e 0 1 1\n"
           "e 0 2 1\n"
           "e 1 2 1\n";
}

inline sgm::GraphDatabase two_graph_db() { return sgm::parse_database(two_graph_text()); }

// Host used for the walkthrough of the swap neighborhood: state (0,1,2,3) can
// reach (0,1,2,4) because vertex 4 attaches to 0 and 2.
inline sgm::LabeledGraph walkthrough_graph() {
    using sgm::Edge;
    return sgm::LabeledGraph::build(
        0, {0, 0, 0, 0, 0},
        std::vector<Edge>{{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {0, 4, 0}, {2, 4, 0}});
}

// Four-graph database whose first graph is the 8-vertex ring-with-chords host
// used by the chain-level statistical tests; the other graphs share edge
// triples so s2 varies across states.
inline std::string chain_fixture_text() {
    return "t # 0\n"
           "v 0 A\n"
           "v 1 B\n"
           "v 2 A\n"
           "v 3 C\n"
           "v 4 B\n"
           "v 5 A\n"
           "v 6 C\n"
           "v 7 B\n"
           "e 0 1 1\n"
           "e 1 2 1\n"
           "e 2 3 2\n"
           "e 3 4 1\n"
           "e 4 5 2\n"
           "e 5 6 1\n"
           "e 6 7 2\n"
           "e 0 7 1\n"
           "e 0 4 2\n"
           "e 1 5 1\n"
           "e 2 6 1\n"
           "t # 1\n"
           "v 0 A\n"
           "v 1 B\n"
           "v 2 A\n"
           "v 3 C\n"
           "e 0 1 1\n"
           "e 1 2 1\n"
           "e 2 3 2\n"
           "t # 2\n"
           "v 0 A\n"
           "v 1 B\n"
           "v 2 C\n"
           "v 3 B\n"
           "e 0 1 1\n"
           "e 1 2 2\n"
           "e 2 3 1\n"
           "e 0 3 1\n"
           "t # 3\n"
           "v 0 B\n"
           "v 1 A\n"
           "v 2 C\n"
           "v 3 A\n"
           "v 4 B\n"
           "e 0 1 1\n"
           "e 1 2 2\n"
           "e 2 3 1\n"
           "e 3 4 2\n"
           "e 0 4 2\n";
}

inline sgm::GraphDatabase chain_fixture_db() { return sgm::parse_database(chain_fixture_text()); }

// The generator defaults are the desk-scale database every statistical
// criterion runs against: 20 graphs, ~30 vertices, 4 vertex / 2 edge labels,
// seed 1.
inline sgm::GraphDatabase desk_db() { return sgm::generate_database(sgm::GenParams{}); }

// Small connected hosts for exhaustive neighborhood checks.
inline std::vector<sgm::LabeledGraph> small_hosts() {
    using sgm::Edge;
    using sgm::LabeledGraph;
    std::vector<LabeledGraph> hosts;
    // path of 3
    hosts.push_back(LabeledGraph::build(0, {0, 1, 2}, {Edge{0, 1, 0}, Edge{1, 2, 0}}));
    // triangle
    hosts.push_back(LabeledGraph::build(0, {0, 1, 2},
                                        {Edge{0, 1, 0}, Edge{1, 2, 0}, Edge{0, 2, 0}}));
    // 6-cycle, uniform labels
    hosts.push_back(LabeledGraph::build(
        0, {0, 0, 0, 0, 0, 0},
        {Edge{0, 1, 0}, Edge{1, 2, 0}, Edge{2, 3, 0}, Edge{3, 4, 0}, Edge{4, 5, 0},
         Edge{0, 5, 0}}));
    // star with 3 leaves
    hosts.push_back(
        LabeledGraph::build(0, {0, 1, 1, 1}, {Edge{0, 1, 0}, Edge{0, 2, 0}, Edge{0, 3, 0}}));
    // K4 with two labels
    hosts.push_back(LabeledGraph::build(0, {0, 0, 1, 1},
                                        {Edge{0, 1, 0}, Edge{0, 2, 0}, Edge{0, 3, 0},
                                         Edge{1, 2, 0}, Edge{1, 3, 0}, Edge{2, 3, 0}}));
    hosts.push_back(walkthrough_graph());
    hosts.push_back(chain_fixture_db().graphs[0]);
    return hosts;
}

// Random connected labeled graph with raw label ids; used by the canonical
// property tests, which compare codes structurally.
inline sgm::LabeledGraph random_connected_graph(sgm::Rng& rng, std::size_t max_vertices,
                                                int n_vlabels, int n_elabels) {
    const std::size_t n = 1 + rng.index(max_vertices);
    std::vector<sgm::LabelId> vlabels(n);
    for (auto& l : vlabels) l = static_cast<sgm::LabelId>(rng.index(n_vlabels));
    std::vector<sgm::Edge> edges;
    std::set<std::pair<sgm::VertexId, sgm::VertexId>> present;
    for (sgm::VertexId v = 1; v < n; ++v) {
        auto u = static_cast<sgm::VertexId>(rng.below(v));
        edges.push_back({u, v, static_cast<sgm::LabelId>(rng.index(n_elabels))});
        present.insert({u, v});
    }
    if (n >= 2) {
        const std::size_t extra = rng.index(n);
        for (std::size_t t = 0; t < extra; ++t) {
            auto a = static_cast<sgm::VertexId>(rng.index(n));
            auto b = static_cast<sgm::VertexId>(rng.index(n));
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            if (!present.insert({a, b}).second) continue;
            edges.push_back({a, b, static_cast<sgm::LabelId>(rng.index(n_elabels))});
        }
    }
    return sgm::LabeledGraph::build(0, std::move(vlabels), std::move(edges));
}

// Permutes vertex ids of a graph; the canonical code must not change.
inline sgm::LabeledGraph permute_graph(const sgm::LabeledGraph& g,
                                       const std::vector<sgm::VertexId>& perm) {
    std::vector<sgm::LabelId> vlabels(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) vlabels[perm[v]] = g.vertex_labels[v];
    std::vector<sgm::Edge> edges;
    for (const sgm::Edge& e : g.edges) edges.push_back({perm[e.u], perm[e.v], e.label});
    return sgm::LabeledGraph::build(g.id, std::move(vlabels), std::move(edges));
}

} // namespace fixtures
