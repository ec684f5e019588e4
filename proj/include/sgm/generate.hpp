#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sgm/graph.hpp"
#include "sgm/rng.hpp"

namespace sgm {

struct GenParams {
    std::size_t n_graphs = 20;
    std::uint32_t n_vertices_mean = 30; // sizes drawn uniformly from [0.8m, 1.2m]
    double edge_factor = 2.0;           // target edges = edge_factor * |V|
    std::uint32_t n_vertex_labels = 4;
    std::uint32_t n_edge_labels = 2;
    std::uint64_t seed = 1;
};

namespace detail {

inline std::string vertex_label_token(std::uint32_t i) {
    std::string tok(1, static_cast<char>('A' + i % 26));
    if (i >= 26) tok += std::to_string(i / 26);
    return tok;
}

} // namespace detail

// Synthetic transaction database: per graph a uniform random spanning tree
// plus random extra edges up to edge_factor * |V|, labels uniform. Every
// output graph is simple and connected by construction.
inline GraphDatabase generate_database(const GenParams& params) {
    if (params.n_vertices_mean < 2) throw Error("generate_database: mean size must be >= 2");
    if (params.n_vertex_labels == 0 || params.n_edge_labels == 0)
        throw Error("generate_database: label alphabets must be nonempty");
    if (params.edge_factor < 0.0) throw Error("generate_database: negative edge factor");

    GraphDatabase db;
    std::vector<LabelId> vlabel_ids, elabel_ids;
    for (std::uint32_t i = 0; i < params.n_vertex_labels; ++i)
        vlabel_ids.push_back(db.vertex_labels.intern(detail::vertex_label_token(i)));
    for (std::uint32_t i = 0; i < params.n_edge_labels; ++i)
        elabel_ids.push_back(db.edge_labels.intern(std::to_string(i)));

    Rng rng(params.seed);
    const std::uint32_t lo = std::max<std::uint32_t>(2, (params.n_vertices_mean * 8 + 9) / 10);
    const std::uint32_t hi = std::max(lo, params.n_vertices_mean * 12 / 10);

    for (std::size_t gi = 0; gi < params.n_graphs; ++gi) {
        const std::uint32_t nv = lo + static_cast<std::uint32_t>(rng.below(hi - lo + 1));
        const std::uint64_t max_edges = std::uint64_t(nv) * (nv - 1) / 2;
        std::uint64_t target =
            static_cast<std::uint64_t>(std::llround(params.edge_factor * nv));
        target = std::max<std::uint64_t>(target, nv - 1);
        if (target > max_edges)
            throw Error("generate_database: requested edge count exceeds the complete graph");

        std::vector<LabelId> vlabels(nv);
        for (auto& l : vlabels) l = vlabel_ids[rng.index(vlabel_ids.size())];

        std::set<std::pair<VertexId, VertexId>> present;
        std::vector<Edge> edges;
        auto add_edge = [&](VertexId a, VertexId b) {
            if (a > b) std::swap(a, b);
            if (!present.insert({a, b}).second) return false;
            edges.push_back({a, b, elabel_ids[rng.index(elabel_ids.size())]});
            return true;
        };

        // random recursive tree keeps the graph connected
        for (VertexId v = 1; v < nv; ++v)
            add_edge(static_cast<VertexId>(rng.below(v)), v);

        std::uint64_t attempts = 0;
        while (edges.size() < target && attempts < 20 * max_edges) {
            ++attempts;
            VertexId a = static_cast<VertexId>(rng.below(nv));
            VertexId b = static_cast<VertexId>(rng.below(nv));
            if (a != b) add_edge(a, b);
        }
        if (edges.size() < target) {
            // dense targets: fill from the shuffled list of absent pairs
            std::vector<std::pair<VertexId, VertexId>> absent;
            for (VertexId a = 0; a < nv; ++a)
                for (VertexId b = a + 1; b < nv; ++b)
                    if (!present.count({a, b})) absent.emplace_back(a, b);
            for (std::size_t i = absent.size(); i > 1; --i)
                std::swap(absent[i - 1], absent[rng.index(i)]);
            for (const auto& [a, b] : absent) {
                if (edges.size() >= target) break;
                add_edge(a, b);
            }
        }

        db.graphs.push_back(LabeledGraph::build(static_cast<GraphId>(gi), std::move(vlabels),
                                                std::move(edges)));
    }
    return db;
}

} // namespace sgm
