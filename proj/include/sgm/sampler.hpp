#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "sgm/graph.hpp"
#include "sgm/rng.hpp"
#include "sgm/support_index.hpp"

namespace sgm {

enum class ScoreKind {
    MeanEdgeSupport,      // s1: average support of the constituting edges
    SupportIntersection,  // s2: |intersection of the edge support-sets|
    Uniform,              // constant 1
};

inline const char* score_kind_name(ScoreKind k) {
    switch (k) {
        case ScoreKind::MeanEdgeSupport: return "s1";
        case ScoreKind::SupportIntersection: return "s2";
        case ScoreKind::Uniform: return "uniform";
    }
    return "?";
}

// Markov-chain state inside one database graph: a connected induced
// p-subgraph plus its cached neighbor count and score.
struct SubgraphState {
    GraphId host = 0;
    std::vector<VertexId> vertices; // sorted ascending
    std::uint32_t neighbor_count = 0;
    double score = 0.0;
};

// Swap move: drop `out`, pick up `in`. Valid iff the new vertex set still
// induces a connected subgraph.
struct NeighborMove {
    VertexId out, in;

    bool operator==(const NeighborMove&) const = default;
};

namespace detail {

inline bool sorted_contains(std::span<const VertexId> verts, VertexId v) {
    return std::binary_search(verts.begin(), verts.end(), v);
}

inline int sorted_index(std::span<const VertexId> verts, VertexId v) {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v) return -1;
    return static_cast<int>(it - verts.begin());
}

} // namespace detail

// All states that share p-1 vertices with the current one. The move list is
// deterministic given the vertex set, and the move <-> neighbor-state mapping
// is one to one, so proposing uniformly from it is uniform over neighbors.
//
// Per removed vertex the remainder is split into connected components once;
// a candidate has to attach to every component for the swap to stay
// connected. That keeps the check at O(p^2 + sum of candidate degrees) per
// removed vertex instead of a BFS per (out, in) pair.
inline std::vector<NeighborMove> neighbor_moves(const LabeledGraph& g,
                                                std::span<const VertexId> verts) {
    const std::size_t p = verts.size();
    std::vector<NeighborMove> moves;

    std::vector<VertexId> cands;
    for (VertexId x : verts)
        for (const AdjEntry& a : g.adjacency[x])
            if (!detail::sorted_contains(verts, a.to)) cands.push_back(a.to);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    if (cands.empty()) return moves;

    std::vector<VertexId> rem;
    rem.reserve(p - 1);
    std::vector<int> comp(p, -1);
    std::vector<std::size_t> stack;

    for (std::size_t oi = 0; oi < p; ++oi) {
        rem.clear();
        for (std::size_t k = 0; k < p; ++k)
            if (k != oi) rem.push_back(verts[k]);

        // component ids of the remainder under host adjacency restricted to it
        comp.assign(rem.size(), -1);
        int ncomp = 0;
        for (std::size_t s = 0; s < rem.size(); ++s) {
            if (comp[s] >= 0) continue;
            comp[s] = ncomp;
            stack.assign(1, s);
            while (!stack.empty()) {
                std::size_t cur = stack.back();
                stack.pop_back();
                for (const AdjEntry& a : g.adjacency[rem[cur]]) {
                    int pos = detail::sorted_index(rem, a.to);
                    if (pos >= 0 && comp[static_cast<std::size_t>(pos)] < 0) {
                        comp[static_cast<std::size_t>(pos)] = ncomp;
                        stack.push_back(static_cast<std::size_t>(pos));
                    }
                }
            }
            ++ncomp;
        }

        const std::uint32_t all = (ncomp >= 32) ? ~0u : ((1u << ncomp) - 1u);
        for (VertexId in : cands) {
            std::uint32_t mask = 0;
            for (const AdjEntry& a : g.adjacency[in]) {
                int pos = detail::sorted_index(rem, a.to);
                if (pos >= 0) mask |= 1u << (comp[static_cast<std::size_t>(pos)] & 31);
            }
            if (mask == all) moves.push_back({verts[oi], in});
        }
    }
    return moves;
}

inline std::vector<VertexId> apply_move(std::span<const VertexId> verts, const NeighborMove& mv) {
    std::vector<VertexId> out;
    out.reserve(verts.size());
    for (VertexId v : verts)
        if (v != mv.out) out.push_back(v);
    out.insert(std::upper_bound(out.begin(), out.end(), mv.in), mv.in);
    return out;
}

namespace detail {

template <class Fn>
inline void for_each_induced_edge(const LabeledGraph& g, std::span<const VertexId> verts, Fn&& fn) {
    for (VertexId v : verts)
        for (const AdjEntry& a : g.adjacency[v])
            if (a.to > v && sorted_contains(verts, a.to)) fn(v, a.to, a.label);
}

} // namespace detail

// s1: arithmetic mean of the supports of the induced edges.
inline double mean_edge_support(const LabeledGraph& g, std::span<const VertexId> verts,
                                const EdgeSupportIndex& index) {
    double sum = 0.0;
    std::size_t count = 0;
    detail::for_each_induced_edge(g, verts, [&](VertexId u, VertexId v, LabelId le) {
        sum += static_cast<double>(index.support(edge_triple(g, u, v, le)));
        ++count;
    });
    if (count == 0) throw Error("mean_edge_support: vertex set induces no edges");
    return sum / static_cast<double>(count);
}

// s2: cardinality of the intersection of the edge support-sets.
inline std::size_t support_intersection(const LabeledGraph& g, std::span<const VertexId> verts,
                                        const EdgeSupportIndex& index) {
    std::array<const Bitset*, 136> sets{};
    std::size_t k = 0;
    bool missing = false;
    detail::for_each_induced_edge(g, verts, [&](VertexId u, VertexId v, LabelId le) {
        const Bitset* s = index.support_set(edge_triple(g, u, v, le));
        if (!s)
            missing = true;
        else if (k < sets.size())
            sets[k++] = s;
    });
    if (missing || k == 0) return 0;
    const std::size_t nwords = sets[0]->words().size();
    std::size_t total = 0;
    for (std::size_t w = 0; w < nwords; ++w) {
        std::uint64_t acc = sets[0]->words()[w];
        for (std::size_t s = 1; s < k && acc; ++s) acc &= sets[s]->words()[w];
        total += static_cast<std::size_t>(std::popcount(acc));
    }
    return total;
}

inline double pattern_score(ScoreKind kind, const LabeledGraph& g,
                            std::span<const VertexId> verts, const EdgeSupportIndex& index) {
    switch (kind) {
        case ScoreKind::MeanEdgeSupport: return mean_edge_support(g, verts, index);
        case ScoreKind::SupportIntersection:
            return static_cast<double>(support_intersection(g, verts, index));
        case ScoreKind::Uniform: return 1.0;
    }
    throw Error("pattern_score: unknown score kind");
}

// min(1, (d_x * s_y) / (d_y * s_x)) -- the Metropolis-Hastings ratio for a
// uniform proposal over neighbors and a target proportional to the score.
inline double acceptance_probability(std::uint64_t d_x, double s_x, std::uint64_t d_y,
                                     double s_y) {
    if (d_x == 0 || d_y == 0) throw Error("acceptance_probability: zero neighbor count");
    if (s_x <= 0.0 || s_y <= 0.0) throw Error("acceptance_probability: nonpositive score");
    const double v = (static_cast<double>(d_x) * s_y) / (static_cast<double>(d_y) * s_x);
    return v < 1.0 ? v : 1.0;
}

namespace detail {

inline SubgraphState finalize_state(const LabeledGraph& g, GraphId host,
                                    std::vector<VertexId> verts, ScoreKind kind,
                                    const EdgeSupportIndex& index) {
    SubgraphState st;
    st.host = host;
    st.score = pattern_score(kind, g, verts, index);
    st.neighbor_count = static_cast<std::uint32_t>(neighbor_moves(g, verts).size());
    st.vertices = std::move(verts);
    return st;
}

} // namespace detail

// Seed state: grow from a uniformly chosen edge by repeatedly absorbing a
// uniformly chosen frontier vertex until p vertices are reached.
inline SubgraphState random_initial_state(const LabeledGraph& g, GraphId host, std::uint32_t p,
                                          ScoreKind kind, const EdgeSupportIndex& index,
                                          Rng& rng) {
    if (p < 2) throw Error("random_initial_state: p must be at least 2");
    if (g.vertex_count() < p) throw Error("random_initial_state: graph has fewer than p vertices");

    const Edge& e0 = g.edges[rng.index(g.edge_count())];
    std::vector<VertexId> verts{std::min(e0.u, e0.v), std::max(e0.u, e0.v)};
    std::vector<VertexId> frontier;
    while (verts.size() < p) {
        frontier.clear();
        for (VertexId v : verts)
            for (const AdjEntry& a : g.adjacency[v])
                if (!detail::sorted_contains(verts, a.to)) frontier.push_back(a.to);
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        if (frontier.empty()) throw Error("random_initial_state: host graph is not connected");
        VertexId pick = frontier[rng.index(frontier.size())];
        verts.insert(std::upper_bound(verts.begin(), verts.end(), pick), pick);
    }
    return detail::finalize_state(g, host, std::move(verts), kind, index);
}

enum class MhMode {
    LoopUntilAccept, // resample proposals until one is accepted ("paper")
    SingleProposal,  // one proposal per step; rejection keeps the state ("strict")
};

struct MhStats {
    std::uint64_t proposals = 0;
    std::uint64_t reinits = 0;
    std::uint64_t retry_cap_hits = 0;
};

// One Metropolis-Hastings step from `state`. A state with no neighbors
// (p == |V|) is reseeded. In LoopUntilAccept mode proposals repeat until one
// is accepted or the retry cap trips, in SingleProposal mode a rejection
// returns the current state unchanged.
inline SubgraphState mh_step(const LabeledGraph& g, const SubgraphState& state, ScoreKind kind,
                             const EdgeSupportIndex& index, MhMode mode, Rng& rng,
                             MhStats* stats = nullptr, std::uint32_t retry_cap = 1000) {
    const auto moves = neighbor_moves(g, state.vertices);
    if (moves.empty()) {
        if (stats) ++stats->reinits;
        return random_initial_state(g, state.host, static_cast<std::uint32_t>(state.vertices.size()),
                                    kind, index, rng);
    }
    const std::uint64_t d_x = moves.size();
    const double s_x = state.score;

    const std::uint32_t max_tries = (mode == MhMode::SingleProposal) ? 1 : retry_cap;
    for (std::uint32_t attempt = 0; attempt < max_tries; ++attempt) {
        if (stats) ++stats->proposals;
        const NeighborMove& mv = moves[rng.index(moves.size())];
        std::vector<VertexId> yverts = apply_move(state.vertices, mv);
        const auto ymoves = neighbor_moves(g, yverts);
        const double s_y = pattern_score(kind, g, yverts, index);
        const double alpha = acceptance_probability(d_x, s_x, ymoves.size(), s_y);
        if (rng.uniform01() <= alpha) {
            SubgraphState st;
            st.host = state.host;
            st.vertices = std::move(yverts);
            st.neighbor_count = static_cast<std::uint32_t>(ymoves.size());
            st.score = s_y;
            return st;
        }
    }
    if (mode == MhMode::LoopUntilAccept && stats) ++stats->retry_cap_hits;
    return state;
}

} // namespace sgm
