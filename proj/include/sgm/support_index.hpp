#pragma once

#include <cstddef>
#include <unordered_map>

#include "sgm/bitset.hpp"
#include "sgm/graph.hpp"

namespace sgm {

// Unordered labeled edge identity: (vertex label, edge label, vertex label)
// with the vertex labels in canonical orientation a <= b.
struct EdgeTriple {
    LabelId a, e, b;

    static EdgeTriple make(LabelId la, LabelId le, LabelId lb) {
        if (la > lb) std::swap(la, lb);
        return {la, le, lb};
    }

    bool operator==(const EdgeTriple&) const = default;
};

struct EdgeTripleHash {
    std::size_t operator()(const EdgeTriple& t) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t part : {std::uint64_t(std::uint32_t(t.a)),
                                   std::uint64_t(std::uint32_t(t.e)),
                                   std::uint64_t(std::uint32_t(t.b))}) {
            h ^= part + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

inline EdgeTriple edge_triple(const LabeledGraph& g, VertexId u, VertexId v, LabelId elabel) {
    return EdgeTriple::make(g.vertex_labels[u], elabel, g.vertex_labels[v]);
}

// Maps each edge triple to the set of database graphs containing at least one
// matching edge. Support sets are n-bit bitsets so s2 scoring is a word-wise
// AND over the constituting edges.
class EdgeSupportIndex {
public:
    EdgeSupportIndex() = default;

    std::size_t db_size() const { return n_; }

    // 0 when the triple occurs nowhere
    std::size_t support(const EdgeTriple& t) const {
        auto it = sets_.find(t);
        return it == sets_.end() ? 0 : it->second.cached_count;
    }

    // nullptr when the triple occurs nowhere
    const Bitset* support_set(const EdgeTriple& t) const {
        auto it = sets_.find(t);
        return it == sets_.end() ? nullptr : &it->second.set;
    }

    std::size_t triple_count() const { return sets_.size(); }

    friend EdgeSupportIndex build_edge_support_index(const GraphDatabase& db);

private:
    struct Entry {
        Bitset set;
        std::size_t cached_count = 0;
    };

    std::size_t n_ = 0;
    std::unordered_map<EdgeTriple, Entry, EdgeTripleHash> sets_;
};

inline EdgeSupportIndex build_edge_support_index(const GraphDatabase& db) {
    EdgeSupportIndex index;
    index.n_ = db.size();
    for (const LabeledGraph& g : db.graphs) {
        for (const Edge& e : g.edges) {
            EdgeTriple t = edge_triple(g, e.u, e.v, e.label);
            auto [it, inserted] = index.sets_.try_emplace(t);
            if (inserted) it->second.set = Bitset(db.size());
            it->second.set.set(g.id);
        }
    }
    for (auto& [t, entry] : index.sets_) entry.cached_count = entry.set.count();
    return index;
}

} // namespace sgm
