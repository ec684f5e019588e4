#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sgm/canonical.hpp"
#include "sgm/graph.hpp"

namespace sgm {

// ESU enumeration: every connected induced p-vertex subgraph exactly once.
// Candidates are extended only through exclusive neighbors with ids above the
// root, which is what guarantees uniqueness without storing emitted sets.
// The callback receives the vertex set sorted ascending.
template <class Fn>
void for_each_connected_subgraph(const LabeledGraph& g, std::uint32_t p, Fn&& fn) {
    if (p == 0) throw Error("for_each_connected_subgraph: p must be at least 1");
    const std::size_t n = g.vertex_count();
    if (n < p) return;

    std::vector<VertexId> sub;
    sub.reserve(p);
    std::vector<VertexId> sorted(p);
    std::vector<char> visited(n, 0);

    auto emit = [&]() {
        sorted.assign(sub.begin(), sub.end());
        std::sort(sorted.begin(), sorted.end());
        fn(std::span<const VertexId>(sorted));
    };

    auto rec = [&](auto&& self, std::vector<VertexId>& ext, VertexId root) -> void {
        if (sub.size() == p) {
            emit();
            return;
        }
        while (!ext.empty()) {
            VertexId w = ext.back();
            ext.pop_back();
            sub.push_back(w);

            std::vector<VertexId> added;
            for (const AdjEntry& a : g.adjacency[w]) {
                if (a.to > root && !visited[a.to]) {
                    visited[a.to] = 1;
                    added.push_back(a.to);
                }
            }
            std::vector<VertexId> ext2 = ext;
            ext2.insert(ext2.end(), added.begin(), added.end());
            self(self, ext2, root);

            for (VertexId u : added) visited[u] = 0;
            sub.pop_back();
        }
    };

    for (VertexId v = 0; v < n; ++v) {
        std::fill(visited.begin(), visited.end(), 0);
        visited[v] = 1;
        std::vector<VertexId> ext;
        for (const AdjEntry& a : g.adjacency[v]) {
            if (a.to > v) {
                visited[a.to] = 1;
                ext.push_back(a.to);
            }
        }
        sub.assign(1, v);
        if (p == 1)
            emit();
        else
            rec(rec, ext, v);
        sub.clear();
    }
}

inline std::vector<std::vector<VertexId>> enumerate_connected_subgraphs(const LabeledGraph& g,
                                                                        std::uint32_t p) {
    std::vector<std::vector<VertexId>> out;
    for_each_connected_subgraph(g, p, [&](std::span<const VertexId> verts) {
        out.emplace_back(verts.begin(), verts.end());
    });
    return out;
}

// Upper bound on the enumeration volume: sum of binomial(|V_i|, p). Always at
// least the true connected count, so a passing estimate can never hide an
// oversized run.
inline double estimate_enumeration_count(const GraphDatabase& db, std::uint32_t p) {
    double total = 0.0;
    for (const LabeledGraph& g : db.graphs) {
        const double n = static_cast<double>(g.vertex_count());
        if (n < p) continue;
        double c = 1.0;
        for (std::uint32_t k = 0; k < p; ++k) c *= (n - k) / static_cast<double>(k + 1);
        total += c;
        if (total > 1e30) return total;
    }
    return total;
}

struct GroundTruthEntry {
    std::size_t support = 0;                                   // |support_set|
    std::vector<GraphId> support_set;                          // sorted
    std::vector<std::pair<GraphId, std::uint64_t>> occurrences; // per-graph distinct vertex sets
};

struct GroundTruth {
    std::uint32_t p = 0;
    std::size_t n = 0; // database size
    std::map<std::string, GroundTruthEntry> by_code;
    std::vector<std::uint64_t> per_graph_counts; // x_j: distinct connected induced p-subgraphs
};

// Exhaustive ground truth: enumerate, canonicalize, fold. Graphs are
// processed independently (optionally on several threads) and merged in id
// order, so the result does not depend on scheduling.
inline GroundTruth build_ground_truth(const GraphDatabase& db, std::uint32_t p,
                                      double cap = 1e8, unsigned threads = 0) {
    const double estimate = estimate_enumeration_count(db, p);
    if (estimate > cap) {
        std::ostringstream msg;
        msg << "enumeration refused: estimated " << estimate << " vertex sets exceeds cap " << cap;
        throw Error(msg.str());
    }

    GroundTruth truth;
    truth.p = p;
    truth.n = db.size();
    truth.per_graph_counts.assign(db.size(), 0);

    std::vector<std::map<std::string, std::uint64_t>> per_graph(db.size());

    auto process = [&](std::size_t gid) {
        const LabeledGraph& g = db.graphs[gid];
        auto& local = per_graph[gid];
        std::uint64_t count = 0;
        for_each_connected_subgraph(g, p, [&](std::span<const VertexId> verts) {
            ++count;
            const CanonicalCode code = min_dfs_code(induced_subgraph(g, verts));
            ++local[code_to_string(code, db.vertex_labels, db.edge_labels)];
        });
        truth.per_graph_counts[gid] = count;
    };

    unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
    nthreads = std::max(1u, std::min<unsigned>(nthreads, static_cast<unsigned>(db.size())));
    if (nthreads <= 1) {
        for (std::size_t gid = 0; gid < db.size(); ++gid) process(gid);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t]() {
                for (std::size_t gid = t; gid < db.size(); gid += nthreads) process(gid);
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t gid = 0; gid < db.size(); ++gid) {
        for (const auto& [code, cnt] : per_graph[gid]) {
            auto& entry = truth.by_code[code];
            entry.support_set.push_back(static_cast<GraphId>(gid));
            entry.occurrences.emplace_back(static_cast<GraphId>(gid), cnt);
        }
    }
    for (auto& [code, entry] : truth.by_code) entry.support = entry.support_set.size();
    return truth;
}

// Truth ranking: support descending, code ascending as the documented
// tie-break at the boundary.
inline std::vector<std::string> truth_top_codes(const GroundTruth& truth, std::size_t k) {
    std::vector<std::pair<std::size_t, const std::string*>> ranked;
    ranked.reserve(truth.by_code.size());
    for (const auto& [code, entry] : truth.by_code) ranked.emplace_back(entry.support, &code);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return *a.second < *b.second;
    });
    std::vector<std::string> out;
    out.reserve(std::min(k, ranked.size()));
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(*ranked[i].second);
    return out;
}

// pr@k: percentage of the true top-k recovered among the mined top-k.
inline double precision_at_k(const std::vector<std::string>& mined_ranked_codes,
                             const GroundTruth& truth, std::size_t k) {
    if (k == 0) throw Error("precision_at_k: k must be positive");
    if (truth.by_code.size() < k)
        throw Error("precision_at_k: truth has fewer than k patterns");
    const auto top_truth = truth_top_codes(truth, k);
    std::vector<std::string> top_mined(mined_ranked_codes.begin(),
                                       mined_ranked_codes.begin() +
                                           std::min(k, mined_ranked_codes.size()));
    std::vector<std::string> a = top_truth, b = top_mined;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::string> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return 100.0 * static_cast<double>(both.size()) / static_cast<double>(k);
}

// Tie-corrected Kendall rank correlation:
// (C - D) / sqrt((n0 - n1)(n0 - n2)) over all object pairs.
inline double kendall_tau_b(const std::vector<std::pair<double, double>>& pairs) {
    const std::size_t n = pairs.size();
    if (n < 2) throw Error("kendall_tau_b: need at least two pairs");
    std::uint64_t concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = pairs[i].first - pairs[j].first;
            const double dy = pairs[i].second - pairs[j].second;
            if (dx == 0.0) ++ties_x;
            if (dy == 0.0) ++ties_y;
            if (dx != 0.0 && dy != 0.0) {
                if ((dx > 0) == (dy > 0))
                    ++concordant;
                else
                    ++discordant;
            }
        }
    }
    const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
    const double denom = std::sqrt((n0 - static_cast<double>(ties_x)) *
                                   (n0 - static_cast<double>(ties_y)));
    if (denom == 0.0) throw Error("kendall_tau_b: undefined, all values tied on one coordinate");
    return (static_cast<double>(concordant) - static_cast<double>(discordant)) / denom;
}

// Linearized expected support under uniform in-graph sampling:
// (t/n) * sum over containing graphs of 1/x_z.
inline double expected_support_uniform(const std::string& code, double t,
                                       const GroundTruth& truth) {
    auto it = truth.by_code.find(code);
    if (it == truth.by_code.end()) return 0.0;
    double sum = 0.0;
    for (GraphId z : it->second.support_set)
        sum += 1.0 / static_cast<double>(truth.per_graph_counts[z]);
    return (t / static_cast<double>(truth.n)) * sum;
}

// The linearization assumes t/(n * min x_z) <= 1; outside that regime the
// formula overestimates.
inline bool expected_support_in_regime(const std::string& code, double t,
                                       const GroundTruth& truth) {
    auto it = truth.by_code.find(code);
    if (it == truth.by_code.end()) return true;
    std::uint64_t minx = ~std::uint64_t{0};
    for (GraphId z : it->second.support_set)
        minx = std::min(minx, truth.per_graph_counts[z]);
    if (minx == ~std::uint64_t{0}) return true;
    return t <= static_cast<double>(truth.n) * static_cast<double>(minx);
}

inline void write_truth_tsv(const GroundTruth& truth, std::ostream& out) {
    for (const std::string& code : truth_top_codes(truth, truth.by_code.size())) {
        const auto& entry = truth.by_code.at(code);
        out << code << '\t' << entry.support << '\t';
        for (std::size_t i = 0; i < entry.support_set.size(); ++i) {
            if (i) out << ',';
            out << entry.support_set[i];
        }
        out << '\n';
    }
}

inline void write_counts_tsv(const GroundTruth& truth, std::ostream& out) {
    for (std::size_t gid = 0; gid < truth.per_graph_counts.size(); ++gid)
        out << gid << '\t' << truth.per_graph_counts[gid] << '\n';
}

// Reads back a truth file; per-graph counts and n are not part of it.
inline GroundTruth read_truth_tsv(std::istream& in) {
    GroundTruth truth;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw Error("truth file: malformed line " + std::to_string(lineno));
        GroundTruthEntry entry;
        const std::string code = line.substr(0, t1);
        entry.support = static_cast<std::size_t>(std::stoull(line.substr(t1 + 1, t2 - t1 - 1)));
        std::stringstream ids(line.substr(t2 + 1));
        std::string tok;
        while (std::getline(ids, tok, ','))
            if (!tok.empty()) entry.support_set.push_back(static_cast<GraphId>(std::stoul(tok)));
        if (entry.support != entry.support_set.size())
            throw Error("truth file: support mismatch at line " + std::to_string(lineno));
        truth.by_code.emplace(code, std::move(entry));
    }
    return truth;
}

} // namespace sgm
