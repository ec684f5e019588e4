#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "sgm/canonical.hpp"
#include "sgm/rng.hpp"

#include "fixtures.hpp"

using namespace sgm;

namespace {

// Brute-force oracle: enumerate every DFS code of the graph (all roots, all
// child orders, literal DFS semantics) and keep them all. Independent of the
// production search, which only ever follows minimal extensions.
void all_codes_rec(const LabeledGraph& g, std::vector<int>& dfs_of, std::vector<VertexId>& host_of,
                   std::vector<std::vector<char>>& used, std::vector<int>& path,
                   std::vector<DfsEdge>& code, std::vector<std::vector<DfsEdge>>& out) {
    if (code.size() == g.edge_count()) {
        out.push_back(code);
        return;
    }
    const int r = path.back();
    const VertexId rv = host_of[r];

    // backward edges from the rightmost vertex are forced, lowest index first
    int best_anc = -1;
    for (std::size_t pi = 0; pi + 1 < path.size(); ++pi) {
        const VertexId av = host_of[path[pi]];
        if (g.has_edge(rv, av) && !used[rv][av]) {
            best_anc = path[pi];
            break;
        }
    }
    if (best_anc >= 0) {
        const VertexId av = host_of[best_anc];
        used[rv][av] = used[av][rv] = 1;
        code.push_back({r, best_anc, g.vertex_labels[rv], *g.edge_label(rv, av),
                        g.vertex_labels[av]});
        all_codes_rec(g, dfs_of, host_of, used, path, code, out);
        code.pop_back();
        used[rv][av] = used[av][rv] = 0;
        return;
    }

    // otherwise the DFS backtracks to the deepest vertex that still has an
    // unvisited neighbor and must descend from there
    for (int pi = static_cast<int>(path.size()) - 1; pi >= 0; --pi) {
        const int w = path[pi];
        const VertexId wv = host_of[w];
        bool any = false;
        for (const AdjEntry& a : g.adjacency[wv])
            if (dfs_of[a.to] < 0) any = true;
        if (!any) continue;

        for (const AdjEntry& a : g.adjacency[wv]) {
            if (dfs_of[a.to] >= 0) continue;
            const int idx = static_cast<int>(host_of.size());
            dfs_of[a.to] = idx;
            host_of.push_back(a.to);
            used[wv][a.to] = used[a.to][wv] = 1;
            std::vector<int> new_path(path.begin(), path.begin() + pi + 1);
            new_path.push_back(idx);
            code.push_back({w, idx, g.vertex_labels[wv], a.label, g.vertex_labels[a.to]});
            all_codes_rec(g, dfs_of, host_of, used, new_path, code, out);
            code.pop_back();
            used[wv][a.to] = used[a.to][wv] = 0;
            host_of.pop_back();
            dfs_of[a.to] = -1;
        }
        return;
    }
}

std::vector<std::vector<DfsEdge>> all_dfs_codes(const LabeledGraph& g) {
    std::vector<std::vector<DfsEdge>> out;
    const std::size_t n = g.vertex_count();
    for (VertexId root = 0; root < n; ++root) {
        std::vector<int> dfs_of(n, -1);
        std::vector<VertexId> host_of{root};
        dfs_of[root] = 0;
        std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
        std::vector<int> path{0};
        std::vector<DfsEdge> code;
        all_codes_rec(g, dfs_of, host_of, used, path, code, out);
    }
    return out;
}

std::vector<DfsEdge> brute_min_code(const LabeledGraph& g) {
    auto codes = all_dfs_codes(g);
    REQUIRE_FALSE(codes.empty());
    return *std::min_element(codes.begin(), codes.end(),
                             [](const auto& a, const auto& b) { return dfs_code_less(a, b); });
}

LabeledGraph path_abc() {
    return LabeledGraph::build(0, {0, 1, 2}, {Edge{0, 1, 0}, Edge{1, 2, 0}});
}

LabeledGraph triangle_abc() {
    return LabeledGraph::build(0, {0, 1, 2}, {Edge{0, 1, 0}, Edge{1, 2, 0}, Edge{0, 2, 0}});
}

} // namespace

TEST_CASE("single edge roots the smaller vertex label") {
    LabeledGraph g = LabeledGraph::build(0, {1, 0}, {Edge{0, 1, 0}});
    const CanonicalCode code = min_dfs_code(g);
    REQUIRE(code.edges.size() == 1);
    CHECK(code.edges[0] == DfsEdge{0, 1, 0, 0, 1});
}

TEST_CASE("code serialization") {
    GraphDatabase db = parse_database("t # 0\nv 0 A\nv 1 B\ne 0 1 x\n");
    const CanonicalCode code = min_dfs_code(db.graphs[0]);
    CHECK(code_to_string(code, db.vertex_labels, db.edge_labels) == "(0,1,A,x,B)");

    GraphDatabase single = parse_database("t # 0\nv 0 Zn\n");
    const CanonicalCode vcode = min_dfs_code(single.graphs[0]);
    CHECK(vcode.single_vertex_label != kNoLabel);
    CHECK(code_to_string(vcode, single.vertex_labels, single.edge_labels) == "(Zn)");
}

TEST_CASE("token escaping keeps exotic labels unambiguous") {
    GraphDatabase db = parse_database("t # 0\nv 0 a,b\nv 1 c;d\ne 0 1 (x)\n");
    const CanonicalCode code = min_dfs_code(db.graphs[0]);
    const std::string key = code_to_string(code, db.vertex_labels, db.edge_labels);
    CHECK(key == "(0,1,a\\,b,\\(x\\),c\\;d)");
}

TEST_CASE("triangle code is invariant under all six orderings") {
    LabeledGraph g = triangle_abc();
    // uniform labels so every permutation is an automorphism candidate
    LabeledGraph uni =
        LabeledGraph::build(0, {0, 0, 0}, {Edge{0, 1, 0}, Edge{1, 2, 0}, Edge{0, 2, 0}});
    std::vector<VertexId> perm{0, 1, 2};
    const CanonicalCode base = min_dfs_code(uni);
    do {
        CHECK(min_dfs_code(fixtures::permute_graph(uni, perm)) == base);
        CHECK(min_dfs_code(fixtures::permute_graph(g, perm)) ==
              min_dfs_code(g)); // labeled variant too
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("path and triangle separate, both match the enumeration oracle") {
    LabeledGraph p = path_abc();
    LabeledGraph t = triangle_abc();
    CHECK(min_dfs_code(p).edges == brute_min_code(p));
    CHECK(min_dfs_code(t).edges == brute_min_code(t));
    CHECK_FALSE(min_dfs_code(p) == min_dfs_code(t));
}

TEST_CASE("minimum code equals the enumeration oracle on random graphs") {
    Rng rng(99);
    for (int trial = 0; trial < 250; ++trial) {
        LabeledGraph g = fixtures::random_connected_graph(rng, 5, 3, 2);
        if (g.vertex_count() < 2) continue;
        CHECK(min_dfs_code(g).edges == brute_min_code(g));
    }
}

TEST_CASE("codes are invariant under random permutations") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        LabeledGraph g = fixtures::random_connected_graph(rng, 6, 3, 2);
        std::vector<VertexId> perm(g.vertex_count());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        CHECK(min_dfs_code(fixtures::permute_graph(g, perm)) == min_dfs_code(g));
    }
}

TEST_CASE("determinism: repeated calls yield identical codes") {
    Rng rng(13);
    LabeledGraph g = fixtures::random_connected_graph(rng, 6, 2, 2);
    GraphDatabase db; // tables for rendering
    for (int i = 0; i < 3; ++i) (void)db.vertex_labels.intern(std::string(1, char('a' + i)));
    for (int i = 0; i < 2; ++i) (void)db.edge_labels.intern(std::to_string(i));
    const std::string k1 = code_to_string(min_dfs_code(g), db.vertex_labels, db.edge_labels);
    const std::string k2 = code_to_string(min_dfs_code(g), db.vertex_labels, db.edge_labels);
    CHECK(k1 == k2);
}

TEST_CASE("error paths: disconnected, oversized, empty") {
    LabeledGraph disconnected;
    disconnected.vertex_labels = {0, 1};
    disconnected.rebuild_adjacency();
    CHECK_THROWS_AS(min_dfs_code(disconnected), Error);

    Rng rng(5);
    LabeledGraph big = fixtures::random_connected_graph(rng, 6, 2, 2);
    if (big.vertex_count() > 2) CHECK_THROWS_AS(min_dfs_code(big, 2), Error);

    LabeledGraph empty;
    CHECK_THROWS_AS(min_dfs_code(empty), Error);
}

TEST_CASE("isomorphism oracle utility") {
    LabeledGraph p = path_abc();
    LabeledGraph t = triangle_abc();
    CHECK(is_isomorphic_bruteforce(p, p));
    CHECK_FALSE(is_isomorphic_bruteforce(p, t));
    CHECK(codes_equal_iff_isomorphic(p, p));
    CHECK(codes_equal_iff_isomorphic(p, t));

    // permuted copy of a random 5-vertex graph
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        LabeledGraph g = fixtures::random_connected_graph(rng, 5, 2, 2);
        std::vector<VertexId> perm(g.vertex_count());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        LabeledGraph h = fixtures::permute_graph(g, perm);
        CHECK(is_isomorphic_bruteforce(g, h));
        CHECK(codes_equal_iff_isomorphic(g, h));
    }

    LabeledGraph nine = LabeledGraph::build(
        0, std::vector<LabelId>(9, 0),
        {Edge{0, 1, 0}, Edge{1, 2, 0}, Edge{2, 3, 0}, Edge{3, 4, 0}, Edge{4, 5, 0},
         Edge{5, 6, 0}, Edge{6, 7, 0}, Edge{7, 8, 0}});
    CHECK_THROWS_AS(is_isomorphic_bruteforce(nine, nine), Error);
}
