#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "agrasst/edgelist.hpp"
#include "agrasst/graph.hpp"

using namespace agrasst;

namespace {

// Independent counting oracle working directly on an adjacency matrix.
struct BruteCounts {
    long edges = 0, two_stars = 0, triangles = 0;
};

BruteCounts brute_force(const Graph& g) {
    int n = g.vertex_count();
    BruteCounts out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.has_edge(i, j)) ++out.edges;
    // two-stars: center v with two distinct neighbors
    for (int v = 0; v < n; ++v)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (a != v && b != v && g.has_edge(v, a) && g.has_edge(v, b))
                    ++out.two_stars;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                if (g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c))
                    ++out.triangles;
    return out;
}

Graph graph_from_code(int n, std::uint64_t code) {
    Graph g(n);
    for (PairIndex s = 0; s < pair_count(n); ++s)
        if (code >> s & 1) g.set_edge(s, true);
    return g;
}

std::string data_path(const char* name) {
    return std::string(AGRASST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("pair index bijection is lexicographic and total") {
    for (int n = 2; n <= 12; ++n) {
        PairIndex expected = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                PairIndex s = pair_index(n, i, j);
                CHECK(s == expected);
                auto [a, b] = pair_vertices(n, s);
                CHECK(a == i);
                CHECK(b == j);
                ++expected;
            }
        }
        CHECK(expected == pair_count(n));
    }
}

TEST_CASE("toggles copy, never alias") {
    Graph g(3);
    Graph g1 = g.with_edge(0, true);
    CHECK(g.edge_count() == 0);
    CHECK(g1.has_edge(0, 1));
    CHECK(g1.edge_count() == 1);
    // set-to-value is idempotent regardless of the starting bit
    CHECK(g1.with_edge(0, true) == g1);
    CHECK(g1.with_edge(0, false) == g);

    Graph k4 = Graph::complete(4);
    Graph k4m = k4.with_edge(pair_index(4, 2, 3), false);
    CHECK(k4.edge_count() == 6);
    CHECK(k4m.edge_count() == 5);
    CHECK_FALSE(k4m.has_edge(2, 3));
}

TEST_CASE("counts match brute force on every graph with n <= 5") {
    for (int n = 2; n <= 5; ++n) {
        std::uint64_t total = 1ull << pair_count(n);
        for (std::uint64_t code = 0; code < total; ++code) {
            Graph g = graph_from_code(n, code);
            BruteCounts oracle = brute_force(g);
            CHECK(count_edges(g) == oracle.edges);
            CHECK(count_two_stars(g) == oracle.two_stars);
            CHECK(count_triangles(g) == oracle.triangles);
            CHECK(g.edge_code() == code);
        }
    }
}

TEST_CASE("hand counts: path and cliques") {
    Graph path = Graph::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(count_edges(path) == 2);
    CHECK(count_two_stars(path) == 1);
    CHECK(count_triangles(path) == 0);

    Graph k4 = Graph::complete(4);
    CHECK(count_edges(k4) == 6);
    CHECK(count_two_stars(k4) == 12);
    CHECK(count_triangles(k4) == 4);

    Graph k4m = k4.with_edge(pair_index(4, 2, 3), false);
    CHECK(count_edges(k4m) == 5);
    CHECK(count_two_stars(k4m) == 8);
    CHECK(count_triangles(k4m) == 2);
}

TEST_CASE("scaled subgraph counts") {
    Graph edge_pattern = Graph::from_edges(2, {{0, 1}});
    Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(scaled_subgraph_count(g, edge_pattern) == doctest::Approx(6.0));  // 2 * edges

    Graph k3 = Graph::complete(3);
    CHECK(scaled_subgraph_count(k3, k3) == doctest::Approx(2.0));  // 6 injections / n
    CHECK(scaled_subgraph_count(Graph(3), k3) == doctest::Approx(0.0));
    CHECK(scaled_subgraph_count(Graph(2), k3) == doctest::Approx(0.0));  // pattern larger than host

    Graph disconnected(4);
    disconnected.set_edge(0, 1, true);  // vertices 2,3 isolated
    CHECK_THROWS(scaled_subgraph_count(g, disconnected));
}

TEST_CASE("degree vectors and histograms") {
    Graph star = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(degree_vector(star) == std::vector<int>{3, 1, 1, 1});

    CHECK(degree_histogram(Graph(4)) == std::vector<int>{4, 0, 0, 0});

    for (std::uint64_t code : {0x1ABull, 0x2C5ull, 0x3FFull}) {
        Graph g = graph_from_code(5, code);
        auto hist = degree_histogram(g);
        int vertices = 0;
        long weighted = 0;
        for (std::size_t d = 0; d < hist.size(); ++d) {
            vertices += hist[d];
            weighted += static_cast<long>(d) * hist[d];
        }
        CHECK(vertices == 5);
        CHECK(weighted == 2 * count_edges(g));
    }
}

TEST_CASE("bundled networks parse to their published shapes") {
    Graph karate = load_edge_list(data_path("karate.txt"));
    CHECK(karate.vertex_count() == 34);
    CHECK(count_edges(karate) == 78);
    long degree_sum = 0;
    for (int d : degree_vector(karate)) degree_sum += d;
    CHECK(degree_sum == 156);
    CHECK(count_triangles(karate) == 45);
    CHECK(count_two_stars(karate) == 528);

    Graph florentine = load_edge_list(data_path("florentine.txt"));
    CHECK(florentine.vertex_count() == 16);
    CHECK(count_edges(florentine) == 20);
    CHECK(florentine.degree(8) == 6);   // Medici
    CHECK(florentine.degree(11) == 0);  // Pucci, isolated
}

TEST_CASE("conditioning statistics on K3 and K4") {
    Graph k3 = Graph::complete(3);
    PairIndex s01 = pair_index(3, 0, 1);
    CHECK(conditioning_statistic(StatKind::Tri, k3, s01) == StatValue::scalar(1));
    CHECK(conditioning_statistic(StatKind::Edges, k3, s01) == StatValue::scalar(2));

    Graph k4 = Graph::complete(4);
    PairIndex s = pair_index(4, 0, 1);
    CHECK(conditioning_statistic(StatKind::BiDeg, k4, s) == StatValue::of2(2, 2));
    CHECK(conditioning_statistic(StatKind::SumDeg, k4, s) == StatValue::scalar(4));
    // D3 = (edges, min, max) over the degrees of the pair itself
    CHECK(conditioning_statistic(StatKind::D3, k4, s) == StatValue::of3(5, 2, 2));
    CHECK(conditioning_statistic(StatKind::Tri, k4, s) == StatValue::scalar(2));
}

TEST_CASE("conditioning statistics ignore the conditioned entry") {
    // t(x_{-s}) must agree on x, x^{(s,1)}, x^{(s,0)} for every kind and pair.
    for (std::uint64_t code : {0x0ull, 0x5Aull, 0x1234ull, 0x7FFFull}) {
        Graph g = graph_from_code(6, code & ((1u << 15) - 1));
        for (PairIndex s = 0; s < g.pair_count(); ++s) {
            for (StatKind kind : {StatKind::Edges, StatKind::SumDeg, StatKind::BiDeg,
                                  StatKind::D3, StatKind::Tri}) {
                StatValue base = conditioning_statistic(kind, g, s);
                CHECK(conditioning_statistic(kind, g.with_edge(s, true), s) == base);
                CHECK(conditioning_statistic(kind, g.with_edge(s, false), s) == base);
            }
        }
    }
}

TEST_CASE("statistic names round-trip and scalar kinds are marked") {
    for (StatKind kind : {StatKind::Edges, StatKind::SumDeg, StatKind::BiDeg, StatKind::D3,
                          StatKind::Tri}) {
        CHECK(stat_from_name(stat_name(kind)) == kind);
        CHECK(stat_dimension(kind) == (kind == StatKind::BiDeg  ? 2
                                       : kind == StatKind::D3   ? 3
                                                                : 1));
    }
    CHECK(stat_is_scalar(StatKind::Edges));
    CHECK_FALSE(stat_is_scalar(StatKind::BiDeg));
    CHECK_THROWS(stat_from_name("degseq"));
}

TEST_CASE("stat values order lexicographically within a dimension") {
    CHECK(StatValue::scalar(3) < StatValue::scalar(7));
    CHECK(StatValue::of2(1, 5) < StatValue::of2(2, 0));
    CHECK(StatValue::of2(2, 0) < StatValue::of2(2, 1));
    std::set<StatValue> keys{StatValue::scalar(2), StatValue::scalar(1), StatValue::scalar(2)};
    CHECK(keys.size() == 2);
}

TEST_CASE("edge list round trip is byte stable") {
    Graph g = Graph::from_edges(5, {{3, 4}, {0, 2}, {1, 3}});
    std::string text = serialize_edge_list(g);
    CHECK(text == "n 5\n0 2\n1 3\n3 4\n");
    CHECK(parse_edge_list(text) == g);
    CHECK(serialize_edge_list(parse_edge_list(text)) == text);
}

TEST_CASE("edge list parser accepts comments, rejects malformed input") {
    Graph g = parse_edge_list("# header\nn 4\n\n0 1  # tail comment\n2 3\n");
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 2);

    CHECK_THROWS(parse_edge_list("0 1\n"));            // missing header
    CHECK_THROWS(parse_edge_list("n 4\n1 1\n"));       // self loop
    CHECK_THROWS(parse_edge_list("n 4\n0 4\n"));       // out of range
    CHECK_THROWS(parse_edge_list("n 4\n0 1 2\n"));     // trailing token
    CHECK_THROWS(parse_edge_list("n 0\n"));            // no vertices
    CHECK_THROWS(parse_edge_list("n 4\nx y\n"));       // junk
}

TEST_CASE("hamming distance counts differing edges") {
    Graph a = Graph::from_edges(4, {{0, 1}, {2, 3}});
    Graph b = Graph::from_edges(4, {{0, 1}, {1, 2}});
    CHECK(a.hamming_distance(a) == 0);
    CHECK(a.hamming_distance(b) == 2);
    CHECK(b.hamming_distance(a) == 2);
    CHECK(Graph(4).hamming_distance(Graph::complete(4)) == 6);
}
