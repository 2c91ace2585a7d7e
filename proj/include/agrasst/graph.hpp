#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace agrasst {

// Index of an unordered vertex pair {i,j}, i<j, in lexicographic order:
// (0,1),(0,2),...,(0,n-1),(1,2),...  Pairs and their indices are the
// coordinate system for every edge toggle and conditional probability.
using PairIndex = std::uint32_t;

std::size_t pair_count(int n);                       // n*(n-1)/2
PairIndex pair_index(int n, int i, int j);           // (i,j) -> s, i<j required
std::pair<int, int> pair_vertices(int n, PairIndex s);

// Simple undirected graph on labelled vertices 0..n-1, no self loops,
// stored as adjacency bit rows.  Value type; toggles produce copies.
class Graph {
public:
    explicit Graph(int n);

    static Graph complete(int n);
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int vertex_count() const { return n_; }
    std::size_t pair_count() const { return agrasst::pair_count(n_); }

    bool has_edge(int i, int j) const;
    bool edge_bit(PairIndex s) const;

    // Copy of this graph with entry s forced to `present`.
    Graph with_edge(PairIndex s, bool present) const;
    // In-place update, for samplers that own their working state.
    void set_edge(PairIndex s, bool present);
    void set_edge(int i, int j, bool present);

    int degree(int i) const;
    int common_neighbors(int i, int j) const;
    long edge_count() const;

    // Edge indicators packed into a word, lowest bit = pair 0.  Only for
    // graphs with at most 64 pairs (n <= 11); used for enumeration.
    std::uint64_t edge_code() const;

    // Hamming distance between edge indicator vectors.
    long hamming_distance(const Graph& other) const;

    bool operator==(const Graph& other) const;

    const std::vector<std::uint64_t>& rows() const { return rows_; }
    int words_per_row() const { return words_; }

private:
    int n_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> rows_;  // n rows of `words_` words each
};

struct GraphHash {
    std::size_t operator()(const Graph& g) const;
};

long count_edges(const Graph& g);
long count_two_stars(const Graph& g);   // paths of length two: sum_v C(deg v, 2)
long count_triangles(const Graph& g);

// Number of edge-preserving injections of the pattern into g, divided by
// n(n-1)...(n-v+3) where v is the pattern's vertex count (no division for a
// single edge).  The pattern must be connected.  A single-edge pattern gives
// twice the edge count.
double scaled_subgraph_count(const Graph& g, const Graph& pattern);

std::vector<int> degree_vector(const Graph& g);
// hist[d] = number of vertices of degree d, d = 0..n-1.
std::vector<int> degree_histogram(const Graph& g);

// Conditioning statistics: summaries of x with entry s forced to 0, used as
// lookup keys when estimating an edge's conditional probability.
enum class StatKind { Edges, SumDeg, BiDeg, D3, Tri };

bool stat_is_scalar(StatKind kind);
int stat_dimension(StatKind kind);
std::string stat_name(StatKind kind);
StatKind stat_from_name(const std::string& name);

// Small integer vector, dimension 1-3, totally ordered; key type for the
// conditional probability tables.
struct StatValue {
    std::array<std::int32_t, 3> v{0, 0, 0};
    std::int32_t dim = 1;

    static StatValue scalar(std::int32_t a);
    static StatValue of2(std::int32_t a, std::int32_t b);
    static StatValue of3(std::int32_t a, std::int32_t b, std::int32_t c);

    auto operator<=>(const StatValue&) const = default;
    std::string to_string() const;
};

struct StatValueHash {
    std::size_t operator()(const StatValue& k) const;
};

// t(x_{-s}): the chosen statistic of g with entry s forced absent.
//   Edges  : edge count
//   SumDeg : deg(i) + deg(j) for s = {i,j}
//   BiDeg  : (min, max) of deg(i), deg(j)
//   D3     : (edge count, min deg, max deg)
//   Tri    : number of common neighbors of i and j
StatValue conditioning_statistic(StatKind kind, const Graph& g, PairIndex s);

}  // namespace agrasst
