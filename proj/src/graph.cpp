#include "agrasst/graph.hpp"

#include <bit>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace agrasst {

std::size_t pair_count(int n) {
    if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
    return static_cast<std::size_t>(n) * (n - 1) / 2;
}

PairIndex pair_index(int n, int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("vertex out of range");
    if (i == j) throw std::invalid_argument("self loops have no pair index");
    if (i > j) std::swap(i, j);
    std::size_t s = static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2
                    + (j - i - 1);
    return static_cast<PairIndex>(s);
}

std::pair<int, int> pair_vertices(int n, PairIndex s) {
    std::size_t rest = s;
    for (int i = 0; i < n - 1; ++i) {
        std::size_t row = static_cast<std::size_t>(n - 1 - i);
        if (rest < row) return {i, static_cast<int>(i + 1 + rest)};
        rest -= row;
    }
    throw std::out_of_range("pair index out of range");
}

Graph::Graph(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("vertex count must be at least 1");
    words_ = (n + 63) / 64;
    rows_.assign(static_cast<std::size_t>(n) * words_, 0);
}

Graph Graph::complete(int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.set_edge(i, j, true);
    return g;
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [i, j] : edges) g.set_edge(i, j, true);
    return g;
}

bool Graph::has_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("vertex out of range");
    if (i == j) return false;
    return (rows_[static_cast<std::size_t>(i) * words_ + j / 64] >> (j % 64)) & 1u;
}

bool Graph::edge_bit(PairIndex s) const {
    auto [i, j] = pair_vertices(n_, s);
    return has_edge(i, j);
}

void Graph::set_edge(int i, int j, bool present) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("vertex out of range");
    if (i == j) throw std::invalid_argument("self loops not allowed");
    std::uint64_t bi = 1ULL << (j % 64);
    std::uint64_t bj = 1ULL << (i % 64);
    auto ri = static_cast<std::size_t>(i) * words_ + j / 64;
    auto rj = static_cast<std::size_t>(j) * words_ + i / 64;
    if (present) {
        rows_[ri] |= bi;
        rows_[rj] |= bj;
    } else {
        rows_[ri] &= ~bi;
        rows_[rj] &= ~bj;
    }
}

void Graph::set_edge(PairIndex s, bool present) {
    auto [i, j] = pair_vertices(n_, s);
    set_edge(i, j, present);
}

Graph Graph::with_edge(PairIndex s, bool present) const {
    Graph g = *this;
    g.set_edge(s, present);
    return g;
}

int Graph::degree(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("vertex out of range");
    int d = 0;
    for (int w = 0; w < words_; ++w)
        d += std::popcount(rows_[static_cast<std::size_t>(i) * words_ + w]);
    return d;
}

int Graph::common_neighbors(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("vertex out of range");
    int c = 0;
    for (int w = 0; w < words_; ++w)
        c += std::popcount(rows_[static_cast<std::size_t>(i) * words_ + w]
                           & rows_[static_cast<std::size_t>(j) * words_ + w]);
    return c;
}

long Graph::edge_count() const {
    long total = 0;
    for (std::uint64_t w : rows_) total += std::popcount(w);
    return total / 2;
}

std::uint64_t Graph::edge_code() const {
    if (pair_count() > 64) throw std::invalid_argument("graph too large for edge code");
    std::uint64_t code = 0;
    std::size_t N = pair_count();
    for (std::size_t s = 0; s < N; ++s)
        if (edge_bit(static_cast<PairIndex>(s))) code |= 1ULL << s;
    return code;
}

long Graph::hamming_distance(const Graph& other) const {
    if (n_ != other.n_) throw std::invalid_argument("vertex count mismatch");
    long diff = 0;
    for (std::size_t w = 0; w < rows_.size(); ++w)
        diff += std::popcount(rows_[w] ^ other.rows_[w]);
    return diff / 2;  // every edge sits in two rows
}

bool Graph::operator==(const Graph& other) const {
    return n_ == other.n_ && rows_ == other.rows_;
}

std::size_t GraphHash::operator()(const Graph& g) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(g.vertex_count());
    for (std::uint64_t w : g.rows()) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

long count_edges(const Graph& g) { return g.edge_count(); }

long count_two_stars(const Graph& g) {
    long total = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        long d = g.degree(v);
        total += d * (d - 1) / 2;
    }
    return total;
}

long count_triangles(const Graph& g) {
    long total = 0;
    int n = g.vertex_count();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.has_edge(i, j)) total += g.common_neighbors(i, j);
    return total / 3;  // each triangle seen from its three edges
}

namespace {

bool is_connected(const Graph& g) {
    int n = g.vertex_count();
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        for (int u = 0; u < n; ++u) {
            if (!seen[u] && g.has_edge(v, u)) {
                seen[u] = 1;
                ++reached;
                frontier.push(u);
            }
        }
    }
    return reached == n;
}

long count_injections(const Graph& g, const Graph& pattern) {
    int nh = pattern.vertex_count();
    int n = g.vertex_count();
    std::vector<int> image(nh, -1);
    std::vector<char> used(n, 0);
    long total = 0;
    // Backtracking over pattern vertices in index order; pattern sizes are
    // tiny so no ordering heuristics are needed.
    auto place = [&](auto&& self, int v) -> void {
        if (v == nh) {
            ++total;
            return;
        }
        for (int cand = 0; cand < n; ++cand) {
            if (used[cand]) continue;
            bool ok = true;
            for (int u = 0; u < v; ++u) {
                if (pattern.has_edge(u, v) && !g.has_edge(image[u], cand)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            image[v] = cand;
            used[cand] = 1;
            self(self, v + 1);
            used[cand] = 0;
        }
    };
    place(place, 0);
    return total;
}

}  // namespace

double scaled_subgraph_count(const Graph& g, const Graph& pattern) {
    int vh = pattern.vertex_count();
    if (vh < 2 || pattern.edge_count() == 0)
        throw std::invalid_argument("pattern must have at least one edge");
    if (!is_connected(pattern)) throw std::invalid_argument("pattern must be connected");
    int n = g.vertex_count();
    if (vh > n) return 0.0;
    double denom = 1.0;
    for (int t = 0; t <= vh - 3; ++t) denom *= static_cast<double>(n - t);
    return static_cast<double>(count_injections(g, pattern)) / denom;
}

std::vector<int> degree_vector(const Graph& g) {
    std::vector<int> deg(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) deg[v] = g.degree(v);
    return deg;
}

std::vector<int> degree_histogram(const Graph& g) {
    int n = g.vertex_count();
    std::vector<int> hist(n == 0 ? 0 : n, 0);
    for (int v = 0; v < n; ++v) ++hist[g.degree(v)];
    return hist;
}

bool stat_is_scalar(StatKind kind) {
    return kind == StatKind::Edges || kind == StatKind::SumDeg || kind == StatKind::Tri;
}

int stat_dimension(StatKind kind) {
    switch (kind) {
        case StatKind::Edges:
        case StatKind::SumDeg:
        case StatKind::Tri: return 1;
        case StatKind::BiDeg: return 2;
        case StatKind::D3: return 3;
    }
    throw std::invalid_argument("unknown statistic kind");
}

std::string stat_name(StatKind kind) {
    switch (kind) {
        case StatKind::Edges: return "edges";
        case StatKind::SumDeg: return "sumdeg";
        case StatKind::BiDeg: return "bideg";
        case StatKind::D3: return "d3";
        case StatKind::Tri: return "tri";
    }
    throw std::invalid_argument("unknown statistic kind");
}

StatKind stat_from_name(const std::string& name) {
    if (name == "edges") return StatKind::Edges;
    if (name == "sumdeg") return StatKind::SumDeg;
    if (name == "bideg") return StatKind::BiDeg;
    if (name == "d3") return StatKind::D3;
    if (name == "tri") return StatKind::Tri;
    throw std::invalid_argument("unknown statistic name: " + name);
}

StatValue StatValue::scalar(std::int32_t a) { return StatValue{{a, 0, 0}, 1}; }
StatValue StatValue::of2(std::int32_t a, std::int32_t b) { return StatValue{{a, b, 0}, 2}; }
StatValue StatValue::of3(std::int32_t a, std::int32_t b, std::int32_t c) {
    return StatValue{{a, b, c}, 3};
}

std::string StatValue::to_string() const {
    std::ostringstream out;
    out << '(';
    for (int d = 0; d < dim; ++d) {
        if (d) out << ',';
        out << v[d];
    }
    out << ')';
    return out.str();
}

std::size_t StatValueHash::operator()(const StatValue& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.dim);
    for (int d = 0; d < 3; ++d) {
        h = h * 0x100000001b3ULL ^ static_cast<std::uint32_t>(k.v[d]);
    }
    return static_cast<std::size_t>(h);
}

StatValue conditioning_statistic(StatKind kind, const Graph& g, PairIndex s) {
    auto [i, j] = pair_vertices(g.vertex_count(), s);
    int present = g.has_edge(i, j) ? 1 : 0;
    switch (kind) {
        case StatKind::Edges:
            return StatValue::scalar(static_cast<std::int32_t>(g.edge_count() - present));
        case StatKind::SumDeg:
            return StatValue::scalar(g.degree(i) + g.degree(j) - 2 * present);
        case StatKind::BiDeg: {
            int di = g.degree(i) - present;
            int dj = g.degree(j) - present;
            return StatValue::of2(std::min(di, dj), std::max(di, dj));
        }
        case StatKind::D3: {
            int di = g.degree(i) - present;
            int dj = g.degree(j) - present;
            return StatValue::of3(static_cast<std::int32_t>(g.edge_count() - present),
                                  std::min(di, dj), std::max(di, dj));
        }
        case StatKind::Tri:
            return StatValue::scalar(g.common_neighbors(i, j));
    }
    throw std::invalid_argument("unknown statistic kind");
}

}  // namespace agrasst
