#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agrasst/graph.hpp"
#include "agrasst/rng.hpp"

namespace agrasst {

// Exponential random graph model q(x) ∝ exp(Σ_l β_l t_l(x)).  Built-in term
// statistics are raw counts (edge count, two-star count, triangle count); a
// Pattern term uses the scaled injection count of an arbitrary connected
// subgraph.  The normalizing constant is never computed except by the
// enumeration oracle below.
enum class TermKind { Edges, TwoStars, Triangles, Pattern };

struct ErgmTerm {
    TermKind kind = TermKind::Edges;
    double beta = 0.0;
    std::optional<Graph> pattern;  // Pattern terms only

    // Edge count of the term's subgraph, the exponent driving the
    // large-n regime check.
    int edge_exponent() const;
};

struct ErgmSpec {
    int n = 0;
    std::vector<ErgmTerm> terms;

    void validate() const;  // >= 1 term, finite betas, first term is Edges

    static ErgmSpec edges_only(int n, double beta1);
    // Edges + two-stars + triangles; defaults are the null used throughout
    // the test suite.
    static ErgmSpec e2st(int n, double b1 = -2.0, double b2 = 0.0, double b3 = 0.01);

    std::string describe() const;
};

double term_statistic(const ErgmTerm& term, const Graph& g);
// t_l(x^{s,1}) - t_l(x^{s,0}); depends only on x_{-s}.
double term_change(const ErgmTerm& term, const Graph& g, PairIndex s);
double ergm_log_weight(const ErgmSpec& spec, const Graph& g);

// P(X_s = 1 | X_{-s} = x_{-s}): logistic of the weighted statistic change,
// so no normalizing constant and no overflow.
double exact_conditional(const ErgmSpec& spec, const Graph& g, PairIndex s);

// Streaming supply of graphs.  Finite sources throw when exhausted.
class GraphSource {
public:
    virtual ~GraphSource() = default;
    virtual int vertex_count() const = 0;
    virtual Graph next() = 0;
    // Graphs left before exhaustion; empty for unbounded sources.
    virtual std::optional<std::size_t> remaining() const { return std::nullopt; }
    std::vector<Graph> take(std::size_t count);
};

inline std::uint64_t default_burn_in(std::size_t pair_count) { return 20 * pair_count; }
inline std::uint64_t default_thinning(std::size_t pair_count) { return pair_count; }

// Single-site Glauber dynamics for an ERGM: each step picks a uniform pair s
// and redraws x_s from its exact conditional.  The chain starts empty and is
// burned in on construction.
class GlauberSource : public GraphSource {
public:
    GlauberSource(ErgmSpec spec, std::uint64_t seed, std::uint64_t burn_in,
                  std::uint64_t thinning);
    GlauberSource(ErgmSpec spec, std::uint64_t seed);  // default burn-in/thinning

    int vertex_count() const override { return spec_.n; }
    Graph next() override;
    void step();

private:
    ErgmSpec spec_;
    Graph state_;
    Rng rng_;
    std::uint64_t thinning_ = 0;
};

class BernoulliSource : public GraphSource {
public:
    BernoulliSource(int n, double p, std::uint64_t seed);
    int vertex_count() const override { return n_; }
    Graph next() override;

private:
    int n_;
    double p_;
    Rng rng_;
};

// Fixed list of graphs, e.g. loaded from a sample archive.
class VectorSource : public GraphSource {
public:
    explicit VectorSource(std::vector<Graph> graphs);
    int vertex_count() const override;
    Graph next() override;
    std::optional<std::size_t> remaining() const override { return graphs_.size() - cursor_; }

private:
    std::vector<Graph> graphs_;
    std::size_t cursor_ = 0;
};

std::vector<Graph> glauber_sample(const ErgmSpec& spec, std::size_t count,
                                  std::uint64_t burn_in, std::uint64_t thinning,
                                  std::uint64_t seed);
std::vector<Graph> glauber_sample(const ErgmSpec& spec, std::size_t count,
                                  std::uint64_t seed);
std::vector<Graph> bernoulli_sample(int n, double p, std::size_t count,
                                    std::uint64_t seed);

// Exhaustive Gibbs distribution over all graphs on n vertices, n <= 5.
// Probabilities are indexed by Graph::edge_code().
struct EnumeratedModel {
    int n = 0;
    std::vector<double> probabilities;  // size 2^pair_count(n)

    Graph graph_at(std::uint64_t code) const;
    double probability(const Graph& g) const;

    // Pooled conditional P(X_s=1 | t(X_{-s})=k) for each attainable k,
    // averaging over pairs s with the model's own weights.
    std::vector<std::pair<StatValue, double>> conditional_table(StatKind kind) const;
};

EnumeratedModel enumerate_distribution(const ErgmSpec& spec);

// Large-n mean-field behaviour of the model: Φ(a) = Σ β_l e_l a^{e_l-1},
// φ(a) = (1+tanh Φ(a))/2.  The model is in the estimable high-temperature
// regime when ½|Φ'(1)| < 1 and φ has a fixed point a*.
struct RegimeReport {
    std::optional<double> a_star;
    double phi_prime_half = 0.0;
    bool satisfied = false;
    bool multiple_fixed_points = false;
};

RegimeReport check_regime(const ErgmSpec& spec);

}  // namespace agrasst
