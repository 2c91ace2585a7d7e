#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "agrasst/graph.hpp"
#include "agrasst/models.hpp"

using namespace agrasst;

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Conditional probability recomputed the slow way: weight both toggles fully.
double conditional_by_recount(const ErgmSpec& spec, const Graph& g, PairIndex s) {
    double delta = 0.0;
    Graph up = g.with_edge(s, true);
    Graph down = g.with_edge(s, false);
    for (const ErgmTerm& term : spec.terms)
        delta += term.beta * (term_statistic(term, up) - term_statistic(term, down));
    return logistic(delta);
}

Graph graph_from_code(int n, std::uint64_t code) {
    Graph g(n);
    for (PairIndex s = 0; s < pair_count(n); ++s)
        if (code >> s & 1) g.set_edge(s, true);
    return g;
}

double mean_density(const std::vector<Graph>& graphs) {
    double total = 0.0;
    for (const Graph& g : graphs)
        total += static_cast<double>(g.edge_count()) / g.pair_count();
    return total / graphs.size();
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS(ErgmSpec{4, {}}.validate());
    ErgmSpec no_edges_first{4, {{TermKind::Triangles, 0.5, {}}}};
    CHECK_THROWS(no_edges_first.validate());
    CHECK_NOTHROW(ErgmSpec::e2st(4).validate());
    CHECK(ErgmSpec::e2st(20).describe() != "");
}

TEST_CASE("term changes equal statistic differences") {
    ErgmSpec spec = ErgmSpec::e2st(5, -1.0, 0.3, 0.2);
    for (std::uint64_t code : {0x0ull, 0x3FFull, 0x155ull, 0x2A9ull}) {
        Graph g = graph_from_code(5, code);
        for (PairIndex s = 0; s < g.pair_count(); ++s) {
            Graph up = g.with_edge(s, true);
            Graph down = g.with_edge(s, false);
            for (const ErgmTerm& term : spec.terms) {
                double expected = term_statistic(term, up) - term_statistic(term, down);
                CHECK(term_change(term, g, s) == doctest::Approx(expected).epsilon(1e-12));
                // the change must not depend on the current value of x_s
                CHECK(term_change(term, up, s) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("edges-only conditionals are the logistic of the coefficient") {
    for (double beta : {-2.0, 0.0, 0.7}) {
        ErgmSpec spec = ErgmSpec::edges_only(6, beta);
        Graph g = graph_from_code(6, 0x1234 & 0x7FFF);
        for (PairIndex s = 0; s < g.pair_count(); s += 3)
            CHECK(exact_conditional(spec, g, s) == doctest::Approx(logistic(beta)).epsilon(1e-12));
    }
}

TEST_CASE("conditional for the near-complete four-vertex graph") {
    // K4 minus edge (2,3): adding the edge back changes edges by 1, two-stars
    // by deg(2)+deg(3)=4, triangles by |common(2,3)|=2, so the conditional is
    // logistic(-2 + 0 + 0.02).
    ErgmSpec spec = ErgmSpec::e2st(4);
    Graph g = Graph::complete(4).with_edge(pair_index(4, 2, 3), false);
    PairIndex s = pair_index(4, 2, 3);
    CHECK(exact_conditional(spec, g, s) == doctest::Approx(logistic(-1.98)).epsilon(1e-12));
    CHECK(exact_conditional(spec, g, s)
          == doctest::Approx(conditional_by_recount(spec, g, s)).epsilon(1e-12));
}

TEST_CASE("conditionals match the recount oracle everywhere at n=4") {
    ErgmSpec spec = ErgmSpec::e2st(4, -0.8, 0.4, -0.25);
    for (std::uint64_t code = 0; code < 64; ++code) {
        Graph g = graph_from_code(4, code);
        for (PairIndex s = 0; s < 6; ++s) {
            double a = exact_conditional(spec, g, s);
            CHECK(a == doctest::Approx(conditional_by_recount(spec, g, s)).epsilon(1e-12));
            // conditioning ignores the entry itself
            CHECK(exact_conditional(spec, g.with_edge(s, true), s)
                  == doctest::Approx(a).epsilon(1e-12));
        }
    }
}

TEST_CASE("pattern terms use the scaled injection count") {
    Graph triangle = Graph::complete(3);
    ErgmSpec spec{4,
                  {{TermKind::Edges, -1.0, {}}, {TermKind::Pattern, 0.5, triangle}}};
    spec.validate();
    Graph g = Graph::complete(4);
    for (PairIndex s = 0; s < 6; ++s)
        CHECK(exact_conditional(spec, g, s)
              == doctest::Approx(conditional_by_recount(spec, g, s)).epsilon(1e-12));
}

TEST_CASE("enumeration: zero coefficients give the uniform distribution") {
    EnumeratedModel model = enumerate_distribution(ErgmSpec::edges_only(3, 0.0));
    CHECK(model.probabilities.size() == 8);
    for (double p : model.probabilities) CHECK(p == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("enumeration: edges-only model is product Bernoulli") {
    double beta = -1.1;
    double p = logistic(beta);
    EnumeratedModel model = enumerate_distribution(ErgmSpec::edges_only(4, beta));
    double total = 0.0;
    for (std::uint64_t code = 0; code < 64; ++code) {
        Graph g = model.graph_at(code);
        double expected = std::pow(p, g.edge_count()) * std::pow(1 - p, 6 - g.edge_count());
        CHECK(model.probability(g) == doctest::Approx(expected).epsilon(1e-10));
        total += model.probabilities[code];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumeration matches a direct unnormalized summation") {
    // Second, independent normalization path: the coefficients are small
    // enough at n=4 that plain exp() cannot overflow.
    ErgmSpec spec = ErgmSpec::e2st(4, -2.0, 0.25, 0.01);
    EnumeratedModel model = enumerate_distribution(spec);
    std::vector<double> weights(64);
    double total = 0.0;
    for (std::uint64_t code = 0; code < 64; ++code) {
        weights[code] = std::exp(ergm_log_weight(spec, model.graph_at(code)));
        total += weights[code];
    }
    for (std::uint64_t code = 0; code < 64; ++code)
        CHECK(model.probabilities[code] == doctest::Approx(weights[code] / total).epsilon(1e-12));
}

TEST_CASE("enumerated distribution is Glauber stationary") {
    // pi T = pi entrywise for the single-site kernel
    // T(x,y) = (1/N) [ a_s(x) if y = x^{s,1}, 1-a_s(x) if y = x^{s,0} ].
    for (const ErgmSpec& spec : {ErgmSpec::e2st(4), ErgmSpec::edges_only(3, 1.0)}) {
        EnumeratedModel model = enumerate_distribution(spec);
        std::size_t count = model.probabilities.size();
        auto N = static_cast<double>(pair_count(spec.n));
        std::vector<double> next(count, 0.0);
        for (std::uint64_t code = 0; code < count; ++code) {
            Graph x = model.graph_at(code);
            double px = model.probabilities[code];
            for (PairIndex s = 0; s < pair_count(spec.n); ++s) {
                double a = exact_conditional(spec, x, s);
                next[x.with_edge(s, true).edge_code()] += px * a / N;
                next[x.with_edge(s, false).edge_code()] += px * (1.0 - a) / N;
            }
        }
        for (std::uint64_t code = 0; code < count; ++code)
            CHECK(next[code] == doctest::Approx(model.probabilities[code]).epsilon(1e-12));
    }
}

TEST_CASE("pooled conditional table of an edges-only model is flat") {
    double beta = -0.6;
    EnumeratedModel model = enumerate_distribution(ErgmSpec::edges_only(4, beta));
    auto table = model.conditional_table(StatKind::Edges);
    CHECK(table.size() == 6);  // k = 0..5 edges elsewhere
    for (const auto& [k, value] : table)
        CHECK(value == doctest::Approx(logistic(beta)).epsilon(1e-10));
}

TEST_CASE("glauber sampling is reproducible and seed sensitive") {
    ErgmSpec spec = ErgmSpec::e2st(6);
    auto a = glauber_sample(spec, 5, 42);
    auto b = glauber_sample(spec, 5, 42);
    auto c = glauber_sample(spec, 5, 43);
    CHECK(a == b);
    CHECK(a != c);

    GlauberSource source(spec, 42);
    for (const Graph& g : a) CHECK(source.next() == g);
    CHECK_FALSE(source.remaining().has_value());
}

TEST_CASE("extreme edge coefficients pin the chain") {
    for (const Graph& g : glauber_sample(ErgmSpec::edges_only(5, -50.0), 10, 7))
        CHECK(g.edge_count() == 0);
    for (const Graph& g : glauber_sample(ErgmSpec::edges_only(5, 50.0), 10, 7))
        CHECK(g == Graph::complete(5));
}

TEST_CASE("neutral glauber chain hits density one half") {
    auto draws = glauber_sample(ErgmSpec::edges_only(10, 0.0), 200, 11);
    CHECK(mean_density(draws) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("bernoulli source edge cases and density") {
    for (const Graph& g : bernoulli_sample(6, 0.0, 5, 3)) CHECK(g.edge_count() == 0);
    for (const Graph& g : bernoulli_sample(6, 1.0, 5, 3)) CHECK(g == Graph::complete(6));

    auto draws = bernoulli_sample(20, 0.2, 1000, 5);
    double mean_edges = 0.0;
    for (const Graph& g : draws) mean_edges += g.edge_count();
    mean_edges /= draws.size();
    // E = 190 * 0.2 = 38, sd of the mean ~ 0.17
    CHECK(mean_edges == doctest::Approx(38.0).epsilon(0.03));
}

TEST_CASE("vector source reports and enforces exhaustion") {
    VectorSource source({Graph(3), Graph::complete(3)});
    CHECK(source.vertex_count() == 3);
    CHECK(source.remaining() == std::size_t{2});
    source.next();
    CHECK(source.remaining() == std::size_t{1});
    source.next();
    CHECK_THROWS_WITH(source.next(), doctest::Contains("exhausted"));
}

TEST_CASE("regime check: edges-only closed form") {
    for (double beta : {-2.0, 0.0, 1.3}) {
        RegimeReport report = check_regime(ErgmSpec::edges_only(10, beta));
        CHECK(report.satisfied);
        CHECK(report.phi_prime_half == doctest::Approx(0.0));
        REQUIRE(report.a_star.has_value());
        CHECK(*report.a_star == doctest::Approx((1.0 + std::tanh(beta)) / 2.0).epsilon(1e-10));
        CHECK_FALSE(report.multiple_fixed_points);
    }
}

TEST_CASE("regime check: the default three-term null is inside the regime") {
    ErgmSpec spec = ErgmSpec::e2st(20);
    RegimeReport report = check_regime(spec);
    CHECK(report.satisfied);
    CHECK(report.phi_prime_half == doctest::Approx(0.03).epsilon(1e-9));
    REQUIRE(report.a_star.has_value());
    CHECK(*report.a_star > 0.015);
    CHECK(*report.a_star < 0.022);

    // the reported point really is a fixed point of phi
    double phi = (1.0 + std::tanh(-2.0 + 0.03 * *report.a_star * *report.a_star)) / 2.0;
    CHECK(std::abs(phi - *report.a_star) < 1e-10);
}

TEST_CASE("regime check flags a steep two-star coefficient") {
    RegimeReport report = check_regime(ErgmSpec::e2st(20, 0.0, 1.2, 0.0));
    CHECK(report.phi_prime_half == doctest::Approx(1.2).epsilon(1e-9));
    CHECK_FALSE(report.satisfied);
}
