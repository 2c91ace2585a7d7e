#include "agrasst/models.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace agrasst {

namespace {

double logistic(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

int ErgmTerm::edge_exponent() const {
    switch (kind) {
        case TermKind::Edges: return 1;
        case TermKind::TwoStars: return 2;
        case TermKind::Triangles: return 3;
        case TermKind::Pattern:
            if (!pattern) throw std::invalid_argument("pattern term without a pattern");
            return static_cast<int>(pattern->edge_count());
    }
    throw std::invalid_argument("unknown term kind");
}

void ErgmSpec::validate() const {
    if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
    if (terms.empty()) throw std::invalid_argument("model needs at least one term");
    if (terms.front().kind != TermKind::Edges)
        throw std::invalid_argument("first model term must be the edge term");
    for (const auto& term : terms) {
        if (!std::isfinite(term.beta))
            throw std::invalid_argument("model coefficients must be finite");
        if (term.kind == TermKind::Pattern) {
            if (!term.pattern) throw std::invalid_argument("pattern term without a pattern");
            term.pattern->edge_count();  // pattern validity checked on use
        }
    }
}

ErgmSpec ErgmSpec::edges_only(int n, double beta1) {
    ErgmSpec spec;
    spec.n = n;
    spec.terms = {{TermKind::Edges, beta1, std::nullopt}};
    return spec;
}

ErgmSpec ErgmSpec::e2st(int n, double b1, double b2, double b3) {
    ErgmSpec spec;
    spec.n = n;
    spec.terms = {{TermKind::Edges, b1, std::nullopt},
                  {TermKind::TwoStars, b2, std::nullopt},
                  {TermKind::Triangles, b3, std::nullopt}};
    return spec;
}

std::string ErgmSpec::describe() const {
    std::ostringstream out;
    out << "ergm(n=" << n;
    for (const auto& term : terms) {
        out << ",";
        switch (term.kind) {
            case TermKind::Edges: out << "edges"; break;
            case TermKind::TwoStars: out << "twostars"; break;
            case TermKind::Triangles: out << "triangles"; break;
            case TermKind::Pattern: out << "pattern[e=" << term.edge_exponent() << "]"; break;
        }
        out << "=" << term.beta;
    }
    out << ")";
    return out.str();
}

double term_statistic(const ErgmTerm& term, const Graph& g) {
    switch (term.kind) {
        case TermKind::Edges: return static_cast<double>(count_edges(g));
        case TermKind::TwoStars: return static_cast<double>(count_two_stars(g));
        case TermKind::Triangles: return static_cast<double>(count_triangles(g));
        case TermKind::Pattern:
            if (!term.pattern) throw std::invalid_argument("pattern term without a pattern");
            return scaled_subgraph_count(g, *term.pattern);
    }
    throw std::invalid_argument("unknown term kind");
}

double term_change(const ErgmTerm& term, const Graph& g, PairIndex s) {
    auto [i, j] = pair_vertices(g.vertex_count(), s);
    int present = g.has_edge(i, j) ? 1 : 0;
    switch (term.kind) {
        case TermKind::Edges: return 1.0;
        case TermKind::TwoStars:
            // Adding edge {i,j} creates a two-star per other edge at i or j.
            return static_cast<double>(g.degree(i) + g.degree(j) - 2 * present);
        case TermKind::Triangles:
            return static_cast<double>(g.common_neighbors(i, j));
        case TermKind::Pattern:
            return term_statistic(term, g.with_edge(s, true))
                 - term_statistic(term, g.with_edge(s, false));
    }
    throw std::invalid_argument("unknown term kind");
}

double ergm_log_weight(const ErgmSpec& spec, const Graph& g) {
    double total = 0.0;
    for (const auto& term : spec.terms) total += term.beta * term_statistic(term, g);
    return total;
}

double exact_conditional(const ErgmSpec& spec, const Graph& g, PairIndex s) {
    spec.validate();
    if (g.vertex_count() != spec.n) throw std::invalid_argument("graph size does not match model");
    double delta = 0.0;
    for (const auto& term : spec.terms) delta += term.beta * term_change(term, g, s);
    return logistic(delta);
}

std::vector<Graph> GraphSource::take(std::size_t count) {
    std::vector<Graph> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(next());
    return out;
}

GlauberSource::GlauberSource(ErgmSpec spec, std::uint64_t seed, std::uint64_t burn_in,
                             std::uint64_t thinning)
    : spec_(std::move(spec)), state_(spec_.n), rng_(seed), thinning_(thinning) {
    spec_.validate();
    if (spec_.n < 2) throw std::invalid_argument("sampler needs at least two vertices");
    for (std::uint64_t t = 0; t < burn_in; ++t) step();
}

GlauberSource::GlauberSource(ErgmSpec spec, std::uint64_t seed)
    : GlauberSource(spec, seed, default_burn_in(pair_count(spec.n)),
                    default_thinning(pair_count(spec.n))) {}

void GlauberSource::step() {
    std::size_t N = state_.pair_count();
    auto s = static_cast<PairIndex>(rng_.below(N));
    double p = exact_conditional(spec_, state_, s);
    state_.set_edge(s, rng_.bernoulli(p));
}

Graph GlauberSource::next() {
    for (std::uint64_t t = 0; t < thinning_; ++t) step();
    return state_;
}

BernoulliSource::BernoulliSource(int n, double p, std::uint64_t seed)
    : n_(n), p_(p), rng_(seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must be in [0,1]");
    if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
}

Graph BernoulliSource::next() {
    Graph g(n_);
    std::size_t N = g.pair_count();
    for (std::size_t s = 0; s < N; ++s)
        if (rng_.bernoulli(p_)) g.set_edge(static_cast<PairIndex>(s), true);
    return g;
}

VectorSource::VectorSource(std::vector<Graph> graphs) : graphs_(std::move(graphs)) {
    if (graphs_.empty()) throw std::invalid_argument("sample archive is empty");
    for (const auto& g : graphs_)
        if (g.vertex_count() != graphs_.front().vertex_count())
            throw std::invalid_argument("sample archive mixes vertex counts");
}

int VectorSource::vertex_count() const { return graphs_.front().vertex_count(); }

Graph VectorSource::next() {
    if (cursor_ >= graphs_.size())
        throw std::runtime_error("sample archive exhausted after "
                                 + std::to_string(graphs_.size()) + " graphs");
    return graphs_[cursor_++];
}

std::vector<Graph> glauber_sample(const ErgmSpec& spec, std::size_t count,
                                  std::uint64_t burn_in, std::uint64_t thinning,
                                  std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample count must be at least 1");
    GlauberSource source(spec, seed, burn_in, thinning);
    return source.take(count);
}

std::vector<Graph> glauber_sample(const ErgmSpec& spec, std::size_t count,
                                  std::uint64_t seed) {
    std::size_t N = pair_count(spec.n);
    return glauber_sample(spec, count, default_burn_in(N), default_thinning(N), seed);
}

std::vector<Graph> bernoulli_sample(int n, double p, std::size_t count, std::uint64_t seed) {
    BernoulliSource source(n, p, seed);
    return source.take(count);
}

Graph EnumeratedModel::graph_at(std::uint64_t code) const {
    Graph g(n);
    std::size_t N = g.pair_count();
    for (std::size_t s = 0; s < N; ++s)
        if ((code >> s) & 1u) g.set_edge(static_cast<PairIndex>(s), true);
    return g;
}

double EnumeratedModel::probability(const Graph& g) const {
    if (g.vertex_count() != n) throw std::invalid_argument("vertex count mismatch");
    return probabilities.at(g.edge_code());
}

std::vector<std::pair<StatValue, double>> EnumeratedModel::conditional_table(
        StatKind kind) const {
    std::map<StatValue, std::pair<double, double>> cells;  // k -> (success mass, total mass)
    std::size_t N = pair_count(n);
    for (std::uint64_t code = 0; code < probabilities.size(); ++code) {
        double p = probabilities[code];
        if (p == 0.0) continue;
        Graph g = graph_at(code);
        for (std::size_t s = 0; s < N; ++s) {
            StatValue k = conditioning_statistic(kind, g, static_cast<PairIndex>(s));
            auto& cell = cells[k];
            cell.second += p;
            if ((code >> s) & 1u) cell.first += p;
        }
    }
    std::vector<std::pair<StatValue, double>> table;
    table.reserve(cells.size());
    for (const auto& [k, cell] : cells) table.emplace_back(k, cell.first / cell.second);
    return table;
}

EnumeratedModel enumerate_distribution(const ErgmSpec& spec) {
    spec.validate();
    if (spec.n > 5)
        throw std::invalid_argument("enumeration limited to n <= 5");
    std::size_t N = pair_count(spec.n);
    std::uint64_t total = 1ULL << N;
    EnumeratedModel model;
    model.n = spec.n;
    std::vector<double> logw(total);
    double maxw = -INFINITY;
    for (std::uint64_t code = 0; code < total; ++code) {
        Graph g = model.graph_at(code);
        logw[code] = ergm_log_weight(spec, g);
        maxw = std::max(maxw, logw[code]);
    }
    double z = 0.0;
    model.probabilities.resize(total);
    for (std::uint64_t code = 0; code < total; ++code) {
        model.probabilities[code] = std::exp(logw[code] - maxw);
        z += model.probabilities[code];
    }
    for (double& p : model.probabilities) p /= z;
    return model;
}

RegimeReport check_regime(const ErgmSpec& spec) {
    spec.validate();
    std::vector<std::pair<double, int>> coeffs;  // (beta_l, e_l)
    for (const auto& term : spec.terms) coeffs.emplace_back(term.beta, term.edge_exponent());

    auto Phi = [&](double a) {
        double total = 0.0;
        for (auto [beta, e] : coeffs) total += beta * e * std::pow(a, e - 1);
        return total;
    };
    auto phi = [&](double a) { return 0.5 * (1.0 + std::tanh(Phi(a))); };

    double phi_prime_at_one = 0.0;
    for (auto [beta, e] : coeffs) phi_prime_at_one += beta * e * (e - 1);

    RegimeReport report;
    report.phi_prime_half = 0.5 * std::abs(phi_prime_at_one);

    // phi maps [0,1] into (0,1), so phi(a)-a changes sign on [0,1] and
    // bisection always lands on a root.
    auto psi = [&](double a) { return phi(a) - a; };
    double lo = 0.0, hi = 1.0;
    std::optional<double> bisect_root;
    if (psi(lo) >= 0.0 && psi(hi) <= 0.0) {
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (psi(mid) >= 0.0) lo = mid; else hi = mid;
        }
        bisect_root = 0.5 * (lo + hi);
    }

    // Fixed-point iteration from the center; when the map has several fixed
    // points this is the reported one, with multiplicity flagged below.
    std::optional<double> iter_root;
    double a = 0.5;
    for (int it = 0; it < 100000; ++it) {
        double nexta = phi(a);
        if (std::abs(nexta - a) < 1e-13) {
            iter_root = nexta;
            break;
        }
        a = nexta;
    }

    report.a_star = iter_root ? iter_root : bisect_root;

    int sign_changes = 0;
    double prev = psi(0.0);
    for (int i = 1; i <= 2000; ++i) {
        double cur = psi(static_cast<double>(i) / 2000.0);
        if ((prev > 0 && cur < 0) || (prev < 0 && cur > 0)) ++sign_changes;
        if (cur != 0.0) prev = cur;
    }
    report.multiple_fixed_points =
        sign_changes > 1
        || (iter_root && bisect_root && std::abs(*iter_root - *bisect_root) > 1e-8);

    report.satisfied = report.phi_prime_half < 1.0 && report.a_star
                       && std::abs(phi(*report.a_star) - *report.a_star) < 1e-12;
    return report;
}

}  // namespace agrasst
