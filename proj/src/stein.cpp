#include "agrasst/stein.hpp"

#include <cmath>
#include <stdexcept>

#include "agrasst/rng.hpp"

namespace agrasst {

double ConditionalSource::edge_probability(const Graph& x, PairIndex s) const {
    bool unseen = false;
    return edge_probability(x, s, unseen);
}

ExactConditionalSource::ExactConditionalSource(ErgmSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
}

double ExactConditionalSource::edge_probability(const Graph& x, PairIndex s,
                                                bool& unseen) const {
    unseen = false;
    return exact_conditional(spec_, x, s);
}

std::string ExactConditionalSource::id() const { return "exact:" + spec_.describe(); }

EstimatedConditionalSource::EstimatedConditionalSource(ConditionalEstimate estimate)
    : estimate_(std::move(estimate)) {}

double EstimatedConditionalSource::edge_probability(const Graph& x, PairIndex s,
                                                    bool& unseen) const {
    return estimate_.predict(x, s, unseen);
}

std::string EstimatedConditionalSource::id() const {
    return "estimated:" + stat_name(estimate_.kind()) + ":" + mode_name(estimate_.mode());
}

TableConditionalSource::TableConditionalSource(StatKind kind, int n,
                                               std::map<StatValue, double> table,
                                               std::string label)
    : kind_(kind), n_(n), table_(std::move(table)), label_(std::move(label)) {
    for (const auto& [k, p] : table_)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("conditional table probability out of [0,1]");
}

TableConditionalSource TableConditionalSource::from_enumeration(
        const EnumeratedModel& model, StatKind kind) {
    std::map<StatValue, double> table;
    for (const auto& [k, p] : model.conditional_table(kind)) table[k] = p;
    return TableConditionalSource(kind, model.n, std::move(table), "enumeration");
}

double TableConditionalSource::edge_probability(const Graph& x, PairIndex s,
                                                bool& unseen) const {
    if (x.vertex_count() != n_)
        throw std::invalid_argument("graph vertex count does not match conditional table");
    unseen = false;
    auto it = table_.find(conditioning_statistic(kind_, x, s));
    if (it == table_.end()) {
        unseen = true;
        return 0.0;
    }
    return it->second;
}

std::string TableConditionalSource::id() const {
    return "table:" + stat_name(kind_) + ":" + label_;
}

namespace {

double clamp_value(double v) {
    if (v < 0.0 && v > -1e-12) return 0.0;
    return v;
}

// Core quadratic form: || sum_s c_s A^{(s)} K ||^2 for per-pair coefficients
// c_s.  Each operator section is supported on x and one toggled graph, so the
// whole form reduces to a weighted combination over at most |S|+1 distinct
// graphs; for WL that combination lives in explicit feature space, for
// GaussianEdge it runs through the pairwise kernel.
struct WeightedForm {
    std::vector<Graph> graphs;    // 0 = x, then one per distinct pair
    std::vector<double> weights;  // kernel-section coefficients
    std::uint64_t unseen_hits = 0;

    WeightedForm(const ConditionalSource& src, const Graph& x,
                 const std::vector<std::pair<PairIndex, double>>& coeffs) {
        graphs.push_back(x);
        weights.push_back(0.0);
        for (auto [s, c] : coeffs) {
            bool unseen = false;
            double a = src.edge_probability(x, s, unseen);
            if (unseen) ++unseen_hits;
            if (x.edge_bit(s)) {
                // x^{(s,1)} = x: section collapses to (1-a)(K(x^{(s,0)}) - K(x)).
                graphs.push_back(x.with_edge(s, false));
                weights.push_back(c * (1.0 - a));
                weights[0] -= c * (1.0 - a);
            } else {
                graphs.push_back(x.with_edge(s, true));
                weights.push_back(c * a);
                weights[0] -= c * a;
            }
        }
    }

    double norm_sq(const KernelSpec& spec) const {
        if (spec.kind == KernelSpec::Kind::WlSubtree) {
            WlFeatures features(spec.height, graphs);
            return features.weighted_norm_sq(weights, spec.normalize);
        }
        double s2 = spec.resolve_sigma_sq(graphs.front().pair_count());
        double total = 0.0;
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            if (weights[i] == 0.0) continue;
            total += weights[i] * weights[i];  // K(g,g) = 1
            for (std::size_t j = i + 1; j < graphs.size(); ++j) {
                if (weights[j] == 0.0) continue;
                double k = std::exp(
                    -static_cast<double>(graphs[i].hamming_distance(graphs[j])) / s2);
                total += 2.0 * weights[i] * weights[j] * k;
            }
        }
        return total;
    }
};

void check_inputs(const ConditionalSource& src, const KernelSpec& spec, const Graph& x) {
    spec.validate();
    if (src.vertex_count() != x.vertex_count())
        throw std::invalid_argument("conditional source does not match graph size");
}

}  // namespace

double h_entry(const ConditionalSource& src, const Graph& x, PairIndex s1, PairIndex s2,
               PerturbationGram& gram) {
    double a1 = src.edge_probability(x, s1);
    double a2 = src.edge_probability(x, s2);
    int row[3] = {gram.toggled_id(s1, true), gram.toggled_id(s1, false), gram.base_id()};
    int col[3] = {gram.toggled_id(s2, true), gram.toggled_id(s2, false), gram.base_id()};
    double cr[3] = {a1, 1.0 - a1, -1.0};
    double cc[3] = {a2, 1.0 - a2, -1.0};
    double total = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) total += cr[r] * cc[c] * gram.value(row[r], col[c]);
    return total;
}

double h_entry(const ConditionalSource& src, const KernelSpec& spec, const Graph& x,
               PairIndex s1, PairIndex s2) {
    check_inputs(src, spec, x);
    PerturbationGram gram(spec, x, {s1, s2});
    return h_entry(src, x, s1, s2, gram);
}

SteinStatistic gkss_full(const ConditionalSource& src, const KernelSpec& spec,
                         const Graph& x) {
    check_inputs(src, spec, x);
    std::size_t N = x.pair_count();
    if (N == 0) throw std::invalid_argument("graph has no vertex pairs");
    std::vector<std::pair<PairIndex, double>> coeffs;
    coeffs.reserve(N);
    double c = 1.0 / static_cast<double>(N);
    for (std::size_t s = 0; s < N; ++s) coeffs.emplace_back(static_cast<PairIndex>(s), c);

    WeightedForm form(src, x, coeffs);
    SteinStatistic stat;
    stat.value = clamp_value(form.norm_sq(spec));
    stat.mode = SteinStatistic::Mode::Full;
    stat.kernel = spec.to_string();
    stat.source = src.id();
    stat.unseen_k_hits = form.unseen_hits;
    return stat;
}

SteinStatistic gkss_conditional_exact(const EnumeratedModel& model, StatKind kind,
                                      const KernelSpec& spec, const Graph& x) {
    TableConditionalSource src = TableConditionalSource::from_enumeration(model, kind);
    return gkss_full(src, spec, x);
}

SteinStatistic agrasst_resampled(const ConditionalSource& src, const KernelSpec& spec,
                                 const Graph& x, int B, std::uint64_t seed) {
    check_inputs(src, spec, x);
    if (B < 1) throw std::invalid_argument("resampling size B must be at least 1");
    std::size_t N = x.pair_count();
    if (N == 0) throw std::invalid_argument("graph has no vertex pairs");

    Rng rng(seed);
    std::vector<PairIndex> indices(B);
    std::map<PairIndex, int> multiplicity;
    for (int b = 0; b < B; ++b) {
        indices[b] = static_cast<PairIndex>(rng.below(N));
        ++multiplicity[indices[b]];
    }
    std::vector<std::pair<PairIndex, double>> coeffs;
    coeffs.reserve(multiplicity.size());
    for (auto [s, count] : multiplicity)
        coeffs.emplace_back(s, static_cast<double>(count) / static_cast<double>(B));

    WeightedForm form(src, x, coeffs);
    SteinStatistic stat;
    stat.value = clamp_value(form.norm_sq(spec));
    stat.mode = SteinStatistic::Mode::Resampled;
    stat.B = B;
    stat.seed = seed;
    stat.indices = std::move(indices);
    stat.kernel = spec.to_string();
    stat.source = src.id();
    stat.unseen_k_hits = form.unseen_hits;
    return stat;
}

}  // namespace agrasst
