#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "agrasst/estimator.hpp"
#include "agrasst/graph.hpp"
#include "agrasst/kernel.hpp"
#include "agrasst/models.hpp"

namespace agrasst {

// Supplies the conditional edge-on probability a = q(x^{(s,1)} | ...) that
// parameterizes the Stein operator
//   A^{(s)} f(x) = a f(x^{(s,1)}) + (1-a) f(x^{(s,0)}) - f(x).
class ConditionalSource {
public:
    virtual ~ConditionalSource() = default;
    virtual int vertex_count() const = 0;
    // `unseen` is set when the value came from an empty lookup cell.
    virtual double edge_probability(const Graph& x, PairIndex s, bool& unseen) const = 0;
    double edge_probability(const Graph& x, PairIndex s) const;
    virtual std::string id() const = 0;
};

// Full conditional of an explicit ERGM.
class ExactConditionalSource : public ConditionalSource {
public:
    explicit ExactConditionalSource(ErgmSpec spec);
    int vertex_count() const override { return spec_.n; }
    double edge_probability(const Graph& x, PairIndex s, bool& unseen) const override;
    std::string id() const override;

private:
    ErgmSpec spec_;
};

// Fitted lookup table (the estimated, simulation-only-generator setting).
class EstimatedConditionalSource : public ConditionalSource {
public:
    explicit EstimatedConditionalSource(ConditionalEstimate estimate);
    int vertex_count() const override { return estimate_.vertex_count(); }
    double edge_probability(const Graph& x, PairIndex s, bool& unseen) const override;
    std::string id() const override;
    const ConditionalEstimate& estimate() const { return estimate_; }

private:
    ConditionalEstimate estimate_;
};

// Fixed map k -> probability, e.g. the exact statistic-conditional table of
// an enumerated model: the infinite-sample limit of the lookup estimator.
class TableConditionalSource : public ConditionalSource {
public:
    TableConditionalSource(StatKind kind, int n, std::map<StatValue, double> table,
                           std::string label);
    static TableConditionalSource from_enumeration(const EnumeratedModel& model,
                                                   StatKind kind);
    int vertex_count() const override { return n_; }
    double edge_probability(const Graph& x, PairIndex s, bool& unseen) const override;
    std::string id() const override;

private:
    StatKind kind_;
    int n_;
    std::map<StatValue, double> table_;
    std::string label_;
};

struct SteinStatistic {
    enum class Mode { Full, Resampled };

    double value = 0.0;  // squared statistic, clamped at 0 within 1e-12
    Mode mode = Mode::Full;
    int B = 0;                       // Resampled only
    std::uint64_t seed = 0;          // Resampled only
    std::vector<PairIndex> indices;  // Resampled only, in draw order
    std::string kernel;
    std::string source;
    std::uint64_t unseen_k_hits = 0;  // distinct pairs that hit empty cells
};

// One entry of the Stein quadratic form,
//   h_x(s,s') = <A^{(s)} K(x,.), A^{(s')} K(.,x)>,
// expanded into nine kernel values through a shared memo cache.
double h_entry(const ConditionalSource& src, const KernelSpec& spec, const Graph& x,
               PairIndex s1, PairIndex s2);
double h_entry(const ConditionalSource& src, const Graph& x, PairIndex s1, PairIndex s2,
               PerturbationGram& gram);

// Deterministic full statistic: N^{-2} sum over all pairs (s,s') of h_x.
SteinStatistic gkss_full(const ConditionalSource& src, const KernelSpec& spec,
                         const Graph& x);

// gkss_full against the exact statistic-conditional operator of an enumerated
// model (small n oracle).
SteinStatistic gkss_conditional_exact(const EnumeratedModel& model, StatKind kind,
                                      const KernelSpec& spec, const Graph& x);

// Resampled statistic: B pairs drawn uniformly with replacement, value =
// B^{-2} sum over draws (b,b') of h_x(s_b, s_{b'}); deterministic given seed.
SteinStatistic agrasst_resampled(const ConditionalSource& src, const KernelSpec& spec,
                                 const Graph& x, int B, std::uint64_t seed);

}  // namespace agrasst
