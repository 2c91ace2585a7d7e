#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agrasst/estimator.hpp"
#include "agrasst/graph.hpp"
#include "agrasst/kernel.hpp"
#include "agrasst/models.hpp"
#include "json.hpp"

namespace agrasst {

// Monte-Carlo test outcome.  gamma is the empirical (1-alpha) quantile of the
// null statistics; the test rejects when tau > gamma.  Two-sided methods also
// carry a lower band edge.
struct TestReport {
    std::string method;
    double tau = 0.0;
    std::vector<double> null_taus;  // sorted ascending
    double gamma = 0.0;
    double alpha = 0.0;
    double p_value = 0.0;
    bool reject = false;
    std::optional<double> gamma_lower;

    std::map<std::string, std::uint64_t> seeds;
    std::uint64_t unseen_k_hits = 0;       // while scoring the observed graph
    std::uint64_t null_unseen_k_hits = 0;  // summed over null replicas
    int degenerate_fits = 0;               // parametric baseline only

    nlohmann::json to_json() const;
    std::string summary() const;
};

struct AgrasstConfig {
    StatKind kind = StatKind::Edges;
    EstimateMode mode = EstimateMode::Raw;
    KernelSpec kernel = KernelSpec::wl(3);
    int B = 200;  // resampled pairs; 0 = deterministic full statistic
    std::size_t L = 1000;
    std::size_t m = 200;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Fits the conditional estimate on L generator samples, scores the observed
// graph, simulates the null with m fresh generator samples (independent
// resampling seeds), and compares against the empirical quantile.
TestReport run_agrasst_test(const Graph& x, GraphSource& generator,
                            const AgrasstConfig& config);

struct BatchReport {
    std::size_t index = 0;
    std::size_t first_sample = 0;  // offset of the batch in the generator stream
    std::vector<Graph> samples;
    double p_value = 0.0;
    bool accepted = false;
    double threshold = 0.0;

    nlohmann::json to_json() const;  // omits the samples themselves
};

// Scores consecutive generator batches against the observed graph; a batch is
// accepted when its p-value reaches the threshold.  Stops at the first
// accepted batch, at max_batches, or when a finite source runs dry.
std::vector<BatchReport> select_batches(const Graph& x, GraphSource& generator,
                                        std::size_t batch_size, std::size_t max_batches,
                                        double threshold, const AgrasstConfig& config);

// Degree-variance two-sided Monte-Carlo test.
TestReport baseline_deg(const Graph& x, GraphSource& generator, std::size_t m,
                        double alpha, std::uint64_t seed);

// Total variation between the observed normalized degree histogram and the
// mean histogram of L generator samples; one-sided.
TestReport baseline_tv_deg(const Graph& x, GraphSource& generator, std::size_t L,
                           std::size_t m, double alpha, std::uint64_t seed);

// Mahalanobis distance of the degree histogram from generator moments
// (ridge 1e-6); one-sided.
TestReport baseline_mddeg(const Graph& x, GraphSource& generator, std::size_t L,
                          std::size_t m, double alpha, std::uint64_t seed);

struct MpleResult {
    std::vector<double> beta;
    bool degenerate = false;  // clamped, singular, or not converged
    int iterations = 0;
};

// Maximum pseudolikelihood fit: logistic regression of edge indicators on
// change statistics, damped Newton with coefficient clamping at +/-50.
MpleResult fit_mple(const Graph& g, const std::vector<TermKind>& terms);

// Mahalanobis distance of the observed MPLE coefficients from generator
// coefficient moments; one-sided.
TestReport baseline_param(const Graph& x, GraphSource& generator, std::size_t L,
                          std::size_t m, double alpha, std::uint64_t seed,
                          const std::vector<TermKind>& terms);

}  // namespace agrasst
