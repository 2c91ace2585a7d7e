#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "agrasst/estimator.hpp"
#include "agrasst/models.hpp"
#include "agrasst/testing.hpp"

namespace agrasst {

// One experiment cell: rejection rate of a test over repeated trials at one
// alternative, together with binomial standard error and mean per-trial
// runtime.  Statistical columns are deterministic given the seed; runtime is
// wall clock.
struct PowerRow {
    double beta2 = 0.0;
    std::string kind;  // statistic label, e.g. "edges", "cumdeg"
    int B = 0;
    int trials = 0;
    double rejection_rate = 0.0;
    double std_error = 0.0;
    double runtime_ms = 0.0;
};

struct BenchConfig {
    ErgmSpec null_spec;  // generator under assessment (also the null sampler)
    StatKind kind = StatKind::Edges;
    EstimateMode mode = EstimateMode::Raw;
    KernelSpec kernel = KernelSpec::wl(3);
    int B = 200;
    std::size_t L = 1000;
    std::size_t m = 200;
    double alpha = 0.05;
    int trials = 100;
    std::uint64_t seed = 0;
    int threads = 1;

    static BenchConfig e2st_default(int n = 20);
};

// For each perturbation: draws the observed graph from the null model with
// its two-star coefficient shifted by beta2, then tests it against the
// unperturbed generator.  beta2 = 0 rows measure Type-I error.
std::vector<PowerRow> power_experiment(const BenchConfig& config,
                                       const std::vector<double>& beta2_perturbations);

// Same harness across statistic kinds/modes.
std::vector<PowerRow> estimator_comparison(
    const BenchConfig& config,
    const std::vector<std::pair<StatKind, EstimateMode>>& kinds,
    const std::vector<double>& beta2_perturbations);

struct SweepResult {
    std::vector<PowerRow> rows;
    bool monotone_within_slack = false;  // power non-decreasing in B, 0.05 slack
};

// Power at a fixed alternative across resampling sizes.  A B value of 0 (or
// >= the pair count) runs the deterministic full statistic and is reported
// with B = pair count.
SweepResult resampling_sweep(const BenchConfig& config, const std::vector<int>& B_values,
                             double beta2_alternative);

std::string power_csv(const std::vector<PowerRow>& rows);
void write_power_csv(const std::string& path, const std::vector<PowerRow>& rows);

std::string kind_label(StatKind kind, EstimateMode mode);

}  // namespace agrasst
