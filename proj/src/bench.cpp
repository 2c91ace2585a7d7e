#include "agrasst/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "agrasst/rng.hpp"
#include "agrasst/threads.hpp"

namespace agrasst {

BenchConfig BenchConfig::e2st_default(int n) {
    BenchConfig config;
    config.null_spec = ErgmSpec::e2st(n);
    return config;
}

std::string kind_label(StatKind kind, EstimateMode mode) {
    if (mode == EstimateMode::Raw) return stat_name(kind);
    if (kind == StatKind::SumDeg) return "cumdeg";
    return "cum" + stat_name(kind);
}

namespace {

ErgmSpec shift_beta2(const ErgmSpec& spec, double beta2) {
    ErgmSpec out = spec;
    for (auto& term : out.terms) {
        if (term.kind == TermKind::TwoStars) {
            term.beta += beta2;
            return out;
        }
    }
    throw std::invalid_argument("null model has no two-star term to perturb");
}

// One experiment cell: `trials` independent observed draws from the alternative,
// each tested against the null generator.  Seed streams are disjoint per
// cell so cells can be reordered freely.
PowerRow run_cell(const BenchConfig& config, double beta2, StatKind kind,
                  EstimateMode mode, int B, std::uint64_t stream_base) {
    if (config.trials < 1) throw std::invalid_argument("trials must be at least 1");
    ErgmSpec alternative = shift_beta2(config.null_spec, beta2);

    std::vector<char> rejected(config.trials, 0);
    std::vector<double> elapsed(config.trials, 0.0);
    parallel_for(config.trials, config.threads, [&](std::size_t t) {
        auto start = std::chrono::steady_clock::now();
        std::uint64_t base = stream_base + 3 * t;
        Graph x = GlauberSource(alternative, derive_seed(config.seed, base)).next();
        GlauberSource generator(config.null_spec, derive_seed(config.seed, base + 1));
        AgrasstConfig test;
        test.kind = kind;
        test.mode = mode;
        test.kernel = config.kernel;
        test.B = B;
        test.L = config.L;
        test.m = config.m;
        test.alpha = config.alpha;
        test.seed = derive_seed(config.seed, base + 2);
        test.threads = 1;
        rejected[t] = run_agrasst_test(x, generator, test).reject ? 1 : 0;
        elapsed[t] = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    });

    PowerRow row;
    row.beta2 = beta2;
    row.kind = kind_label(kind, mode);
    row.B = B == 0 ? static_cast<int>(pair_count(config.null_spec.n)) : B;
    row.trials = config.trials;
    int rejects = 0;
    double total_ms = 0.0;
    for (int t = 0; t < config.trials; ++t) {
        rejects += rejected[t];
        total_ms += elapsed[t];
    }
    row.rejection_rate = static_cast<double>(rejects) / config.trials;
    row.std_error = std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate)
                              / config.trials);
    row.runtime_ms = total_ms / config.trials;
    return row;
}

std::uint64_t cell_stride(const BenchConfig& config) {
    return static_cast<std::uint64_t>(config.trials) * 3;
}

}  // namespace

std::vector<PowerRow> power_experiment(const BenchConfig& config,
                                       const std::vector<double>& beta2_perturbations) {
    std::vector<PowerRow> rows;
    for (std::size_t i = 0; i < beta2_perturbations.size(); ++i)
        rows.push_back(run_cell(config, beta2_perturbations[i], config.kind, config.mode,
                                config.B, i * cell_stride(config)));
    return rows;
}

std::vector<PowerRow> estimator_comparison(
        const BenchConfig& config,
        const std::vector<std::pair<StatKind, EstimateMode>>& kinds,
        const std::vector<double>& beta2_perturbations) {
    std::vector<PowerRow> rows;
    std::uint64_t cell = 0;
    for (const auto& [kind, mode] : kinds)
        for (double beta2 : beta2_perturbations)
            rows.push_back(run_cell(config, beta2, kind, mode, config.B,
                                    cell++ * cell_stride(config)));
    return rows;
}

SweepResult resampling_sweep(const BenchConfig& config, const std::vector<int>& B_values,
                             double beta2_alternative) {
    auto N = static_cast<int>(pair_count(config.null_spec.n));
    SweepResult result;
    std::uint64_t cell = 0;
    for (int B : B_values) {
        int effective = (B <= 0 || B >= N) ? 0 : B;  // 0 = full statistic
        result.rows.push_back(run_cell(config, beta2_alternative, config.kind, config.mode,
                                       effective, cell++ * cell_stride(config)));
    }
    std::sort(result.rows.begin(), result.rows.end(),
              [](const PowerRow& a, const PowerRow& b) { return a.B < b.B; });
    result.monotone_within_slack = true;
    for (std::size_t i = 1; i < result.rows.size(); ++i)
        if (result.rows[i].rejection_rate < result.rows[i - 1].rejection_rate - 0.05)
            result.monotone_within_slack = false;
    return result;
}

std::string power_csv(const std::vector<PowerRow>& rows) {
    std::string out = "beta2,kind,B,trials,rejection_rate,stderr,runtime_ms\n";
    char buf[160];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%g,%s,%d,%d,%.4f,%.4f,%.3f\n", row.beta2,
                      row.kind.c_str(), row.B, row.trials, row.rejection_rate,
                      row.std_error, row.runtime_ms);
        out += buf;
    }
    return out;
}

void write_power_csv(const std::string& path, const std::vector<PowerRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    out << power_csv(rows);
}

}  // namespace agrasst
