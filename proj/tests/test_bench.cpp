#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "agrasst/bench.hpp"

using namespace agrasst;

namespace {

BenchConfig tiny() {
    BenchConfig config = BenchConfig::e2st_default(6);
    config.trials = 4;
    config.L = 60;
    config.m = 30;
    config.B = 20;
    config.seed = 11;
    return config;
}

}  // namespace

TEST_CASE("statistic labels fold the estimation mode in") {
    CHECK(kind_label(StatKind::Edges, EstimateMode::Raw) == "edges");
    CHECK(kind_label(StatKind::SumDeg, EstimateMode::Raw) == "sumdeg");
    CHECK(kind_label(StatKind::SumDeg, EstimateMode::Cumulative) == "cumdeg");
    CHECK(kind_label(StatKind::Tri, EstimateMode::Cumulative) == "cumtri");
}

TEST_CASE("default experiment config matches the synthetic null") {
    BenchConfig config = BenchConfig::e2st_default();
    CHECK(config.null_spec.n == 20);
    REQUIRE(config.null_spec.terms.size() == 3);
    CHECK(config.null_spec.terms[0].beta == doctest::Approx(-2.0));
    CHECK(config.null_spec.terms[1].beta == doctest::Approx(0.0));
    CHECK(config.null_spec.terms[2].beta == doctest::Approx(0.01));
    CHECK(config.B == 200);
    CHECK(config.L == 1000);
    CHECK(config.m == 200);
}

TEST_CASE("power rows carry the experiment dimensions") {
    BenchConfig config = tiny();
    auto rows = power_experiment(config, {0.0, 1.0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].beta2 == doctest::Approx(0.0));
    CHECK(rows[1].beta2 == doctest::Approx(1.0));
    for (const PowerRow& row : rows) {
        CHECK(row.kind == "edges");
        CHECK(row.B == 20);
        CHECK(row.trials == 4);
        CHECK(row.rejection_rate >= 0.0);
        CHECK(row.rejection_rate <= 1.0);
        double expected_se =
            std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) / row.trials);
        CHECK(row.std_error == doctest::Approx(expected_se).epsilon(1e-12));
        CHECK(row.runtime_ms > 0.0);
    }
    // a strong positive two-star shift is essentially always rejected
    CHECK(rows[1].rejection_rate == doctest::Approx(1.0));
}

TEST_CASE("statistical columns are deterministic given the seed") {
    auto a = power_experiment(tiny(), {0.0, 0.6});
    auto b = power_experiment(tiny(), {0.0, 0.6});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].rejection_rate == b[i].rejection_rate);
        CHECK(a[i].std_error == b[i].std_error);
    }
}

TEST_CASE("power requires a model with a two-star term") {
    BenchConfig config = tiny();
    config.null_spec = ErgmSpec::edges_only(6, -2.0);
    CHECK_THROWS(power_experiment(config, {0.2}));
    config = tiny();
    config.trials = 0;
    CHECK_THROWS(power_experiment(config, {0.2}));
}

TEST_CASE("estimator comparison crosses kinds with shifts") {
    BenchConfig config = tiny();
    config.trials = 2;
    auto rows = estimator_comparison(
        config,
        {{StatKind::Edges, EstimateMode::Raw}, {StatKind::SumDeg, EstimateMode::Cumulative}},
        {0.8});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].kind == "edges");
    CHECK(rows[1].kind == "cumdeg");
    CHECK(rows[0].beta2 == doctest::Approx(0.8));
}

TEST_CASE("resampling sweep folds full-statistic sentinels to the pair count") {
    BenchConfig config = tiny();
    config.trials = 2;
    SweepResult sweep = resampling_sweep(config, {100, 5, 0}, 1.0);
    REQUIRE(sweep.rows.size() == 3);
    // sorted by effective B; 0 and 100 both collapse to the full sum at N=15
    CHECK(sweep.rows[0].B == 5);
    CHECK(sweep.rows[1].B == 15);
    CHECK(sweep.rows[2].B == 15);
}

TEST_CASE("csv output has the pinned header and parses back") {
    BenchConfig config = tiny();
    config.trials = 2;
    auto rows = power_experiment(config, {0.0});
    std::string csv = power_csv(rows);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "beta2,kind,B,trials,rejection_rate,stderr,runtime_ms");
    std::string row;
    std::getline(lines, row);
    CHECK(row.substr(0, 11) == "0,edges,20,");

    write_power_csv("/tmp/agrasst_power.csv", rows);
    std::ifstream in("/tmp/agrasst_power.csv");
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == csv);
}
