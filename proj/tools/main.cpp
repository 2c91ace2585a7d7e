// Command-line front end: sample generators into archives, fit conditional
// edge-probability tables, and run the Stein-statistic test plus reference
// tests against an observed graph.
//
// Exit codes: 0 = success / not rejected, 2 = rejected, 1 = error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "agrasst/archive.hpp"
#include "agrasst/bench.hpp"
#include "agrasst/edgelist.hpp"
#include "agrasst/estimator.hpp"
#include "agrasst/graph.hpp"
#include "agrasst/kernel.hpp"
#include "agrasst/models.hpp"
#include "agrasst/rng.hpp"
#include "agrasst/testing.hpp"

namespace {

using namespace agrasst;

// RNG stream tag for the generator chain itself, far away from the
// per-replica streams the test harness derives (0, 1, 2, ...).
constexpr std::uint64_t kGeneratorStream = 0x67656e65726174ULL;

struct Options {
    std::string graph_path;
    std::string archive_path;
    std::string model_desc;
    std::string out_path;
    std::string config_path;
    std::string stat = "edges";
    std::string kernel = "wl:3";
    std::string method = "deg";
    std::string format = "dir";
    std::size_t count = 100;
    std::size_t L = 1000;
    int B = 200;
    std::size_t m = 200;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int threads = 1;
    std::size_t batch_size = 10;
    std::size_t max_batches = 20;
    double threshold = 0.05;
    int trials = 100;
    std::vector<double> beta2;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_number(const std::string& token, const std::string& what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad " + what + ": '" + token + "'");
    }
    if (used != token.size())
        throw std::invalid_argument("bad " + what + ": '" + token + "'");
    return value;
}

int parse_count(const std::string& token, const std::string& what) {
    double value = parse_number(token, what);
    auto rounded = static_cast<int>(value);
    if (value != rounded || rounded < 1)
        throw std::invalid_argument(what + " must be a positive integer, got '" + token + "'");
    return rounded;
}

// Built-in generator families:
//   er:<n>:<p>                       independent edges
//   edges:<n>:<beta1>                edge-count-only model, Glauber sampled
//   e2st:<n>[:<b1>:<b2>:<b3>]        edges + two-stars + triangles
struct ParsedModel {
    bool bernoulli = false;
    int n = 0;
    double p = 0.0;
    ErgmSpec spec;
    std::string canonical;
};

ParsedModel parse_model(const std::string& desc) {
    auto parts = split(desc, ':');
    ParsedModel out;
    out.canonical = desc;
    const std::string& family = parts[0];
    if (family == "er") {
        if (parts.size() != 3)
            throw std::invalid_argument("er model needs er:<n>:<p>, got '" + desc + "'");
        out.bernoulli = true;
        out.n = parse_count(parts[1], "vertex count");
        out.p = parse_number(parts[2], "edge probability");
        if (!(out.p >= 0.0 && out.p <= 1.0))
            throw std::invalid_argument("edge probability must be in [0,1]");
        return out;
    }
    if (family == "edges") {
        if (parts.size() != 3)
            throw std::invalid_argument("edges model needs edges:<n>:<beta1>, got '" + desc + "'");
        out.spec = ErgmSpec::edges_only(parse_count(parts[1], "vertex count"),
                                        parse_number(parts[2], "coefficient"));
        out.n = out.spec.n;
        return out;
    }
    if (family == "e2st") {
        if (parts.size() < 2 || parts.size() > 5)
            throw std::invalid_argument("e2st model needs e2st:<n>[:<b1>:<b2>:<b3>], got '"
                                        + desc + "'");
        int n = parse_count(parts[1], "vertex count");
        double b1 = parts.size() > 2 ? parse_number(parts[2], "coefficient") : -2.0;
        double b2 = parts.size() > 3 ? parse_number(parts[3], "coefficient") : 0.0;
        double b3 = parts.size() > 4 ? parse_number(parts[4], "coefficient") : 0.01;
        out.spec = ErgmSpec::e2st(n, b1, b2, b3);
        out.n = n;
        return out;
    }
    throw std::invalid_argument("unknown model family '" + family
                                + "' (expected er, edges, or e2st)");
}

std::unique_ptr<GraphSource> make_source(const ParsedModel& model, std::uint64_t seed) {
    if (model.bernoulli) return std::make_unique<BernoulliSource>(model.n, model.p, seed);
    return std::make_unique<GlauberSource>(model.spec, seed);
}

// Generator under assessment: a sample archive (external generators) or a
// built-in model, never both.
std::unique_ptr<GraphSource> resolve_generator(const Options& opt) {
    bool has_archive = !opt.archive_path.empty();
    bool has_model = !opt.model_desc.empty();
    if (has_archive == has_model)
        throw std::invalid_argument("provide exactly one of --archive or --model");
    if (has_archive) {
        Archive archive = read_archive(opt.archive_path);
        return std::make_unique<VectorSource>(std::move(archive.graphs));
    }
    return make_source(parse_model(opt.model_desc), derive_seed(opt.seed, kGeneratorStream));
}

std::pair<StatKind, EstimateMode> parse_stat(const std::string& name) {
    if (name == "cumdeg") return {StatKind::SumDeg, EstimateMode::Cumulative};
    return {stat_from_name(name), EstimateMode::Raw};
}

AgrasstConfig test_config(const Options& opt) {
    AgrasstConfig config;
    auto [kind, mode] = parse_stat(opt.stat);
    config.kind = kind;
    config.mode = mode;
    config.kernel = KernelSpec::parse(opt.kernel);
    config.B = opt.B;
    config.L = opt.L;
    config.m = opt.m;
    config.alpha = opt.alpha;
    config.seed = opt.seed;
    config.threads = opt.threads;
    return config;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- commands

int run_sample(const Options& opt) {
    if (opt.model_desc.empty()) throw std::invalid_argument("sample requires --model");
    if (opt.out_path.empty()) throw std::invalid_argument("sample requires --out");
    if (opt.count < 1) throw std::invalid_argument("--count must be at least 1");
    ParsedModel model = parse_model(opt.model_desc);
    std::vector<Graph> graphs = make_source(model, opt.seed)->take(opt.count);
    if (opt.format == "file") {
        write_concatenated_archive(opt.out_path, graphs);
    } else if (opt.format == "dir") {
        ArchiveManifest manifest;
        manifest.n = model.n;
        manifest.count = graphs.size();
        manifest.generator = model.canonical;
        manifest.seed = opt.seed;
        write_archive(opt.out_path, graphs, manifest);
    } else {
        throw std::invalid_argument("--format must be dir or file");
    }
    std::printf("wrote %zu graphs on %d vertices to %s\n", graphs.size(), model.n,
                opt.out_path.c_str());
    return 0;
}

int run_estimate(const Options& opt) {
    if (opt.archive_path.empty()) throw std::invalid_argument("estimate requires --archive");
    auto [kind, mode] = parse_stat(opt.stat);
    Archive archive = read_archive(opt.archive_path);
    ConditionalEstimate estimate = ConditionalEstimate::fit(archive.graphs, kind, mode);
    if (opt.out_path.empty()) {
        std::cout << estimate.to_json().dump(2) << '\n';
    } else {
        estimate.save(opt.out_path);
        std::printf("fitted %s/%s table: %zu cells from %zu samples -> %s\n",
                    stat_name(kind).c_str(), mode_name(mode).c_str(),
                    estimate.table().size(), archive.graphs.size(), opt.out_path.c_str());
    }
    return 0;
}

int run_test(const Options& opt) {
    if (opt.graph_path.empty()) throw std::invalid_argument("test requires --graph");
    Graph x = load_edge_list(opt.graph_path);
    auto generator = resolve_generator(opt);
    TestReport report = run_agrasst_test(x, *generator, test_config(opt));
    std::printf("%s\n", report.summary().c_str());
    if (!opt.out_path.empty()) write_json(opt.out_path, report.to_json());
    return report.reject ? 2 : 0;
}

int run_batch(const Options& opt) {
    if (opt.graph_path.empty()) throw std::invalid_argument("batch requires --graph");
    Graph x = load_edge_list(opt.graph_path);
    auto generator = resolve_generator(opt);
    std::vector<BatchReport> reports = select_batches(
        x, *generator, opt.batch_size, opt.max_batches, opt.threshold, test_config(opt));

    std::ofstream file;
    if (!opt.out_path.empty()) {
        file.open(opt.out_path);
        if (!file) throw std::runtime_error("cannot write output file: " + opt.out_path);
    }
    std::ostream& out = opt.out_path.empty() ? std::cout : file;
    bool accepted = false;
    for (const BatchReport& report : reports) {
        out << report.to_json().dump() << '\n';
        accepted = accepted || report.accepted;
    }
    if (reports.empty()) std::fprintf(stderr, "no batches scored (source exhausted?)\n");
    return accepted ? 0 : 2;
}

int run_power(const Options& opt) {
    ParsedModel model = parse_model(opt.model_desc.empty() ? "e2st:20" : opt.model_desc);
    if (model.bernoulli)
        throw std::invalid_argument("power requires an ERGM null model (edges or e2st)");
    BenchConfig bench;
    bench.null_spec = model.spec;
    auto [kind, mode] = parse_stat(opt.stat);
    bench.kind = kind;
    bench.mode = mode;
    bench.kernel = KernelSpec::parse(opt.kernel);
    bench.B = opt.B;
    bench.L = opt.L;
    bench.m = opt.m;
    bench.alpha = opt.alpha;
    bench.trials = opt.trials;
    bench.seed = opt.seed;
    bench.threads = opt.threads;
    std::vector<double> beta2 =
        opt.beta2.empty() ? std::vector<double>{-0.6, -0.4, -0.2, 0.0, 0.2} : opt.beta2;
    std::vector<PowerRow> rows = power_experiment(bench, beta2);
    if (opt.out_path.empty())
        std::cout << power_csv(rows);
    else
        write_power_csv(opt.out_path, rows);
    return 0;
}

int run_baseline(const Options& opt) {
    if (opt.graph_path.empty()) throw std::invalid_argument("baseline requires --graph");
    Graph x = load_edge_list(opt.graph_path);
    auto generator = resolve_generator(opt);
    TestReport report;
    if (opt.method == "deg") {
        report = baseline_deg(x, *generator, opt.m, opt.alpha, opt.seed);
    } else if (opt.method == "tvdeg") {
        report = baseline_tv_deg(x, *generator, opt.L, opt.m, opt.alpha, opt.seed);
    } else if (opt.method == "mddeg") {
        report = baseline_mddeg(x, *generator, opt.L, opt.m, opt.alpha, opt.seed);
    } else if (opt.method == "param") {
        std::vector<TermKind> terms;
        if (!opt.model_desc.empty()) {
            ParsedModel model = parse_model(opt.model_desc);
            if (!model.bernoulli)
                for (const ErgmTerm& term : model.spec.terms) terms.push_back(term.kind);
        }
        if (terms.empty()) terms = {TermKind::Edges, TermKind::TwoStars, TermKind::Triangles};
        report = baseline_param(x, *generator, opt.L, opt.m, opt.alpha, opt.seed, terms);
    } else {
        throw std::invalid_argument("unknown method '" + opt.method
                                    + "' (expected deg, tvdeg, mddeg, or param)");
    }
    std::printf("%s\n", report.summary().c_str());
    if (!opt.out_path.empty()) write_json(opt.out_path, report.to_json());
    return report.reject ? 2 : 0;
}

// ------------------------------------------------------------ config file

std::optional<std::string> find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config") {
            if (i + 1 >= argc) throw std::invalid_argument("--config needs a file path");
            return std::string(argv[i + 1]);
        }
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return std::nullopt;
}

// The config file mirrors the flags in JSON; it is applied before parsing so
// anything passed explicitly on the command line wins.
void apply_config(const std::string& path, Options& opt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::runtime_error("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "graph") opt.graph_path = value.get<std::string>();
        else if (key == "archive") opt.archive_path = value.get<std::string>();
        else if (key == "model") opt.model_desc = value.get<std::string>();
        else if (key == "out") opt.out_path = value.get<std::string>();
        else if (key == "stat") opt.stat = value.get<std::string>();
        else if (key == "kernel") opt.kernel = value.get<std::string>();
        else if (key == "method") opt.method = value.get<std::string>();
        else if (key == "format") opt.format = value.get<std::string>();
        else if (key == "count") opt.count = value.get<std::size_t>();
        else if (key == "L") opt.L = value.get<std::size_t>();
        else if (key == "B") opt.B = value.get<int>();
        else if (key == "m") opt.m = value.get<std::size_t>();
        else if (key == "alpha") opt.alpha = value.get<double>();
        else if (key == "seed") opt.seed = value.get<std::uint64_t>();
        else if (key == "threads") opt.threads = value.get<int>();
        else if (key == "batch-size") opt.batch_size = value.get<std::size_t>();
        else if (key == "max-batches") opt.max_batches = value.get<std::size_t>();
        else if (key == "threshold") opt.threshold = value.get<double>();
        else if (key == "trials") opt.trials = value.get<int>();
        else if (key == "beta2") opt.beta2 = value.get<std::vector<double>>();
        else throw std::runtime_error("unknown config key: " + key);
    }
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    try {
        if (auto config = find_config_path(argc, argv)) apply_config(*config, opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    CLI::App app{"Stein-statistic consistency tests for graph generators"};
    app.require_subcommand(1);

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path,
                        "JSON file mirroring the flags; explicit flags win");
    };
    auto add_out = [&](CLI::App* cmd, const char* help) {
        cmd->add_option("--out", opt.out_path, help);
    };
    auto add_generator = [&](CLI::App* cmd) {
        cmd->add_option("--archive", opt.archive_path,
                        "sample archive directory or concatenated file");
        cmd->add_option("--model", opt.model_desc,
                        "built-in generator: er:<n>:<p> | edges:<n>:<b1> | "
                        "e2st:<n>[:<b1>:<b2>:<b3>]");
    };
    auto add_stat_kernel = [&](CLI::App* cmd) {
        cmd->add_option("--stat", opt.stat,
                        "conditioning statistic: edges|sumdeg|cumdeg|bideg|d3|tri")
            ->capture_default_str();
        cmd->add_option("--kernel", opt.kernel,
                        "graph kernel: wl:<height> | gauss:auto | gauss:<sigma^2>")
            ->capture_default_str();
    };
    auto add_mc = [&](CLI::App* cmd, bool with_B) {
        cmd->add_option("-L,--samples", opt.L, "generator samples used to fit the table")
            ->capture_default_str();
        if (with_B)
            cmd->add_option("-B,--resample", opt.B,
                            "resampled vertex pairs per statistic (0 = full sum)")
                ->capture_default_str();
        cmd->add_option("-m,--null-samples", opt.m, "fresh samples for the null quantile")
            ->capture_default_str();
        cmd->add_option("--alpha", opt.alpha, "test level")->capture_default_str();
    };
    auto add_seed_threads = [&](CLI::App* cmd) {
        cmd->add_option("--seed", opt.seed, "master seed; all streams derive from it")
            ->capture_default_str();
        cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)")
            ->capture_default_str();
    };

    CLI::App* sample = app.add_subcommand("sample", "draw graphs from a model into an archive");
    sample->add_option("--model", opt.model_desc,
                       "er:<n>:<p> | edges:<n>:<b1> | e2st:<n>[:<b1>:<b2>:<b3>]");
    sample->add_option("--count", opt.count, "number of graphs")->capture_default_str();
    sample->add_option("--format", opt.format, "archive layout: dir | file")
        ->capture_default_str();
    add_out(sample, "archive directory (or file with --format file)");
    add_seed_threads(sample);
    add_config(sample);

    CLI::App* estimate =
        app.add_subcommand("estimate", "fit the conditional edge-probability table");
    estimate->add_option("--archive", opt.archive_path, "sample archive to fit from");
    add_stat_kernel(estimate);
    add_out(estimate, "output JSON path (default: print to stdout)");
    add_config(estimate);

    CLI::App* test =
        app.add_subcommand("test", "test an observed graph against a generator");
    test->add_option("--graph", opt.graph_path, "observed graph edge list");
    add_generator(test);
    add_stat_kernel(test);
    add_mc(test, true);
    add_seed_threads(test);
    add_out(test, "write the full report as JSON");
    add_config(test);

    CLI::App* batch = app.add_subcommand(
        "batch", "score generator batches until one is consistent with the graph");
    batch->add_option("--graph", opt.graph_path, "observed graph edge list");
    add_generator(batch);
    add_stat_kernel(batch);
    add_mc(batch, true);
    batch->add_option("--batch-size", opt.batch_size, "samples per batch")
        ->capture_default_str();
    batch->add_option("--max-batches", opt.max_batches, "give up after this many batches")
        ->capture_default_str();
    batch->add_option("--threshold", opt.threshold, "accept when batch p-value >= this")
        ->capture_default_str();
    add_seed_threads(batch);
    add_out(batch, "write batch reports as JSON lines");
    add_config(batch);

    CLI::App* power =
        app.add_subcommand("power", "rejection rates across two-star coefficient shifts");
    power->add_option("--model", opt.model_desc,
                      "ERGM null model (default e2st:20, i.e. beta=(-2,0,0.01))");
    power->add_option("--beta2", opt.beta2,
                      "two-star coefficient shifts (default -0.6 -0.4 -0.2 0 0.2)")
        ->delimiter(',');
    power->add_option("--trials", opt.trials, "trials per shift")->capture_default_str();
    add_stat_kernel(power);
    add_mc(power, true);
    add_seed_threads(power);
    add_out(power, "CSV output path (default: print to stdout)");
    add_config(power);

    CLI::App* baseline =
        app.add_subcommand("baseline", "degree/parametric reference tests");
    baseline->add_option("--graph", opt.graph_path, "observed graph edge list");
    add_generator(baseline);
    baseline->add_option("--method", opt.method, "deg | tvdeg | mddeg | param")
        ->capture_default_str();
    add_mc(baseline, false);
    add_seed_threads(baseline);
    add_out(baseline, "write the full report as JSON");
    add_config(baseline);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sample) return run_sample(opt);
        if (*estimate) return run_estimate(opt);
        if (*test) return run_test(opt);
        if (*batch) return run_batch(opt);
        if (*power) return run_power(opt);
        if (*baseline) return run_baseline(opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;  // unreachable: require_subcommand(1)
}
