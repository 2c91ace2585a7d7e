// End-to-end checks of the installed binary: every command consumes what the
// previous one produced, with the documented exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "agrasst/estimator.hpp"
#include "json.hpp"

namespace {

const std::string cli = AGRASST_CLI_PATH;
const std::string data_dir = AGRASST_DATA_DIR;
const std::filesystem::path work = std::filesystem::temp_directory_path() / "agrasst_cli";

int run(const std::string& args) {
    std::string cmd = cli + " " + args + " >" + (work / "stdout.txt").string() + " 2>"
                      + (work / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string out_text() { return slurp(work / "stdout.txt"); }
std::string err_text() { return slurp(work / "stderr.txt"); }

struct Setup {
    Setup() {
        std::filesystem::remove_all(work);
        std::filesystem::create_directories(work);
    }
};
const Setup setup;

std::string path(const char* name) { return (work / name).string(); }

}  // namespace

TEST_CASE("sample, estimate, and test consume each other's outputs") {
    REQUIRE(run("sample --model e2st:10 --count 800 --seed 42 --out " + path("arch")) == 0);
    CHECK(std::filesystem::exists(work / "arch" / "manifest.json"));

    REQUIRE(run("estimate --archive " + path("arch") + " --stat edges --out "
                + path("table.json"))
            == 0);
    auto table = agrasst::ConditionalEstimate::load(path("table.json"));
    CHECK(table.vertex_count() == 10);
    CHECK(table.sample_count() == 800);

    // observed graph drawn from the same model: expect no rejection
    REQUIRE(run("sample --model e2st:10 --count 1 --seed 77 --format file --out "
                + path("observed.txt"))
            == 0);
    int code = run("test --graph " + path("observed.txt") + " --archive " + path("arch")
                   + " -L 600 -m 150 -B 100 --seed 3 --out " + path("report.json"));
    CHECK(code == 0);
    nlohmann::json report = nlohmann::json::parse(std::ifstream(path("report.json")));
    CHECK(report["reject"] == false);
    CHECK(report["method"] == "agrasst:edges:raw:wl:3");
    CHECK(out_text().find("no rejection") != std::string::npos);
}

TEST_CASE("a graph from a shifted model is rejected against the null generator") {
    REQUIRE(run("sample --model e2st:20:-2:0.2:0.01 --count 1 --seed 5 --format file --out "
                + path("shifted.txt"))
            == 0);
    int code = run("test --graph " + path("shifted.txt")
                   + " --model e2st:20 --seed 11 --out " + path("shifted_report.json"));
    CHECK(code == 2);
    nlohmann::json report =
        nlohmann::json::parse(std::ifstream(path("shifted_report.json")));
    CHECK(report["reject"] == true);
}

TEST_CASE("vertex count mismatches exit with an error") {
    int code = run("test --graph " + data_dir + "/karate.txt --model e2st:10 --seed 1");
    CHECK(code == 1);
    CHECK(err_text().find("error:") != std::string::npos);
}

TEST_CASE("bad invocations exit with an error") {
    CHECK(run("frobnicate") == 1);
    CHECK(run("test") == 1);                                    // no graph
    CHECK(run("test --graph /nonexistent.txt --model er:4:0.5") == 1);
    CHECK(run("test --graph " + data_dir + "/florentine.txt") == 1);  // no generator
    CHECK(run("sample --model er:4:1.5 --count 1 --out " + path("bad")) == 1);
    CHECK(run("--help") == 0);
}

TEST_CASE("batch command emits one json line per scored batch") {
    REQUIRE(run("sample --model er:8:0.3 --count 1 --seed 9 --format file --out "
                + path("bx.txt"))
            == 0);
    int code = run("batch --graph " + path("bx.txt")
                   + " --model er:8:0.3 -L 200 --batch-size 8 --max-batches 6 --seed 2");
    CHECK((code == 0 || code == 2));
    std::istringstream lines(out_text());
    std::string line;
    int parsed = 0;
    bool accepted = false;
    while (std::getline(lines, line)) {
        nlohmann::json j = nlohmann::json::parse(line);
        CHECK(j.contains("p_value"));
        accepted = accepted || j["accepted"].get<bool>();
        ++parsed;
    }
    CHECK(parsed >= 1);
    CHECK(accepted == (code == 0));
}

TEST_CASE("baseline command writes a full report") {
    int code = run("baseline --graph " + data_dir + "/florentine.txt"
                   + " --model er:16:0.17 --method deg -m 200 --seed 6 --out "
                   + path("deg.json"));
    CHECK((code == 0 || code == 2));
    nlohmann::json report = nlohmann::json::parse(std::ifstream(path("deg.json")));
    CHECK(report["method"] == "deg");
    CHECK(report["diagnostics"].contains("gamma_lower"));
}

TEST_CASE("power command writes the pinned csv") {
    REQUIRE(run("power --model e2st:8 --beta2 0,0.8 --trials 3 -L 100 -m 50 -B 28"
                " --seed 4 --out " + path("power.csv"))
            == 0);
    std::istringstream lines(slurp(path("power.csv")));
    std::string header;
    std::getline(lines, header);
    CHECK(header == "beta2,kind,B,trials,rejection_rate,stderr,runtime_ms");
    int rows = 0;
    std::string row;
    while (std::getline(lines, row))
        if (!row.empty()) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("a json config seeds the flags and explicit flags override it") {
    std::ofstream cfg(path("config.json"));
    cfg << R"({"model":"er:9:0.25","m":120,"seed":8,"stat":"sumdeg"})";
    cfg.close();
    REQUIRE(run("sample --model er:9:0.25 --count 1 --seed 31 --format file --out "
                + path("cx.txt"))
            == 0);

    int with_config = run("test --graph " + path("cx.txt") + " --config "
                          + path("config.json") + " --out " + path("c1.json"));
    int with_flags = run("test --graph " + path("cx.txt")
                         + " --model er:9:0.25 -m 120 --seed 8 --stat sumdeg --out "
                         + path("c2.json"));
    CHECK(with_config == with_flags);
    CHECK(slurp(path("c1.json")) == slurp(path("c2.json")));

    // explicit flag wins over the config value
    int overridden = run("test --graph " + path("cx.txt") + " --config "
                         + path("config.json") + " --stat edges --out " + path("c3.json"));
    CHECK((overridden == 0 || overridden == 2));
    nlohmann::json j = nlohmann::json::parse(std::ifstream(path("c3.json")));
    CHECK(j["method"] == "agrasst:edges:raw:wl:3");

    CHECK(run("test --graph " + path("cx.txt") + " --config /nonexistent.json") == 1);
}
