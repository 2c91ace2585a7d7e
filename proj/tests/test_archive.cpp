#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "agrasst/archive.hpp"
#include "agrasst/models.hpp"

using namespace agrasst;

namespace {

std::filesystem::path fresh_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("directory archive round trips graphs and manifest") {
    auto graphs = bernoulli_sample(7, 0.4, 12, 5);
    ArchiveManifest manifest;
    manifest.n = 7;
    manifest.count = graphs.size();
    manifest.generator = "er:7:0.4";
    manifest.seed = 5;

    auto dir = fresh_dir("agrasst_archive_rt");
    write_archive(dir.string(), graphs, manifest);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(std::filesystem::exists(dir / "sample_00000.txt"));
    CHECK(std::filesystem::exists(dir / "sample_00011.txt"));

    Archive archive = read_archive(dir.string());
    CHECK(archive.graphs == graphs);
    CHECK(archive.manifest.n == 7);
    CHECK(archive.manifest.count == 12);
    CHECK(archive.manifest.generator == "er:7:0.4");
    CHECK(archive.manifest.seed == 5);
}

TEST_CASE("concatenated archive round trips with a synthesized manifest") {
    auto graphs = bernoulli_sample(5, 0.5, 4, 9);
    auto path = std::filesystem::temp_directory_path() / "agrasst_archive_cat.txt";
    write_concatenated_archive(path.string(), graphs);

    Archive archive = read_archive(path.string());
    CHECK(archive.graphs == graphs);
    CHECK(archive.manifest.n == 5);
    CHECK(archive.manifest.count == 4);
    CHECK(archive.manifest.generator == "unknown");
}

TEST_CASE("single-graph concatenated archive is a plain edge list") {
    auto graphs = bernoulli_sample(6, 0.3, 1, 2);
    auto path = std::filesystem::temp_directory_path() / "agrasst_archive_one.txt";
    write_concatenated_archive(path.string(), graphs);
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "n 6");
    Archive archive = read_archive(path.string());
    CHECK(archive.graphs == graphs);
}

TEST_CASE("read errors are loud") {
    CHECK_THROWS(read_archive("/tmp/agrasst_archive_does_not_exist_xyz"));

    // manifest promising more samples than are on disk
    auto graphs = bernoulli_sample(4, 0.5, 2, 3);
    ArchiveManifest manifest;
    manifest.n = 4;
    manifest.count = 2;
    manifest.generator = "test";
    auto dir = fresh_dir("agrasst_archive_short");
    write_archive(dir.string(), graphs, manifest);
    std::filesystem::remove(dir / "sample_00001.txt");
    CHECK_THROWS(read_archive(dir.string()));
}

TEST_CASE("mixed vertex counts are rejected") {
    auto path = std::filesystem::temp_directory_path() / "agrasst_archive_mixed.txt";
    std::ofstream out(path);
    out << "n 4\n0 1\n---\nn 5\n0 1\n";
    out.close();
    CHECK_THROWS(read_archive(path.string()));
}
