#include "agrasst/archive.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "agrasst/edgelist.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace agrasst {

namespace {

std::string sample_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sample_%05zu.txt", index);
    return buf;
}

}  // namespace

void write_archive(const std::string& dir, const std::vector<Graph>& graphs,
                   const ArchiveManifest& manifest) {
    if (graphs.size() != manifest.count)
        throw std::invalid_argument("manifest count does not match graph list");
    fs::create_directories(dir);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        if (graphs[i].vertex_count() != manifest.n)
            throw std::invalid_argument("graph vertex count does not match manifest");
        save_edge_list(graphs[i], (fs::path(dir) / sample_name(i)).string());
    }
    nlohmann::json j{{"schema_version", 1},
                     {"n", manifest.n},
                     {"count", manifest.count},
                     {"generator", manifest.generator},
                     {"seed", manifest.seed}};
    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir);
    out << j.dump(2) << "\n";
}

void write_concatenated_archive(const std::string& path, const std::vector<Graph>& graphs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write archive file: " + path);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        if (i) out << "---\n";
        serialize_edge_list(graphs[i], out);
    }
}

namespace {

Archive read_archive_dir(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw std::runtime_error("archive has no manifest.json: " + dir.string());
    nlohmann::json j = nlohmann::json::parse(in);
    Archive archive;
    archive.manifest.n = j.at("n").get<int>();
    archive.manifest.count = j.at("count").get<std::size_t>();
    archive.manifest.generator = j.value("generator", std::string("unknown"));
    archive.manifest.seed = j.value("seed", std::uint64_t{0});
    archive.graphs.reserve(archive.manifest.count);
    for (std::size_t i = 0; i < archive.manifest.count; ++i) {
        fs::path file = dir / sample_name(i);
        Graph g = load_edge_list(file.string());
        if (g.vertex_count() != archive.manifest.n)
            throw std::runtime_error("archive sample " + file.string()
                                     + " does not match manifest vertex count");
        archive.graphs.push_back(std::move(g));
    }
    return archive;
}

Archive read_archive_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open archive file: " + path.string());
    Archive archive;
    std::ostringstream chunk;
    std::string line;
    auto flush_chunk = [&] {
        std::string text = chunk.str();
        chunk.str("");
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) return;
        archive.graphs.push_back(parse_edge_list(text));
    };
    while (std::getline(in, line)) {
        std::string trimmed = line;
        while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' '))
            trimmed.pop_back();
        if (trimmed == "---") {
            flush_chunk();
        } else {
            chunk << line << "\n";
        }
    }
    flush_chunk();
    if (archive.graphs.empty())
        throw std::runtime_error("archive file contains no graphs: " + path.string());
    for (const auto& g : archive.graphs)
        if (g.vertex_count() != archive.graphs.front().vertex_count())
            throw std::runtime_error("archive file mixes vertex counts: " + path.string());
    archive.manifest.n = archive.graphs.front().vertex_count();
    archive.manifest.count = archive.graphs.size();
    archive.manifest.generator = "unknown";
    archive.manifest.seed = 0;
    return archive;
}

}  // namespace

Archive read_archive(const std::string& path) {
    fs::path p(path);
    if (fs::is_directory(p)) return read_archive_dir(p);
    if (fs::is_regular_file(p)) return read_archive_file(p);
    throw std::runtime_error("archive path does not exist: " + path);
}

}  // namespace agrasst
