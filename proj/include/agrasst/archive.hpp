#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agrasst/graph.hpp"

namespace agrasst {

struct ArchiveManifest {
    int n = 0;
    std::size_t count = 0;
    std::string generator;
    std::uint64_t seed = 0;
};

struct Archive {
    ArchiveManifest manifest;
    std::vector<Graph> graphs;
};

// Directory layout: sample_00000.txt ... plus manifest.json.
void write_archive(const std::string& dir, const std::vector<Graph>& graphs,
                   const ArchiveManifest& manifest);

// Single file: edge lists separated by `---` lines; no manifest.
void write_concatenated_archive(const std::string& path, const std::vector<Graph>& graphs);

// Accepts either layout; for a concatenated file the manifest is synthesized.
Archive read_archive(const std::string& path);

}  // namespace agrasst
