#include "agrasst/edgelist.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace agrasst {

namespace {

std::string strip(const std::string& line) {
    std::string s = line;
    if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Graph parse_edge_list(std::istream& in) {
    std::optional<Graph> graph;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = strip(line);
        if (body.empty()) continue;
        std::istringstream fields(body);
        if (!graph) {
            std::string tag;
            int n = -1;
            fields >> tag >> n;
            if (fields.fail() || tag != "n" || n < 0)
                throw std::runtime_error("edge list line " + std::to_string(lineno)
                                         + ": expected header 'n <count>'");
            graph.emplace(n);
            continue;
        }
        int i = -1, j = -1;
        fields >> i >> j;
        std::string extra;
        if (fields.fail() || (fields >> extra))
            throw std::runtime_error("edge list line " + std::to_string(lineno)
                                     + ": expected 'i j'");
        if (i < 0 || j < 0 || i >= graph->vertex_count() || j >= graph->vertex_count())
            throw std::runtime_error("edge list line " + std::to_string(lineno)
                                     + ": vertex out of range");
        if (i == j)
            throw std::runtime_error("edge list line " + std::to_string(lineno)
                                     + ": self loop not allowed");
        graph->set_edge(i, j, true);
    }
    if (!graph) throw std::runtime_error("edge list: missing header 'n <count>'");
    return *graph;
}

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return parse_edge_list(in);
}

void serialize_edge_list(const Graph& g, std::ostream& out) {
    int n = g.vertex_count();
    out << "n " << n << "\n";
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.has_edge(i, j)) out << i << " " << j << "\n";
}

std::string serialize_edge_list(const Graph& g) {
    std::ostringstream out;
    serialize_edge_list(g, out);
    return out.str();
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    serialize_edge_list(g, out);
}

}  // namespace agrasst
