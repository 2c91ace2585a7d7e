#include "agrasst/estimator.hpp"

#include <algorithm>
#include <cmath>

#include <fstream>
#include <stdexcept>

namespace agrasst {

std::string mode_name(EstimateMode mode) {
    return mode == EstimateMode::Raw ? "raw" : "cumulative";
}

EstimateMode mode_from_name(const std::string& name) {
    if (name == "raw") return EstimateMode::Raw;
    if (name == "cumulative") return EstimateMode::Cumulative;
    throw std::invalid_argument("unknown estimator mode: " + name);
}

namespace {

void check_mode(StatKind kind, EstimateMode mode) {
    if (mode == EstimateMode::Cumulative && !stat_is_scalar(kind))
        throw std::invalid_argument("cumulative mode needs a scalar statistic, got "
                                    + stat_name(kind));
}

}  // namespace

ConditionalEstimate ConditionalEstimate::fit(const std::vector<Graph>& samples,
                                             StatKind kind, EstimateMode mode) {
    check_mode(kind, mode);
    if (samples.empty()) throw std::invalid_argument("cannot fit on an empty sample list");
    int n = samples.front().vertex_count();
    std::map<StatValue, CellCounts> table;
    for (const auto& g : samples) {
        if (g.vertex_count() != n)
            throw std::invalid_argument("samples mix vertex counts");
        std::size_t N = g.pair_count();
        for (std::size_t s = 0; s < N; ++s) {
            auto ps = static_cast<PairIndex>(s);
            auto& cell = table[conditioning_statistic(kind, g, ps)];
            ++cell.exposures;
            if (g.edge_bit(ps)) ++cell.successes;
        }
    }
    return from_table(kind, mode, n, samples.size(), std::move(table));
}

ConditionalEstimate ConditionalEstimate::from_table(StatKind kind, EstimateMode mode, int n,
                                                    std::uint64_t sample_count,
                                                    std::map<StatValue, CellCounts> table) {
    check_mode(kind, mode);
    for (const auto& [k, cell] : table) {
        if (k.dim != stat_dimension(kind))
            throw std::invalid_argument("table key dimension does not match statistic");
        if (cell.exposures == 0 || cell.successes > cell.exposures)
            throw std::invalid_argument("invalid cell counts at k=" + k.to_string());
    }
    ConditionalEstimate est;
    est.kind_ = kind;
    est.mode_ = mode;
    est.n_ = n;
    est.samples_ = sample_count;
    est.table_ = std::move(table);
    return est;
}

std::optional<StatValue> ConditionalEstimate::k_min() const {
    if (table_.empty()) return std::nullopt;
    return table_.begin()->first;
}

std::optional<StatValue> ConditionalEstimate::k_max() const {
    if (table_.empty()) return std::nullopt;
    return table_.rbegin()->first;
}

double ConditionalEstimate::value_at(const StatValue& k, bool& unseen) const {
    unseen = false;
    if (mode_ == EstimateMode::Raw) {
        auto it = table_.find(k);
        if (it == table_.end()) {
            unseen = true;
            return 0.0;
        }
        return static_cast<double>(it->second.successes)
               / static_cast<double>(it->second.exposures);
    }
    // Cumulative: pool every cell at or below k.
    std::uint64_t successes = 0, exposures = 0;
    for (auto it = table_.begin(); it != table_.end() && !(k < it->first); ++it) {
        successes += it->second.successes;
        exposures += it->second.exposures;
    }
    if (exposures == 0) {
        unseen = true;
        return 0.0;
    }
    return static_cast<double>(successes) / static_cast<double>(exposures);
}

double ConditionalEstimate::predict(const Graph& g, PairIndex s) const {
    bool unseen = false;
    return predict(g, s, unseen);
}

double ConditionalEstimate::predict(const Graph& g, PairIndex s, bool& unseen) const {
    if (g.vertex_count() != n_)
        throw std::invalid_argument("graph vertex count does not match estimate");
    return value_at(conditioning_statistic(kind_, g, s), unseen);
}

nlohmann::json ConditionalEstimate::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [k, cell] : table_) {
        nlohmann::json key = nlohmann::json::array();
        for (int d = 0; d < k.dim; ++d) key.push_back(k.v[d]);
        entries.push_back({{"k", key}, {"n_k", cell.successes}, {"N_k", cell.exposures}});
    }
    return nlohmann::json{{"schema_version", 1},
                          {"statistic", stat_name(kind_)},
                          {"mode", mode_name(mode_)},
                          {"n", n_},
                          {"L", samples_},
                          {"entries", entries}};
}

ConditionalEstimate ConditionalEstimate::from_json(const nlohmann::json& j) {
    StatKind kind = stat_from_name(j.at("statistic").get<std::string>());
    EstimateMode mode = mode_from_name(j.at("mode").get<std::string>());
    int n = j.at("n").get<int>();
    auto L = j.at("L").get<std::uint64_t>();
    std::map<StatValue, CellCounts> table;
    for (const auto& entry : j.at("entries")) {
        const auto& key = entry.at("k");
        if (key.size() != static_cast<std::size_t>(stat_dimension(kind)))
            throw std::invalid_argument("estimate entry key has wrong dimension");
        StatValue k;
        k.dim = static_cast<std::int32_t>(key.size());
        for (std::size_t d = 0; d < key.size(); ++d) k.v[d] = key[d].get<std::int32_t>();
        CellCounts cell{entry.at("n_k").get<std::uint64_t>(),
                        entry.at("N_k").get<std::uint64_t>()};
        if (!table.emplace(k, cell).second)
            throw std::invalid_argument("estimate has duplicate key " + k.to_string());
    }
    return from_table(kind, mode, n, L, std::move(table));
}

void ConditionalEstimate::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write estimate file: " + path);
    out << to_json().dump(2) << "\n";
}

ConditionalEstimate ConditionalEstimate::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open estimate file: " + path);
    return from_json(nlohmann::json::parse(in));
}

CriticismReport criticize(const ConditionalEstimate& generator,
                          const ConditionalEstimate& reference) {
    if (generator.kind() != reference.kind())
        throw std::invalid_argument("criticism needs matching statistic kinds");
    CriticismReport report;
    auto keys_of = [](const ConditionalEstimate& est) {
        std::vector<StatValue> keys;
        for (const auto& [k, cell] : est.table()) keys.push_back(k);
        return keys;
    };
    std::vector<StatValue> keys = keys_of(generator);
    for (const auto& k : keys_of(reference)) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    double weighted = 0.0;
    std::uint64_t total = 0;
    for (const auto& k : keys) {
        CriticismRow row;
        row.k = k;
        bool unseen = false;
        row.g_generator = generator.value_at(k, unseen);
        row.g_reference = reference.value_at(k, unseen);
        auto exposure_in = [&](const ConditionalEstimate& est) -> std::uint64_t {
            auto it = est.table().find(k);
            return it == est.table().end() ? 0 : it->second.exposures;
        };
        row.exposure = exposure_in(generator) + exposure_in(reference);
        row.gap = std::abs(row.g_generator - row.g_reference);
        weighted += static_cast<double>(row.exposure) * row.gap;
        total += row.exposure;
        report.rows.push_back(row);
    }
    report.headline = total == 0 ? 0.0 : weighted / static_cast<double>(total);
    return report;
}

}  // namespace agrasst
