#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agrasst/graph.hpp"
#include "json.hpp"

namespace agrasst {

// Raw: ĝ(k) = n_k / N_k, zero off the observed support.
// Cumulative: ĝ(k) pools all cells with k' <= k; scalar statistics only.
enum class EstimateMode { Raw, Cumulative };

std::string mode_name(EstimateMode mode);
EstimateMode mode_from_name(const std::string& name);

struct CellCounts {
    std::uint64_t successes = 0;  // n_k: edge present
    std::uint64_t exposures = 0;  // N_k: times the cell was visited
    bool operator==(const CellCounts&) const = default;
};

// Lookup-table estimate of a generator's conditional edge probability
// P(X_s = 1 | t(X_{-s}) = k), pooled over all vertex pairs s.
class ConditionalEstimate {
public:
    ConditionalEstimate() = default;

    static ConditionalEstimate fit(const std::vector<Graph>& samples, StatKind kind,
                                   EstimateMode mode = EstimateMode::Raw);
    static ConditionalEstimate from_table(StatKind kind, EstimateMode mode, int n,
                                          std::uint64_t sample_count,
                                          std::map<StatValue, CellCounts> table);

    StatKind kind() const { return kind_; }
    EstimateMode mode() const { return mode_; }
    int vertex_count() const { return n_; }
    std::uint64_t sample_count() const { return samples_; }
    const std::map<StatValue, CellCounts>& table() const { return table_; }

    std::optional<StatValue> k_min() const;
    std::optional<StatValue> k_max() const;

    // ĝ at key k; `unseen` reports a zero-exposure lookup.
    double value_at(const StatValue& k, bool& unseen) const;
    double predict(const Graph& g, PairIndex s) const;
    double predict(const Graph& g, PairIndex s, bool& unseen) const;

    nlohmann::json to_json() const;
    static ConditionalEstimate from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static ConditionalEstimate load(const std::string& path);

    bool operator==(const ConditionalEstimate&) const = default;

private:
    StatKind kind_ = StatKind::Edges;
    EstimateMode mode_ = EstimateMode::Raw;
    int n_ = 0;
    std::uint64_t samples_ = 0;
    std::map<StatValue, CellCounts> table_;
};

// Cell-by-cell comparison of two estimates of the same statistic, e.g. a
// generator's table against the table fitted from reference samples.
struct CriticismRow {
    StatValue k;
    double g_generator = 0.0;
    double g_reference = 0.0;
    std::uint64_t exposure = 0;  // combined, used as the row weight
    double gap = 0.0;            // |g_generator - g_reference|
};

struct CriticismReport {
    std::vector<CriticismRow> rows;
    double headline = 0.0;  // exposure-weighted mean gap
};

CriticismReport criticize(const ConditionalEstimate& generator,
                          const ConditionalEstimate& reference);

}  // namespace agrasst
