#include "agrasst/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace agrasst {

KernelSpec KernelSpec::wl(int height, bool normalize) {
    KernelSpec spec;
    spec.kind = Kind::WlSubtree;
    spec.height = height;
    spec.normalize = normalize;
    return spec;
}

KernelSpec KernelSpec::gaussian(std::optional<double> sigma_sq, bool normalize) {
    KernelSpec spec;
    spec.kind = Kind::GaussianEdge;
    spec.sigma_sq = sigma_sq;
    spec.normalize = normalize;
    return spec;
}

KernelSpec KernelSpec::parse(const std::string& text) {
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "wl") {
        int h = 3;
        if (!arg.empty()) {
            std::size_t used = 0;
            h = std::stoi(arg, &used);
            if (used != arg.size() || h < 0)
                throw std::invalid_argument("bad WL height in kernel spec: " + text);
        }
        return wl(h);
    }
    if (head == "gauss") {
        if (arg.empty() || arg == "auto") return gaussian();
        std::size_t used = 0;
        double s2 = std::stod(arg, &used);
        if (used != arg.size() || !(s2 > 0))
            throw std::invalid_argument("bad bandwidth in kernel spec: " + text);
        return gaussian(s2);
    }
    throw std::invalid_argument("unknown kernel spec: " + text
                                + " (expected wl:<h> or gauss:<sigma^2>|gauss:auto)");
}

std::string KernelSpec::to_string() const {
    if (kind == Kind::WlSubtree) {
        std::string s = "wl:" + std::to_string(height);
        if (!normalize) s += ":unnormalized";
        return s;
    }
    if (!sigma_sq) return "gauss:auto";
    char buf[48];
    std::snprintf(buf, sizeof buf, "gauss:%g", *sigma_sq);
    return buf;
}

double KernelSpec::resolve_sigma_sq(std::size_t pair_count) const {
    if (sigma_sq) return *sigma_sq;
    return pair_count == 0 ? 1.0 : static_cast<double>(pair_count);
}

void KernelSpec::validate() const {
    if (kind == Kind::WlSubtree && height < 0)
        throw std::invalid_argument("WL height must be non-negative");
    if (kind == Kind::GaussianEdge && sigma_sq && !(*sigma_sq > 0))
        throw std::invalid_argument("Gaussian bandwidth must be positive");
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint32_t v : key) h = (h ^ v) * 0x100000001b3ULL;
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

WlFeatures::WlFeatures(int height, const std::vector<Graph>& graphs) {
    if (height < 0) throw std::invalid_argument("WL height must be non-negative");
    std::size_t count = graphs.size();
    counts_.resize(count);
    norms_.resize(count, 0.0);
    if (count == 0) return;
    int n = graphs.front().vertex_count();
    for (const auto& g : graphs)
        if (g.vertex_count() != n)
            throw std::invalid_argument("WL batch mixes vertex counts");

    // Shared injective dictionary: a signature (round, own label, sorted
    // neighbor labels) maps to the same compressed id in every graph of the
    // batch.  Ids double as feature ids.
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> dictionary;
    auto intern = [&](const std::vector<std::uint32_t>& key) {
        auto [it, inserted] = dictionary.emplace(key, feature_count_);
        if (inserted) ++feature_count_;
        return it->second;
    };

    std::uint32_t root = intern({0});  // constant initial label for every vertex

    std::vector<std::vector<std::uint32_t>> labels(count,
                                                   std::vector<std::uint32_t>(n, root));
    std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> tallies(count);
    for (std::size_t gi = 0; gi < count; ++gi) tallies[gi][root] += n;

    std::vector<std::uint32_t> key;
    std::vector<std::uint32_t> next(n);
    for (int round = 1; round <= height; ++round) {
        for (std::size_t gi = 0; gi < count; ++gi) {
            const Graph& g = graphs[gi];
            const auto& rows = g.rows();
            int words = g.words_per_row();
            auto& lab = labels[gi];
            for (int v = 0; v < n; ++v) {
                key.clear();
                key.push_back(static_cast<std::uint32_t>(round));
                key.push_back(lab[v]);
                for (int w = 0; w < words; ++w) {
                    std::uint64_t bits = rows[static_cast<std::size_t>(v) * words + w];
                    while (bits) {
                        int u = w * 64 + std::countr_zero(bits);
                        bits &= bits - 1;
                        key.push_back(lab[u]);
                    }
                }
                std::sort(key.begin() + 2, key.end());
                next[v] = intern(key);
            }
            for (int v = 0; v < n; ++v) {
                lab[v] = next[v];
                ++tallies[gi][next[v]];
            }
        }
    }

    for (std::size_t gi = 0; gi < count; ++gi) {
        auto& sorted = counts_[gi];
        sorted.assign(tallies[gi].begin(), tallies[gi].end());
        std::sort(sorted.begin(), sorted.end());
        double sq = 0.0;
        for (auto [id, c] : sorted) sq += static_cast<double>(c) * c;
        norms_[gi] = std::sqrt(sq);
    }
}

double WlFeatures::dot(std::size_t a, std::size_t b) const {
    const auto& fa = counts_.at(a);
    const auto& fb = counts_.at(b);
    double total = 0.0;
    std::size_t i = 0, j = 0;
    while (i < fa.size() && j < fb.size()) {
        if (fa[i].first == fb[j].first) {
            total += static_cast<double>(fa[i].second) * fb[j].second;
            ++i;
            ++j;
        } else if (fa[i].first < fb[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    return total;
}

double WlFeatures::weighted_norm_sq(const std::vector<double>& weights,
                                    bool normalize) const {
    if (weights.size() != counts_.size())
        throw std::invalid_argument("weight count does not match batch size");
    std::vector<double> acc(feature_count_, 0.0);
    for (std::size_t gi = 0; gi < counts_.size(); ++gi) {
        double w = weights[gi];
        if (w == 0.0) continue;
        if (normalize) {
            if (norms_[gi] == 0.0) continue;
            w /= norms_[gi];
        }
        for (auto [id, c] : counts_[gi]) acc[id] += w * static_cast<double>(c);
    }
    double total = 0.0;
    for (double v : acc) total += v * v;
    return total;
}

double evaluate(const KernelSpec& spec, const Graph& g1, const Graph& g2) {
    spec.validate();
    if (g1.vertex_count() != g2.vertex_count())
        throw std::invalid_argument("kernel needs graphs of equal vertex count");
    if (spec.kind == KernelSpec::Kind::GaussianEdge) {
        double s2 = spec.resolve_sigma_sq(g1.pair_count());
        double value = std::exp(-static_cast<double>(g1.hamming_distance(g2)) / s2);
        return value;  // self-values are exactly 1, normalization is a no-op
    }
    WlFeatures features(spec.height, {g1, g2});
    double value = features.dot(0, 1);
    if (spec.normalize) {
        double denom = features.norm(0) * features.norm(1);
        return denom == 0.0 ? 0.0 : value / denom;
    }
    return value;
}

PerturbationGram::PerturbationGram(const KernelSpec& spec, const Graph& x,
                                   const std::vector<PairIndex>& pairs)
    : spec_(spec) {
    spec_.validate();
    graphs_.push_back(x);
    for (PairIndex s : pairs) {
        if (toggle_slot_.count(s)) continue;
        // Only one of the two toggles is a new graph; the other is x itself.
        bool bit = x.edge_bit(s);
        graphs_.push_back(x.with_edge(s, !bit));
        toggle_slot_[s] = static_cast<int>(graphs_.size()) - 1;
    }
    if (spec_.kind == KernelSpec::Kind::WlSubtree)
        features_.emplace(spec_.height, graphs_);
    cache_.assign(graphs_.size() * graphs_.size(), 0.0);
    cached_.assign(graphs_.size() * graphs_.size(), 0);
}

int PerturbationGram::toggled_id(PairIndex s, bool bit) const {
    if (graphs_.front().edge_bit(s) == bit) return 0;
    auto it = toggle_slot_.find(s);
    if (it == toggle_slot_.end()) throw std::out_of_range("pair not in perturbation set");
    return it->second;
}

double PerturbationGram::compute(int a, int b) const {
    if (spec_.kind == KernelSpec::Kind::GaussianEdge) {
        double s2 = spec_.resolve_sigma_sq(graphs_.front().pair_count());
        return std::exp(-static_cast<double>(graphs_[a].hamming_distance(graphs_[b])) / s2);
    }
    double value = features_->dot(a, b);
    if (spec_.normalize) {
        double denom = features_->norm(a) * features_->norm(b);
        return denom == 0.0 ? 0.0 : value / denom;
    }
    return value;
}

double PerturbationGram::value(int a, int b) {
    if (a < 0 || b < 0 || a >= static_cast<int>(graphs_.size())
        || b >= static_cast<int>(graphs_.size()))
        throw std::out_of_range("graph id out of range");
    if (a > b) std::swap(a, b);
    std::size_t idx = static_cast<std::size_t>(a) * graphs_.size() + b;
    if (!cached_[idx]) {
        cache_[idx] = compute(a, b);
        cached_[idx] = 1;
        ++evaluations_;
    }
    return cache_[idx];
}

std::array<std::array<double, 3>, 3> PerturbationGram::block(PairIndex s_row,
                                                             PairIndex s_col) {
    int rows[3] = {toggled_id(s_row, true), toggled_id(s_row, false), 0};
    int cols[3] = {toggled_id(s_col, true), toggled_id(s_col, false), 0};
    std::array<std::array<double, 3>, 3> out{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out[r][c] = value(rows[r], cols[c]);
    return out;
}

}  // namespace agrasst
