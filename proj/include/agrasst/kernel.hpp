#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agrasst/graph.hpp"

namespace agrasst {

// Graph kernel choice.
//   WlSubtree    : Weisfeiler-Lehman subtree kernel, `height` refinement
//                  rounds from a constant initial label; normalized by default.
//   GaussianEdge : exp(-Hamming(g1,g2)/sigma^2) on edge indicator vectors;
//                  sigma^2 defaults to the number of vertex pairs.
struct KernelSpec {
    enum class Kind { WlSubtree, GaussianEdge };

    Kind kind = Kind::WlSubtree;
    int height = 3;
    std::optional<double> sigma_sq;  // empty = automatic (N)
    bool normalize = true;

    static KernelSpec wl(int height = 3, bool normalize = true);
    static KernelSpec gaussian(std::optional<double> sigma_sq = std::nullopt,
                               bool normalize = false);

    // "wl:3", "gauss:auto", "gauss:<sigma^2>"
    static KernelSpec parse(const std::string& text);
    std::string to_string() const;

    double resolve_sigma_sq(std::size_t pair_count) const;
    void validate() const;
};

double evaluate(const KernelSpec& spec, const Graph& g1, const Graph& g2);

// Batch WL featurization with one shared label dictionary, so feature ids are
// comparable across all graphs in the batch.  Feature ids are dense.
class WlFeatures {
public:
    WlFeatures(int height, const std::vector<Graph>& graphs);

    std::size_t size() const { return counts_.size(); }
    std::size_t feature_count() const { return feature_count_; }

    double dot(std::size_t a, std::size_t b) const;
    double norm(std::size_t idx) const { return norms_[idx]; }

    // ||sum_i weights[i] * phi_i||^2, with phi_i unit-normalized first when
    // `normalize` is set.  This is the whole Stein quadratic form in one pass
    // when the kernel is linear in explicit features.
    double weighted_norm_sq(const std::vector<double>& weights, bool normalize) const;

private:
    std::size_t feature_count_ = 0;
    // per graph: (feature id, count), sorted by id
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> counts_;
    std::vector<double> norms_;
};

// Kernel values among {x} and its one-edge perturbations x^{(s,1)}, x^{(s,0)}
// for a list of vertex pairs, memoized so each distinct graph pair is
// evaluated once.  Toggles that equal x collapse onto x's slot.
class PerturbationGram {
public:
    PerturbationGram(const KernelSpec& spec, const Graph& x,
                     const std::vector<PairIndex>& pairs);

    int base_id() const { return 0; }
    int toggled_id(PairIndex s, bool bit) const;

    double value(int a, int b);

    // 3x3 table for a pair of positions in the pair list: rows/columns run
    // over {x^{(s,1)}, x^{(s,0)}, x}.
    std::array<std::array<double, 3>, 3> block(PairIndex s_row, PairIndex s_col);

    std::size_t distinct_graphs() const { return graphs_.size(); }
    std::size_t evaluation_count() const { return evaluations_; }

private:
    KernelSpec spec_;
    std::vector<Graph> graphs_;  // 0 = x, then one toggle per distinct pair
    std::map<PairIndex, int> toggle_slot_;
    std::optional<WlFeatures> features_;
    std::vector<double> cache_;
    std::vector<char> cached_;
    std::size_t evaluations_ = 0;

    double compute(int a, int b) const;
};

}  // namespace agrasst
