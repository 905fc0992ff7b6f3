#pragma once

// Gradient-boosted trees on logistic loss with second-order (g,h) statistics
// and exact greedy splits over sorted unique feature values. Regularization
// is the L2 leaf penalty lambda; a split must leave at least
// min_child_hessian of hessian mass on each side and improve gain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/matrix.hpp"

namespace advfeat {

struct GbtNode {
    bool is_leaf = true;
    double value = 0.0;       // leaf weight (raw; shrinkage applied at accumulation)
    std::size_t feature = 0;  // split fields, valid when !is_leaf
    double threshold = 0.0;   // left branch takes x[feature] < threshold
    std::size_t left = 0;
    std::size_t right = 0;
    double gain = 0.0;
    double cover = 0.0;       // hessian mass reaching this node
};

struct GbtTree {
    std::vector<GbtNode> nodes;  // nodes[0] is the root
};

struct GbtModel {
    double base_score = 0.0;  // initial logit
    double learning_rate = 0.1;
    std::size_t max_depth = 6;
    std::size_t rounds = 100;
    double lambda = 1.0;
    double min_child_hessian = 1.0;
    std::vector<GbtTree> trees;
};

inline double gbt_margin(const GbtModel& m, const double* x, std::size_t d) {
    double acc = m.base_score;
    for (const GbtTree& t : m.trees) {
        std::size_t node = 0;
        while (!t.nodes[node].is_leaf) {
            const GbtNode& nd = t.nodes[node];
            if (nd.feature >= d) throw DimensionMismatch("gbt_margin: feature index out of range");
            node = x[nd.feature] < nd.threshold ? nd.left : nd.right;
        }
        acc += m.learning_rate * t.nodes[node].value;
    }
    return acc;
}

inline std::vector<double> gbt_scores(const GbtModel& m, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        out[i] = 1.0 / (1.0 + std::exp(-gbt_margin(m, x.row(i), x.cols())));
    return out;
}

namespace detail {

struct GbtSplit {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

/// Best exact-greedy split for the samples in `lists` (per-feature index
/// lists sorted by feature value). Ties in gain keep the first candidate in
/// (feature, threshold) scan order.
inline GbtSplit find_split(const Matrix& x, const std::vector<double>& g,
                           const std::vector<double>& h,
                           const std::vector<std::vector<std::size_t>>& lists, double total_g,
                           double total_h, double lambda, double min_child_hessian) {
    GbtSplit best;
    const double parent_score = total_g * total_g / (total_h + lambda);
    for (std::size_t f = 0; f < lists.size(); ++f) {
        const auto& idx = lists[f];
        double gl = 0.0, hl = 0.0;
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            const std::size_t i = idx[k];
            gl += g[i];
            hl += h[i];
            const double v = x(i, f);
            const double vnext = x(idx[k + 1], f);
            if (v == vnext) continue;  // only between distinct values
            const double hr = total_h - hl;
            if (hl < min_child_hessian || hr < min_child_hessian) continue;
            const double gr = total_g - gl;
            const double gain =
                0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent_score);
            if (gain > best.gain) {
                best.found = true;
                best.feature = f;
                best.threshold = 0.5 * (v + vnext);
                best.gain = gain;
            }
        }
    }
    if (best.gain <= 0.0) best.found = false;
    return best;
}

inline std::size_t build_gbt_node(const Matrix& x, const std::vector<double>& g,
                                  const std::vector<double>& h, GbtTree& tree,
                                  std::vector<std::vector<std::size_t>> lists, std::size_t depth,
                                  const GbtModel& cfg, std::vector<double>& margins) {
    double total_g = 0.0, total_h = 0.0;
    for (std::size_t i : lists[0]) {
        total_g += g[i];
        total_h += h[i];
    }
    const std::size_t id = tree.nodes.size();
    tree.nodes.emplace_back();
    tree.nodes[id].cover = total_h;

    GbtSplit split;
    if (depth < cfg.max_depth)
        split = find_split(x, g, h, lists, total_g, total_h, cfg.lambda, cfg.min_child_hessian);
    if (!split.found) {
        const double value = -total_g / (total_h + cfg.lambda);
        tree.nodes[id].value = value;
        for (std::size_t i : lists[0]) margins[i] += cfg.learning_rate * value;
        return id;
    }

    std::vector<std::vector<std::size_t>> left_lists(lists.size()), right_lists(lists.size());
    for (std::size_t f = 0; f < lists.size(); ++f) {
        for (std::size_t i : lists[f]) {
            if (x(i, split.feature) < split.threshold)
                left_lists[f].push_back(i);
            else
                right_lists[f].push_back(i);
        }
    }
    lists.clear();
    tree.nodes[id].is_leaf = false;
    tree.nodes[id].feature = split.feature;
    tree.nodes[id].threshold = split.threshold;
    tree.nodes[id].gain = split.gain;
    const std::size_t left = build_gbt_node(x, g, h, tree, std::move(left_lists), depth + 1, cfg, margins);
    const std::size_t right = build_gbt_node(x, g, h, tree, std::move(right_lists), depth + 1, cfg, margins);
    tree.nodes[id].left = left;
    tree.nodes[id].right = right;
    return id;
}

}  // namespace detail

inline GbtModel train_gbt(const Matrix& x, const std::vector<int>& labels, std::size_t rounds = 100,
                          std::size_t max_depth = 6, double learning_rate = 0.1,
                          double lambda = 1.0, double min_child_hessian = 1.0) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 4) throw TooFewSamples("train_gbt needs at least 4 rows");
    if (labels.size() != n) throw DimensionMismatch("train_gbt: label count mismatch");
    for (double v : x.data())
        if (!std::isfinite(v)) throw NonFiniteInput("train_gbt: non-finite feature");
    bool has0 = false, has1 = false;
    for (int l : labels) (l ? has1 : has0) = true;
    if (!has0 || !has1) throw SingleClass("train_gbt needs both classes");

    GbtModel m;
    m.rounds = rounds;
    m.max_depth = max_depth;
    m.learning_rate = learning_rate;
    m.lambda = lambda;
    m.min_child_hessian = min_child_hessian;

    // One sorted index list per feature, shared by every round; node building
    // partitions them stably so children stay sorted without re-sorting.
    std::vector<std::vector<std::size_t>> lists(d, std::vector<std::size_t>(n));
    for (std::size_t f = 0; f < d; ++f) {
        auto& idx = lists[f];
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
    }

    std::vector<double> margins(n, m.base_score);
    std::vector<double> g(n), h(n);
    for (std::size_t round = 0; round < rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = 1.0 / (1.0 + std::exp(-margins[i]));
            g[i] = p - (labels[i] ? 1.0 : 0.0);
            h[i] = p * (1.0 - p);
        }
        GbtTree tree;
        detail::build_gbt_node(x, g, h, tree, lists, 0, m, margins);
        m.trees.push_back(std::move(tree));
    }
    return m;
}

/// Mean logistic loss of the model's margins on (x, labels).
inline double gbt_loss(const GbtModel& m, const Matrix& x, const std::vector<int>& labels) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double margin = gbt_margin(m, x.row(i), x.cols());
        // log(1 + exp(-y*margin)) with y in {-1,+1}, stable form.
        const double z = labels[i] ? margin : -margin;
        loss += z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    }
    return loss / static_cast<double>(x.rows());
}

}  // namespace advfeat
