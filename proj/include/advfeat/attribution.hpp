#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/gbt.hpp"
#include "advfeat/matrix.hpp"
#include "advfeat/metrics.hpp"
#include "advfeat/model.hpp"
#include "advfeat/rng.hpp"

namespace advfeat {

/// Split-statistic importances of a boosted ensemble: per feature, weight is
/// the split count, cover the summed hessian mass at its split nodes, gain
/// the summed split gain, gain_avg the per-split average.
struct GbtImportance {
    std::vector<double> gain;
    std::vector<double> gain_avg;
    std::vector<double> cover;
    std::vector<double> weight;
};

inline GbtImportance gbt_importance(const GbtModel& m, std::size_t n_features) {
    GbtImportance imp;
    imp.gain.assign(n_features, 0.0);
    imp.gain_avg.assign(n_features, 0.0);
    imp.cover.assign(n_features, 0.0);
    imp.weight.assign(n_features, 0.0);
    for (const GbtTree& t : m.trees)
        for (const GbtNode& nd : t.nodes) {
            if (nd.is_leaf) continue;
            if (nd.feature >= n_features) throw DimensionMismatch("split feature out of range");
            imp.gain[nd.feature] += nd.gain;
            imp.cover[nd.feature] += nd.cover;
            imp.weight[nd.feature] += 1.0;
        }
    for (std::size_t f = 0; f < n_features; ++f)
        if (imp.weight[f] > 0.0) imp.gain_avg[f] = imp.gain[f] / imp.weight[f];
    return imp;
}

/// Importances of a wrapped detector, reported in full feature coordinates.
/// Masked-out features score 0.
inline GbtImportance gbt_importance(const DetectorModel& m, std::size_t n_features) {
    if (m.kind != ModelKind::gbt)
        throw WrongModelKind("split importances need a gbt model, got " + kind_name(m.kind));
    if (!m.mask) return gbt_importance(m.gbt, n_features);
    std::size_t masked_dim = 0;
    for (int v : *m.mask) masked_dim += v ? 1 : 0;
    const GbtImportance inner = gbt_importance(m.gbt, masked_dim);
    GbtImportance imp;
    imp.gain.assign(n_features, 0.0);
    imp.gain_avg.assign(n_features, 0.0);
    imp.cover.assign(n_features, 0.0);
    imp.weight.assign(n_features, 0.0);
    for (std::size_t full = 0, packed = 0; full < m.mask->size(); ++full) {
        if (!(*m.mask)[full]) continue;
        imp.gain[full] = inner.gain[packed];
        imp.gain_avg[full] = inner.gain_avg[packed];
        imp.cover[full] = inner.cover[packed];
        imp.weight[full] = inner.weight[packed];
        ++packed;
    }
    return imp;
}

/// Mean AUC drop when a feature's column is shuffled, over `repeats` seeded
/// permutations. Model-agnostic; slightly negative values are shuffle noise
/// and are reported unclipped.
inline std::vector<double> permutation_importance(const DetectorModel& m, const Matrix& x,
                                                  const std::vector<int>& y, std::size_t repeats,
                                                  std::uint64_t seed) {
    const double base = auc_midrank(predict_scores(m, x), y);
    std::vector<double> drops(x.cols(), 0.0);
    Matrix shuffled = x;
    std::vector<double> column(x.rows());
    for (std::size_t f = 0; f < x.cols(); ++f) {
        double mean_auc = 0.0;
        for (std::size_t rep = 0; rep < repeats; ++rep) {
            for (std::size_t i = 0; i < x.rows(); ++i) column[i] = x(i, f);
            Rng rng(derive_seed(seed, f, rep));
            rng.shuffle(column);
            for (std::size_t i = 0; i < x.rows(); ++i) shuffled(i, f) = column[i];
            mean_auc += auc_midrank(predict_scores(m, shuffled), y);
        }
        for (std::size_t i = 0; i < x.rows(); ++i) shuffled(i, f) = x(i, f);
        drops[f] = base - mean_auc / static_cast<double>(repeats);
    }
    return drops;
}

/// Mask selecting the k highest-importance features; ties prefer the lower
/// index. k >= size selects everything.
inline std::vector<int> reduce_features(const std::vector<double>& importances, std::size_t k) {
    const std::size_t n = importances.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (importances[a] != importances[b]) return importances[a] > importances[b];
        return a < b;
    });
    std::vector<int> mask(n, 0);
    for (std::size_t i = 0; i < std::min(k, n); ++i) mask[order[i]] = 1;
    return mask;
}

}  // namespace advfeat
