#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/matrix.hpp"
#include "advfeat/rng.hpp"

namespace advfeat {

/// Clean reference set for the distribution-shift score. Kernel is Gaussian
/// k(a,b) = exp(-|a-b|^2 / h^2) with h the median pairwise distance of the
/// reference (median heuristic). self_term caches (1/m^2) sum_ij k(ri,rj).
struct MmdReference {
    Matrix vectors;       // m x d standardized rows
    double bandwidth = 1.0;
    double self_term = 1.0;
    bool degenerate = false;  // all reference points coincided; bandwidth forced to 1
};

inline double squared_distance(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

/// Subsamples m of N rows without replacement (seeded), then precomputes the
/// median-heuristic bandwidth and the reference self term.
inline MmdReference build_reference(const Matrix& clean, std::size_t m, std::uint64_t seed) {
    const std::size_t n = clean.rows();
    const std::size_t d = clean.cols();
    if (n < 2) throw InsufficientReference("reference needs at least 2 clean rows");
    if (m < 2) m = 2;
    if (m > n) m = n;

    Rng rng(seed);
    const std::vector<std::size_t> pick = rng.choose(n, m);
    MmdReference ref;
    ref.vectors = Matrix(m, d);
    for (std::size_t i = 0; i < m; ++i)
        std::copy(clean.row(pick[i]), clean.row(pick[i]) + d, ref.vectors.row(i));

    std::vector<double> dist2;
    dist2.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            dist2.push_back(squared_distance(ref.vectors.row(i), ref.vectors.row(j), d));
    std::sort(dist2.begin(), dist2.end());
    double median;
    const std::size_t k = dist2.size();
    if (k % 2 == 1) {
        median = std::sqrt(dist2[k / 2]);
    } else {
        median = 0.5 * (std::sqrt(dist2[k / 2 - 1]) + std::sqrt(dist2[k / 2]));
    }
    if (median > 0.0) {
        ref.bandwidth = median;
    } else {
        ref.bandwidth = 1.0;
        ref.degenerate = true;
    }

    const double inv_h2 = 1.0 / (ref.bandwidth * ref.bandwidth);
    double ksum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            ksum += std::exp(-squared_distance(ref.vectors.row(i), ref.vectors.row(j), d) * inv_h2);
    ref.self_term = ksum / (static_cast<double>(m) * static_cast<double>(m));
    return ref;
}

/// One-sample-vs-set discrepancy:
/// sqrt(max(0, 1 - (2/m) sum_i k(x,ri) + self_term)), in [0, sqrt(2)].
inline double mmd_score(const double* x, std::size_t d, const MmdReference& ref) {
    if (d != ref.vectors.cols()) throw DimensionMismatch("mmd_score: dimension mismatch");
    const std::size_t m = ref.vectors.rows();
    const double inv_h2 = 1.0 / (ref.bandwidth * ref.bandwidth);
    double cross = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        cross += std::exp(-squared_distance(x, ref.vectors.row(i), d) * inv_h2);
    const double v = 1.0 - 2.0 / static_cast<double>(m) * cross + ref.self_term;
    return std::sqrt(std::max(0.0, v));
}

inline double mmd_score(const std::vector<double>& x, const MmdReference& ref) {
    return mmd_score(x.data(), x.size(), ref);
}

}  // namespace advfeat
