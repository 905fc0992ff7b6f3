#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/feature_vector.hpp"
#include "advfeat/freq_features.hpp"
#include "advfeat/image.hpp"
#include "advfeat/matrix.hpp"
#include "advfeat/mmd.hpp"
#include "advfeat/spatial_features.hpp"

namespace advfeat {

/// The 50 structural features (everything except the MMD dimension), in the
/// canonical order: 9 spectral, 3 gradient stats, 36 orientation bins,
/// edge density, texture response.
inline std::array<double, 50> extract_raw50(const GrayImage& img) {
    std::array<double, 50> out{};
    const auto freq = frequency_features(dft2(img));
    const GradientField field = sobel(img);
    const auto grad = gradient_features(field);
    std::copy(freq.begin(), freq.end(), out.begin());
    std::copy(grad.begin(), grad.end(), out.begin() + 9);
    out[48] = edge_density(field);
    out[49] = texture_response_mean(img);
    return out;
}

/// Per-column standardization statistics. Columns with zero variance keep
/// std 1 and are listed in constant_columns (the transform is then identity
/// up to the mean shift).
struct ScalerState {
    std::vector<double> mean;
    std::vector<double> std;
    std::vector<std::size_t> constant_columns;
};

/// Column means and population standard deviations of X.
inline ScalerState fit_scaler(const Matrix& x) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 2) throw TooFewSamples("fit_scaler needs at least 2 rows");
    ScalerState s;
    s.mean.assign(d, 0.0);
    s.std.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += x(i, j);
    for (std::size_t j = 0; j < d; ++j) s.mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x(i, j) - s.mean[j];
            s.std[j] += diff * diff;
        }
    for (std::size_t j = 0; j < d; ++j) {
        s.std[j] = std::sqrt(s.std[j] / static_cast<double>(n));
        if (s.std[j] <= 0.0) {
            s.std[j] = 1.0;
            s.constant_columns.push_back(j);
        }
    }
    return s;
}

inline void standardize_inplace(Matrix& x, const ScalerState& s) {
    if (x.cols() != s.mean.size()) throw DimensionMismatch("standardize: column count mismatch");
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            x(i, j) = (x(i, j) - s.mean[j]) / s.std[j];
}

inline void unstandardize_inplace(Matrix& x, const ScalerState& s) {
    if (x.cols() != s.mean.size()) throw DimensionMismatch("unstandardize: column count mismatch");
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            x(i, j) = x(i, j) * s.std[j] + s.mean[j];
}

struct DatasetFeatures {
    Matrix features;      // N x 51, standardized
    ScalerState scaler;   // 51 entries (structural stats + MMD column stats)
    MmdReference reference;
};

inline constexpr std::size_t kDefaultReferenceCap = 500;

/// Two-stage fusion over extracted raw features:
///   1. fit the 50-dim scaler on training rows and standardize everything,
///   2. build the MMD reference from standardized clean training rows,
///   3. score every row to fill column 50,
///   4. fit mean/std of column 50 on training rows and standardize it.
/// Held-out rows are always transformed with training statistics.
inline DatasetFeatures build_dataset(const Matrix& raw50, const std::vector<int>& labels,
                                     const std::vector<char>& is_train, std::uint64_t seed,
                                     std::size_t m_cap = kDefaultReferenceCap) {
    const std::size_t n = raw50.rows();
    if (raw50.cols() != 50) throw DimensionMismatch("build_dataset expects 50 raw columns");
    if (labels.size() != n || is_train.size() != n)
        throw DimensionMismatch("build_dataset: labels/split size mismatch");

    std::size_t n_train = 0;
    for (char t : is_train) n_train += t ? 1 : 0;
    Matrix train50(n_train, 50);
    for (std::size_t i = 0, r = 0; i < n; ++i) {
        if (!is_train[i]) continue;
        std::copy(raw50.row(i), raw50.row(i) + 50, train50.row(r++));
    }
    ScalerState scaler50 = fit_scaler(train50);

    Matrix std50 = raw50;
    standardize_inplace(std50, scaler50);

    std::size_t n_ref = 0;
    for (std::size_t i = 0; i < n; ++i) n_ref += (is_train[i] && labels[i] == 0) ? 1 : 0;
    if (n_ref < 2) throw InsufficientReference("need at least 2 clean training rows");
    Matrix clean_train(n_ref, 50);
    for (std::size_t i = 0, r = 0; i < n; ++i) {
        if (!(is_train[i] && labels[i] == 0)) continue;
        std::copy(std50.row(i), std50.row(i) + 50, clean_train.row(r++));
    }
    MmdReference ref = build_reference(clean_train, std::min(m_cap, n_ref), seed);

    std::vector<double> mmd_col(n);
    for (std::size_t i = 0; i < n; ++i) mmd_col[i] = mmd_score(std50.row(i), 50, ref);

    // Column-50 statistics over training rows (population convention again).
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (is_train[i]) mean += mmd_col[i];
    mean /= static_cast<double>(n_train);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (is_train[i]) {
            const double d = mmd_col[i] - mean;
            var += d * d;
        }
    double sd = std::sqrt(var / static_cast<double>(n_train));

    DatasetFeatures out;
    out.scaler.mean = scaler50.mean;
    out.scaler.std = scaler50.std;
    out.scaler.constant_columns = scaler50.constant_columns;
    out.scaler.mean.push_back(mean);
    if (sd <= 0.0) {
        sd = 1.0;
        out.scaler.constant_columns.push_back(kIndexMmdScore);
    }
    out.scaler.std.push_back(sd);

    out.features = Matrix(n, kFeatureCount);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(std50.row(i), std50.row(i) + 50, out.features.row(i));
        out.features(i, kIndexMmdScore) = (mmd_col[i] - mean) / sd;
    }
    out.reference = std::move(ref);
    return out;
}

/// Evaluation-mode transform: standardize raw 50-dim rows with a stored
/// 51-entry scaler, score the MMD column, and standardize it too.
inline Matrix apply_pipeline(const Matrix& raw50, const ScalerState& scaler,
                             const MmdReference& ref) {
    if (raw50.cols() != 50) throw DimensionMismatch("apply_pipeline expects 50 raw columns");
    if (scaler.mean.size() != kFeatureCount)
        throw DimensionMismatch("apply_pipeline expects a 51-entry scaler");
    const std::size_t n = raw50.rows();
    Matrix out(n, kFeatureCount);
    std::vector<double> row(50);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 50; ++j)
            row[j] = (raw50(i, j) - scaler.mean[j]) / scaler.std[j];
        std::copy(row.begin(), row.end(), out.row(i));
        const double m = mmd_score(row.data(), 50, ref);
        out(i, kIndexMmdScore) = (m - scaler.mean[kIndexMmdScore]) / scaler.std[kIndexMmdScore];
    }
    return out;
}

}  // namespace advfeat
