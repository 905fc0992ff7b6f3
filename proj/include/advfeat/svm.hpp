#pragma once

// Gaussian-kernel SVM trained with the simplified SMO scheme: sweep all
// examples, pick the partner index at random (seeded), update the pair
// analytically, repeat until a full sweep changes nothing or the pass budget
// runs out.

#include <cmath>
#include <cstdint>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/matrix.hpp"
#include "advfeat/rng.hpp"

namespace advfeat {

struct SvmModel {
    Matrix support_vectors;          // s x d
    std::vector<double> dual_coef;   // alpha_i * y_i, y in {-1,+1}
    double bias = 0.0;
    double gamma = 0.0;
    double c = 1.0;
    double tol = 1e-3;
    std::size_t max_passes = 200;
    std::size_t passes_used = 0;
    bool converged = false;
};

inline double svm_decision(const SvmModel& m, const double* x, std::size_t d) {
    if (d != m.support_vectors.cols()) throw DimensionMismatch("svm_decision: dimension mismatch");
    double acc = m.bias;
    for (std::size_t i = 0; i < m.support_vectors.rows(); ++i) {
        double dist2 = 0.0;
        const double* sv = m.support_vectors.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - sv[j];
            dist2 += diff * diff;
        }
        acc += m.dual_coef[i] * std::exp(-m.gamma * dist2);
    }
    return acc;
}

/// Trains with C-SVC hinge dual. gamma <= 0 selects the 1/d default.
inline SvmModel train_svm(const Matrix& x, const std::vector<int>& labels, double c = 1.0,
                          double gamma = 0.0, double tol = 1e-3, std::size_t max_passes = 200,
                          std::uint64_t seed = 0) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 4) throw TooFewSamples("train_svm needs at least 4 rows");
    if (labels.size() != n) throw DimensionMismatch("train_svm: label count mismatch");
    for (double v : x.data())
        if (!std::isfinite(v)) throw NonFiniteInput("train_svm: non-finite feature");
    bool has0 = false, has1 = false;
    for (int l : labels) (l ? has1 : has0) = true;
    if (!has0 || !has1) throw SingleClass("train_svm needs both classes");
    if (gamma <= 0.0) gamma = 1.0 / static_cast<double>(d);

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] ? 1.0 : -1.0;

    // Precomputed Gram matrix; training sets here are small.
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double dist2 = 0.0;
            for (std::size_t f = 0; f < d; ++f) {
                const double diff = x(i, f) - x(j, f);
                dist2 += diff * diff;
            }
            const double v = std::exp(-gamma * dist2);
            k(i, j) = v;
            k(j, i) = v;
        }
    }

    std::vector<double> alpha(n, 0.0);
    double b = 0.0;
    Rng rng(seed);
    auto decision = [&](std::size_t i) {
        double acc = b;
        for (std::size_t j = 0; j < n; ++j)
            if (alpha[j] > 0.0) acc += alpha[j] * y[j] * k(i, j);
        return acc;
    };

    std::size_t pass = 0;
    bool converged = false;
    for (; pass < max_passes && !converged; ++pass) {
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = decision(i) - y[i];
            const bool violates = (y[i] * ei < -tol && alpha[i] < c) ||
                                  (y[i] * ei > tol && alpha[i] > 0.0);
            if (!violates) continue;
            std::size_t j = static_cast<std::size_t>(rng.below(n - 1));
            if (j >= i) ++j;
            const double ej = decision(j) - y[j];
            const double ai_old = alpha[i];
            const double aj_old = alpha[j];
            double lo, hi;
            if (y[i] != y[j]) {
                lo = std::max(0.0, aj_old - ai_old);
                hi = std::min(c, c + aj_old - ai_old);
            } else {
                lo = std::max(0.0, ai_old + aj_old - c);
                hi = std::min(c, ai_old + aj_old);
            }
            if (lo >= hi) continue;
            const double eta = 2.0 * k(i, j) - k(i, i) - k(j, j);
            if (eta >= 0.0) continue;
            double aj = aj_old - y[j] * (ei - ej) / eta;
            aj = std::min(hi, std::max(lo, aj));
            if (std::fabs(aj - aj_old) < 1e-5) continue;
            const double ai = ai_old + y[i] * y[j] * (aj_old - aj);
            alpha[i] = ai;
            alpha[j] = aj;
            const double b1 = b - ei - y[i] * (ai - ai_old) * k(i, i) - y[j] * (aj - aj_old) * k(i, j);
            const double b2 = b - ej - y[i] * (ai - ai_old) * k(i, j) - y[j] * (aj - aj_old) * k(j, j);
            if (ai > 0.0 && ai < c)
                b = b1;
            else if (aj > 0.0 && aj < c)
                b = b2;
            else
                b = 0.5 * (b1 + b2);
            ++changed;
        }
        if (changed == 0) converged = true;
    }

    SvmModel m;
    m.gamma = gamma;
    m.c = c;
    m.tol = tol;
    m.max_passes = max_passes;
    m.passes_used = pass;
    m.converged = converged;
    m.bias = b;
    std::size_t sv_count = 0;
    for (double a : alpha) sv_count += a > 1e-12 ? 1 : 0;
    m.support_vectors = Matrix(sv_count, d);
    m.dual_coef.reserve(sv_count);
    for (std::size_t i = 0, r = 0; i < n; ++i) {
        if (alpha[i] <= 1e-12) continue;
        std::copy(x.row(i), x.row(i) + d, m.support_vectors.row(r++));
        m.dual_coef.push_back(alpha[i] * y[i]);
    }
    return m;
}

inline std::vector<double> svm_scores(const SvmModel& m, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        out[i] = 1.0 / (1.0 + std::exp(-svm_decision(m, x.row(i), x.cols())));
    return out;
}

}  // namespace advfeat
