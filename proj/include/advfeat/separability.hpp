#pragma once

// Feature-space displacement of a clean/perturbed pair and the explicit
// hyperplane that separates the two points: w = phi' - phi,
// b = -w.phi - |w|^2/2, so f(phi) = -|w|^2/2 and f(phi') = +|w|^2/2.

#include <cmath>
#include <cstddef>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/feature_vector.hpp"
#include "advfeat/matrix.hpp"

namespace advfeat {

struct Displacement {
    double l2 = 0.0;
    double delta1 = 0.0;  // |change in HighFreqRatio|
    double delta2 = 0.0;  // |change in GradEntropy|
};

inline Displacement displacement(const std::vector<double>& phi_clean,
                                 const std::vector<double>& phi_adv) {
    if (phi_clean.size() != phi_adv.size() || phi_clean.size() <= kIndexGradEntropy)
        throw DimensionMismatch("displacement: vectors must share a full feature layout");
    Displacement d;
    double sum = 0.0;
    for (std::size_t i = 0; i < phi_clean.size(); ++i) {
        const double diff = phi_adv[i] - phi_clean[i];
        sum += diff * diff;
    }
    d.l2 = std::sqrt(sum);
    d.delta1 = std::fabs(phi_adv[kIndexHighFreqRatio] - phi_clean[kIndexHighFreqRatio]);
    d.delta2 = std::fabs(phi_adv[kIndexGradEntropy] - phi_clean[kIndexGradEntropy]);
    return d;
}

struct Separator {
    std::vector<double> w;
    double b = 0.0;
};

inline Separator construct_separator(const std::vector<double>& phi_clean,
                                     const std::vector<double>& phi_adv) {
    if (phi_clean.size() != phi_adv.size())
        throw DimensionMismatch("construct_separator: size mismatch");
    Separator s;
    s.w.resize(phi_clean.size());
    double norm2 = 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < phi_clean.size(); ++i) {
        s.w[i] = phi_adv[i] - phi_clean[i];
        norm2 += s.w[i] * s.w[i];
        dot += s.w[i] * phi_clean[i];
    }
    if (norm2 <= 0.0) throw ZeroDisplacement("construct_separator: coincident feature vectors");
    s.b = -dot - 0.5 * norm2;
    return s;
}

inline double separator_decision(const Separator& s, const std::vector<double>& phi) {
    if (phi.size() != s.w.size()) throw DimensionMismatch("separator_decision: size mismatch");
    double acc = s.b;
    for (std::size_t i = 0; i < phi.size(); ++i) acc += s.w[i] * phi[i];
    return acc;
}

/// Dataset-level diagnostic for the separation premise: mean pairwise
/// distance between classes divided by mean pairwise distance within classes.
/// Values well above 1 mean perturbation displacement dominates natural
/// variation.
inline double displacement_ratio(const Matrix& x, const std::vector<int>& y) {
    if (x.rows() != y.size()) throw DimensionMismatch("displacement_ratio: label count mismatch");
    double inter = 0.0, intra = 0.0;
    std::size_t n_inter = 0, n_intra = 0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = i + 1; j < x.rows(); ++j) {
            double sum = 0.0;
            for (std::size_t c = 0; c < x.cols(); ++c) {
                const double d = x(i, c) - x(j, c);
                sum += d * d;
            }
            const double dist = std::sqrt(sum);
            if (y[i] == y[j]) {
                intra += dist;
                ++n_intra;
            } else {
                inter += dist;
                ++n_inter;
            }
        }
    if (n_inter == 0 || n_intra == 0) throw SingleClass("displacement_ratio needs both classes");
    return (inter / static_cast<double>(n_inter)) / (intra / static_cast<double>(n_intra));
}

}  // namespace advfeat
