// Independent reference implementations used only by the tests. These favor
// the most literal transcription of each definition over speed, so agreement
// with the library is evidence rather than tautology.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "advfeat/image.hpp"
#include "advfeat/matrix.hpp"

namespace oracle {

// Quadruple-loop DFT straight from the defining sum, no recursion, no
// factorization.
inline std::vector<std::complex<double>> dft2_naive(const advfeat::GrayImage& img) {
    const std::size_t h = img.height(), w = img.width();
    std::vector<std::complex<double>> out(h * w);
    for (std::size_t u = 0; u < h; ++u) {
        for (std::size_t v = 0; v < w; ++v) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t y = 0; y < h; ++y) {
                for (std::size_t x = 0; x < w; ++x) {
                    const double ang =
                        -2.0 * M_PI *
                        (static_cast<double>(u) * static_cast<double>(y) / static_cast<double>(h) +
                         static_cast<double>(v) * static_cast<double>(x) / static_cast<double>(w));
                    acc += img.pixels()[y * w + x] * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            }
            out[u * w + v] = acc;
        }
    }
    return out;
}

// Sobel via explicit 3x3 loop with clamped indexing.
inline void sobel_naive(const advfeat::GrayImage& img, std::vector<double>& gx,
                        std::vector<double>& gy) {
    static const double kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    static const double ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(img.height());
    const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(img.width());
    gx.assign(static_cast<std::size_t>(h * w), 0.0);
    gy.assign(static_cast<std::size_t>(h * w), 0.0);
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double sx = 0.0, sy = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const std::ptrdiff_t yy = std::clamp<std::ptrdiff_t>(y + dy, 0, h - 1);
                    const std::ptrdiff_t xx = std::clamp<std::ptrdiff_t>(x + dx, 0, w - 1);
                    const double p = img.pixels()[static_cast<std::size_t>(yy * w + xx)];
                    sx += kx[dy + 1][dx + 1] * p;
                    sy += ky[dy + 1][dx + 1] * p;
                }
            }
            gx[static_cast<std::size_t>(y * w + x)] = sx;
            gy[static_cast<std::size_t>(y * w + x)] = sy;
        }
    }
}

// Dense Gabor correlation: build each kernel pointwise, subtract its mean,
// slide it with replicate padding. Quadratic in the kernel radius and image
// size, fine for tests.
inline double gabor_mean_abs_naive(const advfeat::GrayImage& img, double theta_deg, double lambda) {
    const double sigma = 0.5 * lambda;
    const int r = static_cast<int>(std::ceil(2.0 * sigma));
    const int k = 2 * r + 1;
    const double th = theta_deg * M_PI / 180.0;
    std::vector<double> ker(static_cast<std::size_t>(k) * k);
    double mean = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double xr = dx * std::cos(th) + dy * std::sin(th);
            const double yr = -dx * std::sin(th) + dy * std::cos(th);
            const double env = std::exp(-(xr * xr + yr * yr) / (2.0 * sigma * sigma));
            const double val = env * std::cos(2.0 * M_PI * xr / lambda);
            ker[static_cast<std::size_t>((dy + r) * k + (dx + r))] = val;
            mean += val;
        }
    }
    mean /= static_cast<double>(k) * k;
    for (double& v : ker) v -= mean;

    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(img.height());
    const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(img.width());
    double acc = 0.0;
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double s = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const std::ptrdiff_t yy = std::clamp<std::ptrdiff_t>(y + dy, 0, h - 1);
                    const std::ptrdiff_t xx = std::clamp<std::ptrdiff_t>(x + dx, 0, w - 1);
                    s += ker[static_cast<std::size_t>((dy + r) * k + (dx + r))] *
                         img.pixels()[static_cast<std::size_t>(yy * w + xx)];
                }
            }
            acc += std::abs(s);
        }
    }
    return acc / (static_cast<double>(h) * static_cast<double>(w));
}

// MMD by the full double sums, no caching of anything.
inline double mmd_naive(const std::vector<double>& x, const std::vector<std::vector<double>>& ref,
                        double bandwidth) {
    const std::size_t m = ref.size();
    auto k = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
        return std::exp(-d2 / (bandwidth * bandwidth));
    };
    double cross = 0.0;
    for (const auto& r : ref) cross += k(x, r);
    double self = 0.0;
    for (const auto& a : ref)
        for (const auto& b : ref) self += k(a, b);
    const double v = 1.0 - 2.0 / static_cast<double>(m) * cross +
                     self / (static_cast<double>(m) * static_cast<double>(m));
    return std::sqrt(std::max(0.0, v));
}

// AUC by brute-force pair counting with half credit for ties.
inline double auc_pairs(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t np = 0, nn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        ++np;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] == 1) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    for (int l : labels)
        if (l != 1) ++nn;
    return wins / (static_cast<double>(np) * static_cast<double>(nn));
}

// Bilinear sample at fractional source coordinates with clamping, matching
// the center-aligned mapping.
inline double bilinear_at(const advfeat::GrayImage& img, double sy, double sx) {
    const auto h = static_cast<std::ptrdiff_t>(img.height());
    const auto w = static_cast<std::ptrdiff_t>(img.width());
    sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
    sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
    const auto y0 = static_cast<std::ptrdiff_t>(std::floor(sy));
    const auto x0 = static_cast<std::ptrdiff_t>(std::floor(sx));
    const auto y1 = std::min(y0 + 1, h - 1);
    const auto x1 = std::min(x0 + 1, w - 1);
    const double fy = sy - static_cast<double>(y0);
    const double fx = sx - static_cast<double>(x0);
    const auto at = [&](std::ptrdiff_t y, std::ptrdiff_t x) {
        return img.pixels()[static_cast<std::size_t>(y * w + x)];
    };
    return (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x1)) +
           fy * ((1 - fx) * at(y1, x0) + fx * at(y1, x1));
}

// Finite-difference gradient of a scalar function of one parameter.
template <typename F>
double central_diff(F f, double& param, double eps = 1e-6) {
    const double saved = param;
    param = saved + eps;
    const double up = f();
    param = saved - eps;
    const double down = f();
    param = saved;
    return (up - down) / (2.0 * eps);
}

}  // namespace oracle
