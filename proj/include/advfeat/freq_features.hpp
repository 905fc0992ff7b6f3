#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/fft.hpp"
#include "advfeat/image.hpp"
#include "advfeat/matrix.hpp"

namespace advfeat {

/// Centered magnitude/power spectrum. DC sits at (h/2, w/2) after the
/// standard quadrant swap; power(i,j) = magnitude(i,j)^2 everywhere.
struct Spectrum {
    std::size_t height = 0;
    std::size_t width = 0;
    Matrix magnitude;
    Matrix power;
};

enum class Band { low, mid, high };

// Band thresholds on the normalized radius: low <= 1/8 < mid <= 1/2 < high.
inline constexpr double kLowBandRadius = 0.125;
inline constexpr double kMidBandRadius = 0.5;

/// Normalized radius in [0,1] of a centered-spectrum offset (du,dv).
inline double band_radius(double du, double dv, std::size_t h, std::size_t w) {
    const double ry = du / (static_cast<double>(h) / 2.0);
    const double rx = dv / (static_cast<double>(w) / 2.0);
    return std::sqrt(ry * ry + rx * rx) / std::sqrt(2.0);
}

inline Band band_of(double du, double dv, std::size_t h, std::size_t w) {
    const double r = band_radius(du, dv, h, w);
    if (r <= kLowBandRadius) return Band::low;
    if (r <= kMidBandRadius) return Band::mid;
    return Band::high;
}

/// Forward unnormalized 2D DFT of the image, centered. Total power obeys
/// Parseval: sum(power) = H*W*sum(x^2).
inline Spectrum dft2(const GrayImage& img) {
    const std::size_t h = img.height();
    const std::size_t w = img.width();
    if (h < 2 || w < 2) throw ImageTooSmall("dft2 needs at least 2x2");
    const auto grid = dft2_complex(img.pixels(), h, w);
    Spectrum s;
    s.height = h;
    s.width = w;
    s.magnitude = Matrix(h, w);
    s.power = Matrix(h, w);
    for (std::size_t u = 0; u < h; ++u) {
        const std::size_t cu = (u + h / 2) % h;
        for (std::size_t v = 0; v < w; ++v) {
            const std::size_t cv = (v + w / 2) % w;
            const std::complex<double>& f = grid[u * w + v];
            const double p = f.real() * f.real() + f.imag() * f.imag();
            s.power(cu, cv) = p;
            s.magnitude(cu, cv) = std::sqrt(p);
        }
    }
    return s;
}

/// The nine spectral features, in the canonical order:
/// LowFreqRatio, MidFreqRatio, HighFreqRatio, HighFreqConcentration,
/// HighFreqMeanMag, FreqEntropy, FreqSkewness, FreqKurtosis, FreqContrast.
/// A zero-power spectrum takes the degenerate convention (1,0,0,0,0,0,0,0,0).
inline std::array<double, 9> frequency_features(const Spectrum& s) {
    const std::size_t h = s.height;
    const std::size_t w = s.width;
    const long ch = static_cast<long>(h / 2);
    const long cw = static_cast<long>(w / 2);
    double total = 0.0;
    double band_power[3] = {0.0, 0.0, 0.0};
    double high_mag_sum = 0.0;
    std::size_t high_count = 0;
    double high_sq_sum = 0.0;  // sum of squared band powers, for concentration
    for (std::size_t u = 0; u < h; ++u) {
        for (std::size_t v = 0; v < w; ++v) {
            const double du = static_cast<double>(static_cast<long>(u) - ch);
            const double dv = static_cast<double>(static_cast<long>(v) - cw);
            const Band b = band_of(du, dv, h, w);
            const double p = s.power(u, v);
            total += p;
            band_power[static_cast<int>(b)] += p;
            if (b == Band::high) {
                high_mag_sum += s.magnitude(u, v);
                high_sq_sum += p * p;
                ++high_count;
            }
        }
    }
    std::array<double, 9> out{};
    if (total <= 0.0) {
        out[0] = 1.0;  // degenerate-spectrum convention
        return out;
    }
    out[0] = band_power[0] / total;
    out[1] = band_power[1] / total;
    out[2] = band_power[2] / total;
    const double high = band_power[2];
    out[3] = high > 0.0 ? high_sq_sum / (high * high) : 0.0;
    out[4] = high_count > 0 ? high_mag_sum / static_cast<double>(high_count) : 0.0;

    // Spectral entropy of the normalized power distribution, in [0,1].
    double entropy = 0.0;
    for (std::size_t i = 0; i < h * w; ++i) {
        const double p = s.power.data()[i] / total;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    out[5] = entropy / std::log(static_cast<double>(h * w));

    // Moments of the log magnitude L = ln(1+|F|), population convention.
    const double n = static_cast<double>(h * w);
    double mean = 0.0;
    for (std::size_t i = 0; i < h * w; ++i) mean += std::log1p(s.magnitude.data()[i]);
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < h * w; ++i) {
        const double d = std::log1p(s.magnitude.data()[i]) - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const double sd = std::sqrt(m2);
    if (sd > 0.0) {
        out[6] = m3 / (sd * sd * sd);
        out[7] = m4 / (m2 * m2) - 3.0;  // excess kurtosis
        out[8] = sd;
    }
    return out;
}

}  // namespace advfeat
