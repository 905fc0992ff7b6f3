#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/image.hpp"
#include "advfeat/matrix.hpp"

namespace advfeat {

/// Per-pixel Sobel responses. Orientation is atan2(gy,gx) in degrees mapped
/// to [0,360) and is only meaningful where magnitude > 1e-8.
struct GradientField {
    Matrix gx;
    Matrix gy;
    Matrix magnitude;
};

inline constexpr double kGradMagnitudeFloor = 1e-8;

/// 3x3 Sobel with replicate border padding. The x kernel rows are
/// [-1,0,1; -2,0,2; -1,0,1] applied as correlation; y is its transpose.
inline GradientField sobel(const GrayImage& img) {
    const std::size_t h = img.height();
    const std::size_t w = img.width();
    if (h < 3 || w < 3) throw ImageTooSmall("sobel needs at least 3x3");
    GradientField f{Matrix(h, w), Matrix(h, w), Matrix(h, w)};
    for (std::size_t y = 0; y < h; ++y) {
        const std::size_t ym = y == 0 ? 0 : y - 1;
        const std::size_t yp = y + 1 >= h ? h - 1 : y + 1;
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t xm = x == 0 ? 0 : x - 1;
            const std::size_t xp = x + 1 >= w ? w - 1 : x + 1;
            const double tl = img(ym, xm), tc = img(ym, x), tr = img(ym, xp);
            const double ml = img(y, xm), mr = img(y, xp);
            const double bl = img(yp, xm), bc = img(yp, x), br = img(yp, xp);
            const double gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
            const double gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
            f.gx(y, x) = gx;
            f.gy(y, x) = gy;
            f.magnitude(y, x) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return f;
}

/// Orientation of one gradient sample in degrees, [0,360).
inline double orientation_deg(double gx, double gy) {
    double deg = std::atan2(gy, gx) * (180.0 / 3.14159265358979323846);
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg = 0.0;
    return deg;
}

/// The 39 gradient features: GradMean, GradStd, GradEntropy, then the 36-bin
/// magnitude-weighted orientation histogram (10 degree bins, sums to 1).
/// Pixels with magnitude <= 1e-8 are excluded from the histogram; when none
/// qualify the histogram falls back to uniform 1/36.
inline std::array<double, 39> gradient_features(const GradientField& f) {
    const std::size_t n = f.magnitude.data().size();
    std::array<double, 39> out{};

    double mean = 0.0, maxmag = 0.0;
    for (double m : f.magnitude.data()) {
        mean += m;
        if (m > maxmag) maxmag = m;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double m : f.magnitude.data()) {
        const double d = m - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    out[0] = mean;
    out[1] = std::sqrt(var);

    // 64-bin magnitude histogram over [0, max], Shannon entropy / ln 64.
    if (maxmag > 0.0) {
        std::array<double, 64> hist{};
        for (double m : f.magnitude.data()) {
            std::size_t b = static_cast<std::size_t>(m / maxmag * 64.0);
            if (b > 63) b = 63;
            hist[b] += 1.0;
        }
        double entropy = 0.0;
        for (double c : hist) {
            if (c > 0.0) {
                const double p = c / static_cast<double>(n);
                entropy -= p * std::log(p);
            }
        }
        out[2] = entropy / std::log(64.0);
    }

    double obins[36] = {};
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = f.magnitude.data()[i];
        if (m <= kGradMagnitudeFloor) continue;
        const double deg = orientation_deg(f.gx.data()[i], f.gy.data()[i]);
        std::size_t b = static_cast<std::size_t>(deg / 10.0);
        if (b > 35) b = 35;
        obins[b] += m;
        wsum += m;
    }
    for (std::size_t b = 0; b < 36; ++b)
        out[3 + b] = wsum > 0.0 ? obins[b] / wsum : 1.0 / 36.0;
    return out;
}

/// Fraction of pixels whose gradient magnitude exceeds mean + one std.
inline double edge_density(const GradientField& f) {
    const std::size_t n = f.magnitude.data().size();
    double mean = 0.0;
    for (double m : f.magnitude.data()) mean += m;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double m : f.magnitude.data()) {
        const double d = m - mean;
        var += d * d;
    }
    const double thr = mean + std::sqrt(var / static_cast<double>(n));
    std::size_t count = 0;
    for (double m : f.magnitude.data()) {
        if (m > thr) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(n);
}

namespace detail {

/// Box sum of the (2r+1)^2 window around each pixel with replicate clamping,
/// via per-axis prefix sums. Out-of-range taps repeat the edge sample.
inline Matrix box_sum_replicate(const Matrix& src, std::size_t r) {
    const std::size_t h = src.rows();
    const std::size_t w = src.cols();
    Matrix rowsum(h, w);
    std::vector<double> prefix(w + 1);
    for (std::size_t y = 0; y < h; ++y) {
        prefix[0] = 0.0;
        for (std::size_t x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + src(y, x);
        const long lr = static_cast<long>(r);
        for (long x = 0; x < static_cast<long>(w); ++x) {
            const long lo = x - lr;
            const long hi = x + lr;
            const long clo = lo < 0 ? 0 : lo;
            const long chi = hi >= static_cast<long>(w) ? static_cast<long>(w) - 1 : hi;
            double s = prefix[chi + 1] - prefix[clo];
            if (lo < 0) s += static_cast<double>(-lo) * src(y, 0);
            if (hi >= static_cast<long>(w)) s += static_cast<double>(hi - (static_cast<long>(w) - 1)) * src(y, w - 1);
            rowsum(y, static_cast<std::size_t>(x)) = s;
        }
    }
    Matrix out(h, w);
    std::vector<double> colprefix(h + 1);
    for (std::size_t x = 0; x < w; ++x) {
        colprefix[0] = 0.0;
        for (std::size_t y = 0; y < h; ++y) colprefix[y + 1] = colprefix[y] + rowsum(y, x);
        const long lr = static_cast<long>(r);
        for (long y = 0; y < static_cast<long>(h); ++y) {
            const long lo = y - lr;
            const long hi = y + lr;
            const long clo = lo < 0 ? 0 : lo;
            const long chi = hi >= static_cast<long>(h) ? static_cast<long>(h) - 1 : hi;
            double s = colprefix[chi + 1] - colprefix[clo];
            if (lo < 0) s += static_cast<double>(-lo) * rowsum(0, x);
            if (hi >= static_cast<long>(h)) s += static_cast<double>(hi - (static_cast<long>(h) - 1)) * rowsum(h - 1, x);
            out(static_cast<std::size_t>(y), x) = s;
        }
    }
    return out;
}

}  // namespace detail

/// Mean absolute response over a bank of 8 zero-mean Gabor filters:
/// orientations {0,45,90,135} degrees x wavelengths {4,8} px, sigma = lambda/2,
/// unit aspect, phase 0, kernel half-width ceil(2*sigma), replicate padding.
///
/// The aspect-1 envelope is isotropic, so each kernel factorizes as
/// K(dy,dx) = Re[u(dx) v(dy)] with u(t) = exp(-t^2/2s^2) exp(i w cos(th) t)
/// and v(t) = exp(-t^2/2s^2) exp(i w sin(th) t); the convolution runs as two
/// 1-D complex passes. The zero-mean adjustment (K - mean(K)) is applied as
/// response - mean(K) * boxsum, which is exact under replicate padding.
inline double texture_response_mean(const GrayImage& img) {
    static const double thetas[4] = {0.0, 45.0, 90.0, 135.0};
    static const double lambdas[2] = {4.0, 8.0};
    const std::size_t h = img.height();
    const std::size_t w = img.width();
    const std::size_t rmax = static_cast<std::size_t>(std::ceil(2.0 * 0.5 * lambdas[1]));
    if (h < 2 * rmax + 1 || w < 2 * rmax + 1)
        throw ImageTooSmall("texture_response_mean needs the full largest kernel");

    Matrix src(h, w);
    src.data() = img.pixels();
    double feature_sum = 0.0;
    for (double lambda : lambdas) {
        const double sigma = 0.5 * lambda;
        const std::size_t r = static_cast<std::size_t>(std::ceil(2.0 * sigma));
        const std::size_t taps = 2 * r + 1;
        const Matrix box = detail::box_sum_replicate(src, r);
        const double omega = 2.0 * 3.14159265358979323846 / lambda;
        for (double theta : thetas) {
            const double rad = theta * 3.14159265358979323846 / 180.0;
            const double wx = omega * std::cos(rad);
            const double wy = omega * std::sin(rad);
            std::vector<std::complex<double>> u(taps), v(taps);
            std::complex<double> usum(0, 0), vsum(0, 0);
            for (std::size_t t = 0; t < taps; ++t) {
                const double d = static_cast<double>(t) - static_cast<double>(r);
                const double env = std::exp(-d * d / (2.0 * sigma * sigma));
                u[t] = env * std::complex<double>(std::cos(wx * d), std::sin(wx * d));
                v[t] = env * std::complex<double>(std::cos(wy * d), std::sin(wy * d));
                usum += u[t];
                vsum += v[t];
            }
            const double kernel_mean = (usum * vsum).real() / static_cast<double>(taps * taps);

            // Pass 1: complex correlation along x.
            Matrix a_re(h, w), a_im(h, w);
            for (std::size_t y = 0; y < h; ++y) {
                for (std::size_t x = 0; x < w; ++x) {
                    double sre = 0.0, sim = 0.0;
                    for (std::size_t t = 0; t < taps; ++t) {
                        long xx = static_cast<long>(x) + static_cast<long>(t) - static_cast<long>(r);
                        if (xx < 0) xx = 0;
                        if (xx >= static_cast<long>(w)) xx = static_cast<long>(w) - 1;
                        const double p = src(y, static_cast<std::size_t>(xx));
                        sre += u[t].real() * p;
                        sim += u[t].imag() * p;
                    }
                    a_re(y, x) = sre;
                    a_im(y, x) = sim;
                }
            }
            // Pass 2: along y, keeping only the real part of the product.
            double abs_sum = 0.0;
            for (std::size_t y = 0; y < h; ++y) {
                for (std::size_t x = 0; x < w; ++x) {
                    double resp = 0.0;
                    for (std::size_t t = 0; t < taps; ++t) {
                        long yy = static_cast<long>(y) + static_cast<long>(t) - static_cast<long>(r);
                        if (yy < 0) yy = 0;
                        if (yy >= static_cast<long>(h)) yy = static_cast<long>(h) - 1;
                        const std::size_t uy = static_cast<std::size_t>(yy);
                        resp += v[t].real() * a_re(uy, x) - v[t].imag() * a_im(uy, x);
                    }
                    resp -= kernel_mean * box(y, x);
                    abs_sum += std::fabs(resp);
                }
            }
            feature_sum += abs_sum / static_cast<double>(h * w);
        }
    }
    return feature_sum / 8.0;
}

}  // namespace advfeat
