#pragma once

// Discrete Fourier transforms used by the spectral features and the bandpass
// perturbation. Power-of-two lengths take the iterative radix-2 path; other
// lengths (small test images) fall back to the O(n^2) direct sum. The forward
// transform is unnormalized, the inverse divides by the length.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace advfeat {
namespace detail {

constexpr double kPi = 3.14159265358979323846;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 transform; n must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

/// Direct O(n^2) transform for arbitrary lengths.
inline void dft_direct(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sgn * 2.0 * kPi * static_cast<double>(k * j % n) / static_cast<double>(n);
            acc += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    a = std::move(out);
}

inline void fft_any(std::vector<std::complex<double>>& a, bool inverse) {
    if (a.size() <= 1) return;
    if (is_pow2(a.size()))
        fft_radix2(a, inverse);
    else
        dft_direct(a, inverse);
}

}  // namespace detail

/// Unnormalized forward 2D DFT of an h x w row-major real grid.
/// F[u*w+v] = sum_{i,j} x(i,j) exp(-2*pi*I*(u*i/h + v*j/w)).
inline std::vector<std::complex<double>> dft2_complex(const std::vector<double>& x,
                                                      std::size_t h, std::size_t w) {
    std::vector<std::complex<double>> grid(h * w);
    for (std::size_t i = 0; i < h * w; ++i) grid[i] = x[i];
    std::vector<std::complex<double>> line;
    for (std::size_t r = 0; r < h; ++r) {
        line.assign(grid.begin() + static_cast<std::ptrdiff_t>(r * w),
                    grid.begin() + static_cast<std::ptrdiff_t>((r + 1) * w));
        detail::fft_any(line, false);
        std::copy(line.begin(), line.end(), grid.begin() + static_cast<std::ptrdiff_t>(r * w));
    }
    for (std::size_t c = 0; c < w; ++c) {
        line.resize(h);
        for (std::size_t r = 0; r < h; ++r) line[r] = grid[r * w + c];
        detail::fft_any(line, false);
        for (std::size_t r = 0; r < h; ++r) grid[r * w + c] = line[r];
    }
    return grid;
}

/// Inverse of dft2_complex; includes the 1/(h*w) normalization.
inline std::vector<std::complex<double>> idft2_complex(std::vector<std::complex<double>> grid,
                                                       std::size_t h, std::size_t w) {
    std::vector<std::complex<double>> line;
    for (std::size_t r = 0; r < h; ++r) {
        line.assign(grid.begin() + static_cast<std::ptrdiff_t>(r * w),
                    grid.begin() + static_cast<std::ptrdiff_t>((r + 1) * w));
        detail::fft_any(line, true);
        std::copy(line.begin(), line.end(), grid.begin() + static_cast<std::ptrdiff_t>(r * w));
    }
    for (std::size_t c = 0; c < w; ++c) {
        line.resize(h);
        for (std::size_t r = 0; r < h; ++r) line[r] = grid[r * w + c];
        detail::fft_any(line, true);
        for (std::size_t r = 0; r < h; ++r) grid[r * w + c] = line[r];
    }
    const double norm = 1.0 / (static_cast<double>(h) * static_cast<double>(w));
    for (auto& v : grid) v *= norm;
    return grid;
}

}  // namespace advfeat
