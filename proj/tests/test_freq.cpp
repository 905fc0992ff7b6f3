#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "advfeat/freq_features.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace advfeat;

namespace {

double rel_err(double got, double want) {
    const double denom = std::max(1.0, std::abs(want));
    return std::abs(got - want) / denom;
}

}  // namespace

TEST_CASE("dft2 agrees with the quadruple-loop oracle") {
    // Mixed power-of-two and awkward sizes so both FFT paths are exercised.
    const std::pair<std::size_t, std::size_t> sizes[] = {{2, 2},  {4, 4},  {8, 8},  {16, 16},
                                                         {3, 5},  {7, 7},  {5, 8},  {16, 12},
                                                         {12, 16}, {6, 10}};
    std::size_t case_id = 0;
    for (const auto& [h, w] : sizes) {
        for (int rep = 0; rep < 5; ++rep) {
            const GrayImage img = testutil::random_image(h, w, 1000 + case_id);
            ++case_id;
            const auto want = oracle::dft2_naive(img);
            const Spectrum sp = dft2(img);
            double max_rel = 0.0;
            for (std::size_t u = 0; u < h; ++u) {
                for (std::size_t v = 0; v < w; ++v) {
                    // Spectrum is centered; undo the shift to compare.
                    const std::size_t su = (u + h / 2) % h;
                    const std::size_t sv = (v + w / 2) % w;
                    const double mag = std::abs(want[u * w + v]);
                    max_rel = std::max(max_rel, rel_err(sp.magnitude(su, sv), mag));
                }
            }
            REQUIRE(max_rel <= 1e-9);
        }
    }
}

TEST_CASE("parseval ties spectrum power to pixel energy") {
    const GrayImage img = testutil::random_image(16, 16, 5);
    const Spectrum sp = dft2(img);
    const double spec_power =
        std::accumulate(sp.power.data().begin(), sp.power.data().end(), 0.0);
    double pix_energy = 0.0;
    for (double p : img.pixels()) pix_energy += p * p;
    REQUIRE(spec_power == Catch::Approx(256.0 * pix_energy).epsilon(1e-10));
}

TEST_CASE("dc lands at the shifted center") {
    GrayImage img(8, 8, 0.0);
    img.pixels()[0] = 1.0;  // impulse: flat magnitude everywhere
    const Spectrum flat = dft2(img);
    for (double m : flat.magnitude.data()) REQUIRE(m == Catch::Approx(1.0).margin(1e-12));

    GrayImage c(8, 8, 0.5);
    const Spectrum sp = dft2(c);
    // All power at DC, which sits at (h/2, w/2) after the shift.
    for (std::size_t u = 0; u < 8; ++u)
        for (std::size_t v = 0; v < 8; ++v) {
            const double want = (u == 4 && v == 4) ? 0.5 * 64.0 : 0.0;
            REQUIRE(sp.magnitude(u, v) == Catch::Approx(want).margin(1e-10));
        }
}

TEST_CASE("band radii partition the plane and keep dc low") {
    // 256x256 grid: half-extent 128, radius normalized by sqrt(2).
    const std::size_t n = 256;
    REQUIRE(band_of(0.0, 0.0, n, n) == Band::low);  // DC
    // |du| = 16 on one axis: rho = (16/128)/sqrt(2) ~ 0.088 <= 1/8.
    REQUIRE(band_of(16.0, 0.0, n, n) == Band::low);
    // Diagonal (16,16): rho = 0.125 exactly, still low.
    REQUIRE(band_of(16.0, 16.0, n, n) == Band::low);
    REQUIRE(band_of(17.0, 16.0, n, n) == Band::mid);
    // Diagonal (64,64): rho = 0.5 exactly, still mid.
    REQUIRE(band_of(64.0, 64.0, n, n) == Band::mid);
    REQUIRE(band_of(65.0, 64.0, n, n) == Band::high);
    // Extreme corner (-128,-128): rho = 1.
    REQUIRE(band_radius(-128.0, -128.0, n, n) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(band_of(-128.0, -128.0, n, n) == Band::high);
}

TEST_CASE("band ratios sum to one on random images") {
    for (int rep = 0; rep < 20; ++rep) {
        const GrayImage img = testutil::random_image(16, 16, 40 + rep);
        const auto f = frequency_features(dft2(img));
        REQUIRE(f[0] + f[1] + f[2] == Catch::Approx(1.0).margin(1e-9));
        REQUIRE(f[0] >= 0.0);
        REQUIRE(f[1] >= 0.0);
        REQUIRE(f[2] >= 0.0);
        REQUIRE(f[5] >= 0.0);  // entropy normalized to [0,1]
        REQUIRE(f[5] <= 1.0);
    }
}

TEST_CASE("constant nonzero image concentrates in the low band") {
    GrayImage img(kCanonicalSize, kCanonicalSize, 0.5);
    const auto f = frequency_features(dft2(img));
    REQUIRE(f[0] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(f[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(f[2] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(f[3] == 0.0);  // no high-band power, concentration convention
    REQUIRE(f[4] == 0.0);
    // Entropy of a single spike is 0 after normalization.
    REQUIRE(f[5] == Catch::Approx(0.0).margin(1e-12));
    // Moments of log(1+|F|) for a lone DC spike among zeros: heavy
    // right tail, so positive skewness and large kurtosis.
    REQUIRE(f[6] > 0.0);
    REQUIRE(f[7] > 0.0);
    REQUIRE(f[8] > 0.0);
}

TEST_CASE("all-zero image takes the degenerate convention") {
    GrayImage img(8, 8, 0.0);
    const auto f = frequency_features(dft2(img));
    REQUIRE(f[0] == 1.0);
    for (std::size_t i = 1; i < 9; ++i) REQUIRE(f[i] == 0.0);
}

TEST_CASE("checkerboard splits power between dc and nyquist") {
    // x = 0.5 + 0.5(-1)^{i+j} has exactly two nonzero coefficients: DC with
    // |F| = N^2/2 and the Nyquist corner with the same magnitude. The high
    // band therefore holds exactly half the power, concentrated on one bin.
    const std::size_t n = 16;
    GrayImage img(n, n);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) img.pixels()[y * n + x] = ((x + y) % 2 == 0) ? 1.0 : 0.0;
    const auto want = oracle::dft2_naive(img);
    double total = 0.0, high = 0.0;
    const double half = static_cast<double>(n) / 2.0;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            const double p = std::norm(want[u * n + v]);
            total += p;
            const double du = (static_cast<double>((u + n / 2) % n) - half) / half;
            const double dv = (static_cast<double>((v + n / 2) % n) - half) / half;
            if (std::sqrt(du * du + dv * dv) / std::sqrt(2.0) > 0.5) high += p;
        }
    REQUIRE(high / total == Catch::Approx(0.5).margin(1e-12));

    const auto f = frequency_features(dft2(img));
    REQUIRE(f[2] == Catch::Approx(high / total).margin(1e-10));
    // All high-band power on a single coefficient.
    REQUIRE(f[3] == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("small images are rejected") {
    REQUIRE_THROWS_AS(dft2(GrayImage(1, 5, 0.0)), ImageTooSmall);
    REQUIRE_THROWS_AS(dft2(GrayImage(5, 1, 0.0)), ImageTooSmall);
}

TEST_CASE("pure sinusoid lands in the expected band") {
    const std::size_t n = 64;
    GrayImage low(n, n), high(n, n);
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x) {
            low.pixels()[y * n + x] =
                0.5 + 0.4 * std::sin(2.0 * M_PI * 2.0 * static_cast<double>(x) / n);
            high.pixels()[y * n + x] =
                0.5 + 0.4 * std::sin(2.0 * M_PI * 30.0 * static_cast<double>(x) / n);
        }
    const auto fl = frequency_features(dft2(low));
    const auto fh = frequency_features(dft2(high));
    REQUIRE(fl[0] > 0.99);  // DC + low harmonic
    REQUIRE(fl[2] < 1e-9);
    // Amplitudes 0.5 (DC) and 0.4 (sine, split over two conjugate bins):
    // high fraction = 2(0.2)^2 / (0.5^2 + 2(0.2)^2) = 0.08/0.33.
    REQUIRE(fh[2] == Catch::Approx(0.08 / 0.33).margin(1e-9));
}
