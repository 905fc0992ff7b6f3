#pragma once

// Desk-scale benchmark generator: four clean-image families and three
// epsilon-bounded perturbation families that inject high-frequency energy
// the way gradient attacks do, without needing a victim network.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "advfeat/csv.hpp"
#include "advfeat/error.hpp"
#include "advfeat/fft.hpp"
#include "advfeat/freq_features.hpp"
#include "advfeat/image.hpp"
#include "advfeat/json_writer.hpp"
#include "advfeat/rng.hpp"
#include "advfeat/threads.hpp"

namespace advfeat {

enum class CleanKind { smooth, blobs, sinusoid, blurred_noise };
enum class AttackKind { sign, iterative, bandpass };

inline std::string clean_kind_name(CleanKind k) {
    switch (k) {
        case CleanKind::smooth: return "smooth";
        case CleanKind::blobs: return "blobs";
        case CleanKind::sinusoid: return "sinusoid";
        default: return "blurred_noise";
    }
}

inline std::string attack_name(AttackKind a) {
    switch (a) {
        case AttackKind::sign: return "sign";
        case AttackKind::iterative: return "iterative";
        default: return "bandpass";
    }
}

namespace detail {

/// Separable 5x5 box blur with replicate padding, applied `passes` times.
inline void box_blur5(std::vector<double>& px, std::size_t h, std::size_t w, int passes) {
    std::vector<double> tmp(px.size());
    for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) {
                double s = 0.0;
                for (int d = -2; d <= 2; ++d) {
                    long xx = static_cast<long>(x) + d;
                    xx = std::clamp<long>(xx, 0, static_cast<long>(w) - 1);
                    s += px[y * w + static_cast<std::size_t>(xx)];
                }
                tmp[y * w + x] = s / 5.0;
            }
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x) {
                double s = 0.0;
                for (int d = -2; d <= 2; ++d) {
                    long yy = static_cast<long>(y) + d;
                    yy = std::clamp<long>(yy, 0, static_cast<long>(h) - 1);
                    s += tmp[static_cast<std::size_t>(yy) * w + x];
                }
                px[y * w + x] = s / 5.0;
            }
    }
}

}  // namespace detail

/// Deterministic clean image of the requested family, 256x256 in [0,1].
inline GrayImage gen_clean(CleanKind kind, std::uint64_t seed) {
    const std::size_t n = kCanonicalSize;
    GrayImage img(n, n);
    Rng rng(seed);
    switch (kind) {
        case CleanKind::smooth: {
            const double c = rng.uniform(0.25, 0.75);
            const double ax = rng.uniform(-0.4, 0.4);
            const double ay = rng.uniform(-0.4, 0.4);
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t x = 0; x < n; ++x) {
                    const double v = c + ax * (static_cast<double>(x) / static_cast<double>(n - 1)) +
                                     ay * (static_cast<double>(y) / static_cast<double>(n - 1));
                    img(y, x) = std::clamp(v, 0.0, 1.0);
                }
            break;
        }
        case CleanKind::blobs: {
            const std::size_t count = 3 + static_cast<std::size_t>(rng.below(6));  // 3..8
            const double base = rng.uniform(0.05, 0.25);
            std::vector<double> cy(count), cx(count), sg(count), amp(count);
            for (std::size_t b = 0; b < count; ++b) {
                cy[b] = rng.uniform(0.0, static_cast<double>(n));
                cx[b] = rng.uniform(0.0, static_cast<double>(n));
                sg[b] = rng.uniform(12.0, 40.0);
                amp[b] = rng.uniform(0.15, 0.55);
            }
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t x = 0; x < n; ++x) {
                    double v = base;
                    for (std::size_t b = 0; b < count; ++b) {
                        const double dy = static_cast<double>(y) - cy[b];
                        const double dx = static_cast<double>(x) - cx[b];
                        v += amp[b] * std::exp(-(dx * dx + dy * dy) / (2.0 * sg[b] * sg[b]));
                    }
                    img(y, x) = std::clamp(v, 0.0, 1.0);
                }
            break;
        }
        case CleanKind::sinusoid: {
            const std::size_t count = 1 + static_cast<std::size_t>(rng.below(4));  // 1..4
            std::vector<double> fy(count), fx(count), amp(count), phase(count);
            double amp_total = 0.0;
            for (std::size_t s = 0; s < count; ++s) {
                // Integer frequency pairs inside the low band: radius <= 1/8
                // of the normalized spectrum means fy^2 + fx^2 <= (n/8)^2 / 2.
                const double limit2 = (static_cast<double>(n) / 8.0) * (static_cast<double>(n) / 8.0) / 2.0;
                for (;;) {
                    const long u = static_cast<long>(rng.below(45)) - 22;
                    const long v = static_cast<long>(rng.below(45)) - 22;
                    if (u == 0 && v == 0) continue;
                    if (static_cast<double>(u * u + v * v) <= limit2) {
                        fy[s] = static_cast<double>(u);
                        fx[s] = static_cast<double>(v);
                        break;
                    }
                }
                amp[s] = rng.uniform(0.05, 0.2);
                amp_total += amp[s];
                phase[s] = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            }
            if (amp_total > 0.45)  // keep the sum inside [0.05,0.95]: no clipping harmonics
                for (std::size_t s = 0; s < count; ++s) amp[s] *= 0.45 / amp_total;
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t x = 0; x < n; ++x) {
                    double v = 0.5;
                    for (std::size_t s = 0; s < count; ++s)
                        v += amp[s] * std::sin(2.0 * 3.14159265358979323846 *
                                                   (fy[s] * static_cast<double>(y) +
                                                    fx[s] * static_cast<double>(x)) /
                                                   static_cast<double>(n) +
                                               phase[s]);
                    img(y, x) = std::clamp(v, 0.0, 1.0);
                }
            break;
        }
        case CleanKind::blurred_noise: {
            for (double& v : img.pixels()) v = rng.uniform01();
            detail::box_blur5(img.pixels(), n, n, 3);
            for (double& v : img.pixels()) v = std::clamp(v, 0.0, 1.0);
            break;
        }
    }
    return img;
}

/// Epsilon-bounded perturbation of one image. All three families respect
/// pixel range [0,1]; sign and iterative respect the l-inf epsilon ball.
inline GrayImage perturb(const GrayImage& src, AttackKind attack, double epsilon,
                         std::uint64_t seed) {
    if (!(epsilon > 0.0 && epsilon <= 0.5)) throw OutOfRange("perturb: epsilon outside (0, 0.5]");
    const std::size_t h = src.height();
    const std::size_t w = src.width();
    GrayImage out = src;
    Rng rng(seed);
    switch (attack) {
        case AttackKind::sign: {
            for (double& v : out.pixels()) {
                const double s = rng.below(2) == 0 ? -1.0 : 1.0;
                v = std::clamp(v + epsilon * s, 0.0, 1.0);
            }
            break;
        }
        case AttackKind::iterative: {
            const double step = epsilon / 4.0;
            std::vector<double> field(h * w);
            for (int it = 0; it < 8; ++it) {
                // Fresh smooth direction field each step; its sign gives
                // piecewise-constant regions with sharp zero-crossing seams.
                for (double& v : field) v = rng.uniform(-1.0, 1.0);
                detail::box_blur5(field, h, w, 1);
                for (std::size_t i = 0; i < h * w; ++i) {
                    const double moved =
                        out.pixels()[i] + (field[i] < 0.0 ? -step : step);
                    const double lo = src.pixels()[i] - epsilon;
                    const double hi = src.pixels()[i] + epsilon;
                    out.pixels()[i] = std::clamp(moved, lo, hi);
                }
            }
            for (double& v : out.pixels()) v = std::clamp(v, 0.0, 1.0);
            break;
        }
        case AttackKind::bandpass: {
            std::vector<double> noise(h * w);
            for (double& v : noise) v = rng.normal();
            auto grid = dft2_complex(noise, h, w);
            // Keep only coefficients in the high band (centered radius > 1/2).
            for (std::size_t u = 0; u < h; ++u) {
                const std::size_t cu = (u + h / 2) % h;
                const double du = static_cast<double>(static_cast<long>(cu) - static_cast<long>(h / 2));
                for (std::size_t v = 0; v < w; ++v) {
                    const std::size_t cv = (v + w / 2) % w;
                    const double dv = static_cast<double>(static_cast<long>(cv) - static_cast<long>(w / 2));
                    if (band_of(du, dv, h, w) != Band::high) grid[u * w + v] = 0.0;
                }
            }
            const auto filtered = idft2_complex(std::move(grid), h, w);
            double norm2 = 0.0;
            for (const auto& c : filtered) norm2 += c.real() * c.real();
            const double target = epsilon * std::sqrt(static_cast<double>(h * w)) / 4.0;
            const double scale = norm2 > 0.0 ? target / std::sqrt(norm2) : 0.0;
            for (std::size_t i = 0; i < h * w; ++i)
                out.pixels()[i] = std::clamp(out.pixels()[i] + scale * filtered[i].real(), 0.0, 1.0);
            break;
        }
    }
    return out;
}

struct BenchmarkSpec {
    std::size_t n = 0;          // total images; half clean, half perturbed
    std::string kind = "mix";   // one family name, or "mix" to rotate all four
    AttackKind attack = AttackKind::sign;
    double epsilon = 8.0 / 255.0;
    std::uint64_t seed = 0;
};

inline CleanKind clean_kind_from_name(const std::string& s) {
    if (s == "smooth") return CleanKind::smooth;
    if (s == "blobs") return CleanKind::blobs;
    if (s == "sinusoid") return CleanKind::sinusoid;
    if (s == "blurred_noise") return CleanKind::blurred_noise;
    throw OutOfRange("unknown clean kind: " + s);
}

namespace detail {

inline CleanKind kind_for_index(const std::string& kind, std::size_t index) {
    if (kind != "mix") return clean_kind_from_name(kind);
    static const CleanKind rotation[4] = {CleanKind::smooth, CleanKind::blobs,
                                          CleanKind::sinusoid, CleanKind::blurred_noise};
    return rotation[index % 4];
}

inline std::vector<std::string> split_names(std::size_t half, std::uint64_t seed) {
    // Stratified 60/20/20 per class by a seeded shuffle of per-class indices.
    const std::size_t n_train = half * 3 / 5;
    const std::size_t n_valid = half / 5;
    std::vector<std::size_t> order(half);
    for (std::size_t i = 0; i < half; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::string> split(half);
    for (std::size_t pos = 0; pos < half; ++pos) {
        const char* s = pos < n_train ? "train" : (pos < n_train + n_valid ? "valid" : "test");
        split[order[pos]] = s;
    }
    return split;
}

}  // namespace detail

/// Writes n/2 clean and n/2 perturbed images (perturbations are applied to
/// freshly drawn images, never the retained clean half), a manifest, and a
/// meta description into out_dir. Same BenchmarkSpec, same bytes.
inline void make_benchmark(const BenchmarkSpec& spec, const std::string& out_dir,
                           std::size_t jobs = 1) {
    if (spec.n == 0 || spec.n % 2 != 0) throw OutOfRange("benchmark n must be even and positive");
    if (!(spec.epsilon > 0.0 && spec.epsilon <= 0.5))
        throw OutOfRange("benchmark epsilon outside (0, 0.5]");
    if (spec.kind != "mix") clean_kind_from_name(spec.kind);  // validate early

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::size_t half = spec.n / 2;

    std::vector<ManifestRow> rows(spec.n);
    const auto clean_split = detail::split_names(half, derive_seed(spec.seed, 3, 0));
    const auto adv_split = detail::split_names(half, derive_seed(spec.seed, 3, 1));

    parallel_for(spec.n, jobs, [&](std::size_t i) {
        char name[64];
        ManifestRow row;
        if (i < half) {
            const CleanKind kind = detail::kind_for_index(spec.kind, i);
            const GrayImage img = gen_clean(kind, derive_seed(spec.seed, 0, i));
            std::snprintf(name, sizeof name, "clean_%05zu.flgray", i);
            write_flgray(img, (fs::path(out_dir) / name).string());
            row = {name, 0, "none", 0.0, clean_split[i]};
        } else {
            const std::size_t k = i - half;
            const CleanKind kind = detail::kind_for_index(spec.kind, k);
            const GrayImage base = gen_clean(kind, derive_seed(spec.seed, 1, k));
            const GrayImage img = perturb(base, spec.attack, spec.epsilon, derive_seed(spec.seed, 2, k));
            std::snprintf(name, sizeof name, "adv_%05zu.flgray", k);
            write_flgray(img, (fs::path(out_dir) / name).string());
            row = {name, 1, attack_name(spec.attack), spec.epsilon, adv_split[k]};
        }
        rows[i] = std::move(row);
    });

    write_manifest((fs::path(out_dir) / "manifest.csv").string(), rows);

    JsonWriter j;
    j.begin_object();
    j.key("n").value(spec.n);
    j.key("kind").value(spec.kind);
    j.key("attack").value(attack_name(spec.attack));
    j.key("epsilon").value(spec.epsilon);
    j.key("seed").value(spec.seed);
    j.key("image_format").value("flgray");
    j.end_object();
    std::ofstream f((fs::path(out_dir) / "meta.json").string(), std::ios::binary);
    if (!f) throw UnreadableFile("cannot write benchmark meta");
    f << j.str() << "\n";
}

}  // namespace advfeat
