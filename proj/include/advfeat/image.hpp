#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/matrix.hpp"

namespace advfeat {

/// Side length every image is brought to before feature extraction.
inline constexpr std::size_t kCanonicalSize = 256;

/// Grayscale image, row-major doubles in [0,1].
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t height, std::size_t width, double fill = 0.0)
        : height_(height), width_(width), pixels_(height * width, fill) {}

    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }

    double& operator()(std::size_t r, std::size_t c) { return pixels_[r * width_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return pixels_[r * width_ + c]; }

    std::vector<double>& pixels() { return pixels_; }
    const std::vector<double>& pixels() const { return pixels_; }

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<double> pixels_;
};

/// Bilinear resample with center-aligned sample positions: destination pixel
/// centers map to src = (dst + 0.5) * scale - 0.5, clamped to the source grid.
inline GrayImage bilinear_resize(const GrayImage& src, std::size_t out_h, std::size_t out_w) {
    if (src.height() == 0 || src.width() == 0) throw EmptyImage("resize of empty image");
    GrayImage out(out_h, out_w);
    const double scale_y = static_cast<double>(src.height()) / static_cast<double>(out_h);
    const double scale_x = static_cast<double>(src.width()) / static_cast<double>(out_w);
    for (std::size_t y = 0; y < out_h; ++y) {
        double sy = (static_cast<double>(y) + 0.5) * scale_y - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(src.height() - 1));
        const std::size_t y0 = static_cast<std::size_t>(sy);
        const std::size_t y1 = std::min(y0 + 1, src.height() - 1);
        const double fy = sy - static_cast<double>(y0);
        for (std::size_t x = 0; x < out_w; ++x) {
            double sx = (static_cast<double>(x) + 0.5) * scale_x - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(src.width() - 1));
            const std::size_t x0 = static_cast<std::size_t>(sx);
            const std::size_t x1 = std::min(x0 + 1, src.width() - 1);
            const double fx = sx - static_cast<double>(x0);
            const double top = src(y0, x0) * (1.0 - fx) + src(y0, x1) * fx;
            const double bot = src(y1, x0) * (1.0 - fx) + src(y1, x1) * fx;
            out(y, x) = top * (1.0 - fy) + bot * fy;
        }
    }
    return out;
}

/// Builds a GrayImage from arbitrary reals. With clamp set, values are clipped
/// into [0,1]; otherwise any violation throws. Resizes to the canonical
/// resolution unless native is requested (unit tests work at native size).
inline GrayImage from_matrix(const Matrix& values, bool clamp = false, bool native = false) {
    if (values.rows() == 0 || values.cols() == 0) throw EmptyImage("from_matrix: zero pixels");
    GrayImage img(values.rows(), values.cols());
    for (std::size_t i = 0; i < values.data().size(); ++i) {
        double v = values.data()[i];
        if (!std::isfinite(v)) throw NonFiniteInput("from_matrix: non-finite pixel value");
        if (clamp) {
            v = std::clamp(v, 0.0, 1.0);
        } else if (v < 0.0 || v > 1.0) {
            throw OutOfRange("from_matrix: pixel value outside [0,1]");
        }
        img.pixels()[i] = v;
    }
    if (!native && (img.height() != kCanonicalSize || img.width() != kCanonicalSize)) {
        img = bilinear_resize(img, kCanonicalSize, kCanonicalSize);
    }
    return img;
}

// ---------------------------------------------------------------------------
// Raw matrix text format: "FLGRAY <H> <W>\n" followed by H*W whitespace
// separated decimals, row-major. Values are written with shortest
// round-trippable formatting so a write/read cycle is bit-identical.
// ---------------------------------------------------------------------------

inline void write_flgray(const GrayImage& img, const std::string& path) {
    if (img.height() == 0 || img.width() == 0) throw EmptyImage("write_flgray: empty image");
    std::string buf;
    buf.reserve(img.pixels().size() * 20 + 32);
    char tmp[64];
    int n = std::snprintf(tmp, sizeof tmp, "FLGRAY %zu %zu\n", img.height(), img.width());
    buf.append(tmp, static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            auto res = std::to_chars(tmp, tmp + sizeof tmp, img(r, c));
            buf.append(tmp, static_cast<std::size_t>(res.ptr - tmp));
            buf.push_back(c + 1 == img.width() ? '\n' : ' ');
        }
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + path);
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!f) throw UnreadableFile("write failed: " + path);
}

/// Reads the raw matrix format at native size (no resize).
inline GrayImage read_flgray(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const char* p = text.data();
    const char* end = p + text.size();
    if (text.size() < 6 || std::memcmp(p, "FLGRAY", 6) != 0)
        throw UnreadableFile("not a FLGRAY file: " + path);
    p += 6;
    auto skip_ws = [&] {
        while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == '\n')) ++p;
    };
    auto parse_size = [&]() -> std::size_t {
        skip_ws();
        std::size_t v = 0;
        auto res = std::from_chars(p, end, v);
        if (res.ec != std::errc()) throw UnreadableFile("bad FLGRAY header: " + path);
        p = res.ptr;
        return v;
    };
    const std::size_t h = parse_size();
    const std::size_t w = parse_size();
    if (h == 0 || w == 0) throw EmptyImage("FLGRAY with zero pixels: " + path);
    GrayImage img(h, w);
    for (std::size_t i = 0; i < h * w; ++i) {
        skip_ws();
        double v = 0.0;
        auto res = std::from_chars(p, end, v);
        if (res.ec != std::errc()) throw UnreadableFile("truncated FLGRAY data: " + path);
        if (!std::isfinite(v)) throw UnreadableFile("non-finite FLGRAY value: " + path);
        p = res.ptr;
        img.pixels()[i] = std::clamp(v, 0.0, 1.0);
    }
    return img;
}

}  // namespace advfeat
