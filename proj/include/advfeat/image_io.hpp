#pragma once

#include <cstring>
#include <fstream>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "advfeat/error.hpp"
#include "advfeat/image.hpp"

namespace advfeat {

/// Loads PNG/JPEG/BMP (or the raw FLGRAY matrix format) and returns the
/// canonical 256x256 grayscale image. Color input is collapsed with BT.601
/// luma weights 0.299/0.587/0.114; the formula below applies the blue weight
/// as 1 - 0.299 - 0.587 so an (v,v,v) pixel maps to exactly v.
inline GrayImage load_image(const std::string& path) {
    {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw UnreadableFile("cannot open: " + path);
        char magic[6] = {};
        f.read(magic, 6);
        if (f.gcount() == 6 && std::memcmp(magic, "FLGRAY", 6) == 0) {
            GrayImage img = read_flgray(path);
            if (img.height() != kCanonicalSize || img.width() != kCanonicalSize)
                img = bilinear_resize(img, kCanonicalSize, kCanonicalSize);
            return img;
        }
    }
    cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
    if (bgr.empty()) throw UnreadableFile("cannot decode image: " + path);
    if (bgr.rows <= 0 || bgr.cols <= 0) throw EmptyImage("decoded image has zero pixels: " + path);
    GrayImage img(static_cast<std::size_t>(bgr.rows), static_cast<std::size_t>(bgr.cols));
    for (int r = 0; r < bgr.rows; ++r) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(r);
        for (int c = 0; c < bgr.cols; ++c) {
            const double b = row[c][0];
            const double g = row[c][1];
            const double rr = row[c][2];
            const double luma = b + 0.299 * (rr - b) + 0.587 * (g - b);
            img(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = luma / 255.0;
        }
    }
    if (img.height() != kCanonicalSize || img.width() != kCanonicalSize)
        img = bilinear_resize(img, kCanonicalSize, kCanonicalSize);
    return img;
}

}  // namespace advfeat
