#pragma once

#include <array>
#include <cstdio>
#include <string>

namespace advfeat {

// Canonical 51-dim feature layout. Everything that names or indexes features
// goes through this table; do not reorder.
inline constexpr std::size_t kFeatureCount = 51;
inline constexpr std::size_t kIndexHighFreqRatio = 2;
inline constexpr std::size_t kIndexGradEntropy = 11;
inline constexpr std::size_t kIndexMmdScore = 50;

inline const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = [] {
        std::array<std::string, kFeatureCount> n;
        n[0] = "LowFreqRatio";
        n[1] = "MidFreqRatio";
        n[2] = "HighFreqRatio";
        n[3] = "HighFreqConcentration";
        n[4] = "HighFreqMeanMag";
        n[5] = "FreqEntropy";
        n[6] = "FreqSkewness";
        n[7] = "FreqKurtosis";
        n[8] = "FreqContrast";
        n[9] = "GradMean";
        n[10] = "GradStd";
        n[11] = "GradEntropy";
        for (std::size_t i = 0; i < 36; ++i) n[12 + i] = "GradHist_" + std::to_string(i);
        n[48] = "EdgeDensity";
        n[49] = "TextureResponseMean";
        n[50] = "MMDScore";
        return n;
    }();
    return names;
}

/// CSV column name for feature i, e.g. "f02_HighFreqRatio".
inline std::string feature_column_name(std::size_t i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "f%02zu_", i);
    return std::string(buf) + feature_names()[i];
}

}  // namespace advfeat
