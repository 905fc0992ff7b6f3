#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/feature_vector.hpp"
#include "advfeat/matrix.hpp"

namespace advfeat {

/// All floating-point output uses 17 significant digits, enough to make the
/// decimal text a lossless round trip for doubles.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

inline double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw CorruptModel("trailing characters in number: " + s);
        return v;
    } catch (const std::invalid_argument&) {
        throw CorruptModel("bad number: " + s);
    } catch (const std::out_of_range&) {
        throw CorruptModel("number out of range: " + s);
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

// ---------------------------------------------------------------------------
// Feature matrix CSV: path,label,f00_LowFreqRatio,...,f50_MMDScore
// ---------------------------------------------------------------------------

struct FeatureTable {
    std::vector<std::string> paths;
    std::vector<int> labels;
    Matrix x;        // N x 51; column 50 is NaN when the file left it empty
    bool has_mmd = true;
};

inline std::string feature_csv_header() {
    std::string h = "path,label";
    for (std::size_t i = 0; i < kFeatureCount; ++i) h += "," + feature_column_name(i);
    return h;
}

/// Writes the feature table. With mmd_empty set, the last column is left
/// blank (raw extraction mode, before a reference exists).
inline void write_feature_csv(const std::string& path, const FeatureTable& t,
                              bool mmd_empty = false) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + path);
    f << feature_csv_header() << "\n";
    for (std::size_t i = 0; i < t.x.rows(); ++i) {
        f << t.paths[i] << "," << t.labels[i];
        const std::size_t last = mmd_empty ? kFeatureCount - 1 : kFeatureCount;
        for (std::size_t j = 0; j < last; ++j) f << "," << format_double(t.x(i, j));
        if (mmd_empty) f << ",";
        f << "\n";
    }
    if (!f) throw UnreadableFile("write failed: " + path);
}

inline FeatureTable read_feature_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line)) throw UnreadableFile("empty feature csv: " + path);
    const auto header = split_csv_line(line);
    if (header.size() != kFeatureCount + 2 || header[0] != "path" || header[1] != "label")
        throw CorruptModel("unexpected feature csv header in " + path);
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        if (header[i + 2] != feature_column_name(i))
            throw CorruptModel("feature csv column " + header[i + 2] + " does not match " +
                               feature_column_name(i));

    FeatureTable t;
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != kFeatureCount + 2)
            throw CorruptModel("feature csv row with wrong column count in " + path);
        t.paths.push_back(cells[0]);
        t.labels.push_back(static_cast<int>(parse_double(cells[1])));
        std::vector<double> row(kFeatureCount);
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            if (cells[j + 2].empty()) {
                row[j] = std::nan("");
                t.has_mmd = false;
            } else {
                row[j] = parse_double(cells[j + 2]);
            }
        }
        rows.push_back(std::move(row));
    }
    t.x = Matrix(rows.size(), kFeatureCount);
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), t.x.row(i));
    return t;
}

// ---------------------------------------------------------------------------
// Benchmark manifest CSV: path,label,attack,epsilon,split
// ---------------------------------------------------------------------------

struct ManifestRow {
    std::string path;   // relative to the manifest's directory
    int label = 0;
    std::string attack; // "none" for clean rows
    double epsilon = 0.0;
    std::string split;  // train / valid / test
};

inline void write_manifest(const std::string& path, const std::vector<ManifestRow>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + path);
    f << "path,label,attack,epsilon,split\n";
    for (const auto& r : rows)
        f << r.path << "," << r.label << "," << r.attack << "," << format_double(r.epsilon)
          << "," << r.split << "\n";
    if (!f) throw UnreadableFile("write failed: " + path);
}

inline std::vector<ManifestRow> read_manifest(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line)) throw UnreadableFile("empty manifest: " + path);
    if (split_csv_line(line) != std::vector<std::string>{"path", "label", "attack", "epsilon", "split"})
        throw CorruptModel("unexpected manifest header in " + path);
    std::vector<ManifestRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 5) throw CorruptModel("manifest row with wrong column count in " + path);
        ManifestRow r;
        r.path = cells[0];
        r.label = static_cast<int>(parse_double(cells[1]));
        r.attack = cells[2];
        r.epsilon = parse_double(cells[3]);
        r.split = cells[4];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace advfeat
