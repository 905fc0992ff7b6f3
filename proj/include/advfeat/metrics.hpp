#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "advfeat/error.hpp"

namespace advfeat {

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct EvalReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
    Confusion confusion;
    std::vector<RocPoint> roc;
};

/// Rank-statistic AUC with midranks for ties:
/// (sum of positive ranks - n+(n+ + 1)/2) / (n+ * n-). Equals
/// P(s+ > s-) + P(s+ = s-)/2 under random draws from each class.
inline double auc_midrank(const std::vector<double>& scores, const std::vector<int>& labels) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::size_t npos = 0;
    for (int l : labels) npos += l ? 1 : 0;
    const std::size_t nneg = n - npos;
    if (npos == 0 || nneg == 0) throw SingleClassAuc("AUC needs both classes");

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        // Ranks are 1-based; tied scores share the midrank of their block.
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) rank_sum_pos += midrank;
        i = j;
    }
    const double np = static_cast<double>(npos);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * static_cast<double>(nneg));
}

/// Accuracy/precision/recall/F1 at the given threshold (predict positive when
/// score >= threshold), plus rank AUC and the ROC curve at every distinct
/// score threshold.
inline EvalReport evaluate(const std::vector<double>& scores, const std::vector<int>& labels,
                           double threshold = 0.5) {
    const std::size_t n = scores.size();
    if (n == 0 || labels.size() != n) throw DimensionMismatch("evaluate: bad input sizes");
    EvalReport r;
    for (std::size_t i = 0; i < n; ++i) {
        const bool pred = scores[i] >= threshold;
        const bool pos = labels[i] != 0;
        if (pred && pos) ++r.confusion.tp;
        else if (pred && !pos) ++r.confusion.fp;
        else if (!pred && !pos) ++r.confusion.tn;
        else ++r.confusion.fn;
    }
    const auto& c = r.confusion;
    r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
    r.precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    r.recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    r.auc = auc_midrank(scores, labels);

    const std::size_t npos = c.tp + c.fn;
    const std::size_t nneg = c.fp + c.tn;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    r.roc.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::size_t tp = 0, fp = 0, i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]]) ++tp;
            else ++fp;
        }
        r.roc.push_back({scores[order[i]],
                         static_cast<double>(fp) / static_cast<double>(nneg),
                         static_cast<double>(tp) / static_cast<double>(npos)});
        i = j;
    }
    return r;
}

/// Trapezoidal area under a ROC polyline; matches the rank AUC exactly.
inline double roc_trapezoid_area(const std::vector<RocPoint>& roc) {
    double area = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i)
        area += (roc[i].fpr - roc[i - 1].fpr) * 0.5 * (roc[i].tpr + roc[i - 1].tpr);
    return area;
}

}  // namespace advfeat
