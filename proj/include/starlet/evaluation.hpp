/*
Copyright 2026 The Starlet Segmentation Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef STARLET_EVALUATION_HPP
#define STARLET_EVALUATION_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "starlet/image.hpp"
#include "starlet/mlss.hpp"

namespace starlet {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Pixelwise agreement of a predicted mask with the ground truth.
inline ConfusionCounts confusion_counts(const BinaryImage& mask, const BinaryImage& gt) {
    require_same_shape(mask, gt, "confusion_counts");
    ConfusionCounts c;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const bool predicted = mask[i] != 0;
        const bool actual = gt[i] != 0;
        if (predicted && actual) ++c.tp;
        else if (predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

/// Matthews correlation coefficient in percent, within [-100, 100]. Returns 0
/// when any marginal (TP+FN, TP+FP, TN+FP, TN+FN) is empty.
inline double mcc(const ConfusionCounts& c) noexcept {
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double a = tp + fn;
    const double b = tp + fp;
    const double d = tn + fp;
    const double e = tn + fn;
    if (a == 0.0 || b == 0.0 || d == 0.0 || e == 0.0) return 0.0;
    // sqrt(a*b) * sqrt(d*e) keeps the product well inside double range.
    const double value = 100.0 * (tp * tn - fp * fn) / (std::sqrt(a * b) * std::sqrt(d * e));
    return std::fmax(-100.0, std::fmin(100.0, value));
}

struct LevelScore {
    int level = 0;
    ConfusionCounts counts;
    double mcc_percent = 0.0;
};

struct MccReport {
    std::vector<LevelScore> per_level;  // ascending by level
    int optimal_level = 0;

    const LevelScore& optimal() const {
        for (const auto& s : per_level)
            if (s.level == optimal_level) return s;
        throw ValidationError("MccReport: optimal level missing from per-level scores");
    }
};

/// Scores every level of the stack against the ground truth and picks the
/// level with the highest MCC. Ties go to the lowest level.
inline MccReport mlsos(const SegmentationStack& stack, const BinaryImage& gt) {
    MccReport report;
    report.per_level.reserve(stack.masks.size());
    double best = 0.0;
    for (std::size_t k = 0; k < stack.masks.size(); ++k) {
        require_same_shape(stack.masks[k], gt, "mlsos");
        LevelScore score;
        score.level = stack.range.first() + static_cast<int>(k);
        score.counts = confusion_counts(stack.masks[k], gt);
        score.mcc_percent = mcc(score.counts);
        if (k == 0 || score.mcc_percent > best) {
            best = score.mcc_percent;
            report.optimal_level = score.level;
        }
        report.per_level.push_back(score);
    }
    return report;
}

namespace comp_colors {
inline constexpr Rgb kTruePositive{0, 255, 0};
inline constexpr Rgb kFalsePositive{255, 0, 0};
inline constexpr Rgb kFalseNegative{0, 0, 255};
inline constexpr Rgb kTrueNegative{0, 0, 0};
}  // namespace comp_colors

/// Color-coded comparison: TP green, FP red, FN blue, TN black.
inline RgbImage comp_image(const BinaryImage& mask, const BinaryImage& gt) {
    require_same_shape(mask, gt, "comp_image");
    RgbImage out(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const bool predicted = mask[i] != 0;
        const bool actual = gt[i] != 0;
        if (predicted && actual) out[i] = comp_colors::kTruePositive;
        else if (predicted) out[i] = comp_colors::kFalsePositive;
        else if (actual) out[i] = comp_colors::kFalseNegative;
        else out[i] = comp_colors::kTrueNegative;
    }
    return out;
}

}  // namespace starlet

#endif  // STARLET_EVALUATION_HPP
