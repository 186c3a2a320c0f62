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

#ifndef STARLET_MLSS_HPP
#define STARLET_MLSS_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "starlet/image.hpp"
#include "starlet/transform.hpp"

namespace starlet {

// Original subtracts the input image from the accumulated details; Derivative
// keeps the plain accumulation, which preserves small regions of interest.
enum class MlssMode { Original, Derivative };

constexpr std::string_view to_string(MlssMode mode) noexcept {
    return mode == MlssMode::Original ? "original" : "derivative";
}

/// Inclusive range of detail levels [first, last], 1-based.
class LevelRange {
public:
    LevelRange(int first, int last) : first_(first), last_(last) {
        if (first < 1 || first > last)
            throw ValidationError("level range must satisfy 1 <= first <= last, got first=" +
                                  std::to_string(first) + " last=" + std::to_string(last));
    }

    int first() const noexcept { return first_; }
    int last() const noexcept { return last_; }
    std::size_t count() const noexcept { return static_cast<std::size_t>(last_ - first_ + 1); }
    bool contains(int level) const noexcept { return level >= first_ && level <= last_; }

    friend bool operator==(const LevelRange&, const LevelRange&) = default;

private:
    int first_;
    int last_;
};

/// Pixel is ROI iff its value is strictly greater than `threshold`.
inline BinaryImage binarize(const GrayImage& plane, double threshold) {
    BinaryImage out(plane.width(), plane.height());
    for (std::size_t i = 0; i < plane.size(); ++i) out[i] = plane[i] > threshold ? 1 : 0;
    return out;
}

struct SegmentationStack {
    MlssMode mode;
    LevelRange range;
    std::vector<GrayImage> raw;     // raw[i - range.first()] holds R_i
    std::vector<BinaryImage> masks;
    double threshold = 0.0;

    const GrayImage& raw_at(int level) const { return raw.at(index_of(level)); }
    const BinaryImage& mask_at(int level) const { return masks.at(index_of(level)); }

private:
    std::size_t index_of(int level) const {
        if (!range.contains(level))
            throw ValidationError("level " + std::to_string(level) + " outside the segmentation range");
        return static_cast<std::size_t>(level - range.first());
    }
};

/// Multi-level starlet segmentation. For each i in the range,
/// R_i = w_first + ... + w_i, minus the input image in Original mode. Each
/// R_i is then binarized at `threshold`. Detail levels below range.first()
/// do not contribute.
inline SegmentationStack mlss(const GrayImage& image, const StarletDecomposition& decomp,
                              LevelRange range, MlssMode mode, double threshold = 0.0) {
    if (range.last() > decomp.levels())
        throw ValidationError("mlss: last level " + std::to_string(range.last()) +
                              " exceeds the decomposition depth " + std::to_string(decomp.levels()));
    require_same_shape(image, decomp.residual, "mlss");

    SegmentationStack stack{mode, range, {}, {}, threshold};
    stack.raw.reserve(range.count());
    stack.masks.reserve(range.count());

    // Details are accumulated left to right so R_{i+1} - R_i == w_{i+1}.
    GrayImage sum(image.width(), image.height(), 0.0);
    for (int level = range.first(); level <= range.last(); ++level) {
        const GrayImage& w = decomp.detail(level);
        for (std::size_t p = 0; p < sum.size(); ++p) sum[p] += w[p];

        GrayImage r = sum;
        if (mode == MlssMode::Original)
            for (std::size_t p = 0; p < r.size(); ++p) r[p] -= image[p];
        stack.masks.push_back(binarize(r, threshold));
        stack.raw.push_back(std::move(r));
    }
    return stack;
}

}  // namespace starlet

#endif  // STARLET_MLSS_HPP
