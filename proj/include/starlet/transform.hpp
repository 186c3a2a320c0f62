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

#ifndef STARLET_TRANSFORM_HPP
#define STARLET_TRANSFORM_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "starlet/image.hpp"
#include "starlet/kernel.hpp"

namespace starlet {

/// Reflects an out-of-range index back into [0, n) without repeating the edge
/// sample: -1 -> 1, n -> n - 2. Offsets larger than the signal fold repeatedly.
constexpr std::ptrdiff_t mirror_index(std::ptrdiff_t i, std::ptrdiff_t n) noexcept {
    if (n == 1) return 0;
    const std::ptrdiff_t period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

/// Distance in pixels between adjacent taps of the smoothing filter at `level`
/// (1 at level 1, 2 at level 2, 4 at level 3, ...).
constexpr std::ptrdiff_t tap_spacing(int level) noexcept {
    return std::ptrdiff_t{1} << (level - 1);
}

namespace detail {

// One 1D pass along x (horizontal = true) or y. Taps are accumulated
// k = 0..4 so results do not depend on traversal order.
inline GrayImage convolve_axis(const GrayImage& in, const Kernel1D& h, std::ptrdiff_t step,
                               bool horizontal) {
    const auto w = static_cast<std::ptrdiff_t>(in.width());
    const auto ht = static_cast<std::ptrdiff_t>(in.height());
    GrayImage out(in.width(), in.height());
    for (std::ptrdiff_t y = 0; y < ht; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kKernelTaps; ++k) {
                const std::ptrdiff_t off = (static_cast<std::ptrdiff_t>(k) - kKernelHalfWidth) * step;
                const double v = horizontal
                                     ? in(static_cast<std::size_t>(mirror_index(x + off, w)),
                                          static_cast<std::size_t>(y))
                                     : in(static_cast<std::size_t>(x),
                                          static_cast<std::size_t>(mirror_index(y + off, ht)));
                acc += h[k] * v;
            }
            out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
        }
    }
    return out;
}

}  // namespace detail

/// Smooths `image` with the B3-spline filter dilated for `level`: a row pass
/// followed by a column pass, taps spaced tap_spacing(level) apart, mirror
/// boundaries.
inline GrayImage dilated_smooth(const GrayImage& image, int level) {
    if (level < 1) throw ValidationError("dilated_smooth: level must be >= 1, got " + std::to_string(level));
    if (image.empty()) throw ValidationError("dilated_smooth: empty image");
    const Kernel1D h = b3_spline_kernel_1d();
    const std::ptrdiff_t step = tap_spacing(level);
    return detail::convolve_axis(detail::convolve_axis(image, h, step, true), h, step, false);
}

/// Detail planes w_1..w_L and the coarsest smoothing c_L of an image.
struct StarletDecomposition {
    std::vector<GrayImage> details;  // details[j - 1] holds w_j
    GrayImage residual;

    int levels() const noexcept { return static_cast<int>(details.size()); }
    const GrayImage& detail(int level) const { return details.at(static_cast<std::size_t>(level - 1)); }

    /// c_L + sum of w_j, accumulated from the finest level up.
    GrayImage reconstruct() const {
        GrayImage out = residual;
        for (const auto& w : details)
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[i];
        return out;
    }
};

/// A-trous starlet transform: c_j = c_{j-1} * h_j and w_j = c_{j-1} - c_j for
/// j = 1..last_level.
inline StarletDecomposition starlet_decompose(const GrayImage& image, int last_level) {
    if (last_level < 1)
        throw ValidationError("starlet_decompose: last level must be >= 1, got " + std::to_string(last_level));
    if (image.empty()) throw ValidationError("starlet_decompose: empty image");
    if (!all_finite(image)) throw ValidationError("starlet_decompose: image contains non-finite values");

    StarletDecomposition out;
    out.details.reserve(static_cast<std::size_t>(last_level));
    GrayImage previous = image;
    for (int j = 1; j <= last_level; ++j) {
        GrayImage current = dilated_smooth(previous, j);
        GrayImage detail(image.width(), image.height());
        for (std::size_t i = 0; i < detail.size(); ++i) detail[i] = previous[i] - current[i];
        out.details.push_back(std::move(detail));
        previous = std::move(current);
    }
    out.residual = std::move(previous);
    return out;
}

}  // namespace starlet

#endif  // STARLET_TRANSFORM_HPP
