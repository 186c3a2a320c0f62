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

#ifndef STARLET_KERNEL_HPP
#define STARLET_KERNEL_HPP

#include <array>
#include <cstddef>

namespace starlet {

inline constexpr std::size_t kKernelTaps = 5;
inline constexpr int kKernelHalfWidth = 2;

/// Five-tap symmetric low-pass filter.
struct Kernel1D {
    std::array<double, kKernelTaps> taps{};

    constexpr double operator[](std::size_t k) const { return taps[k]; }
    constexpr double sum() const {
        double s = 0.0;
        for (double t : taps) s += t;
        return s;
    }
};

/// 5x5 filter, indexed weights[row][col] with the center at [2][2].
struct Kernel2D {
    std::array<std::array<double, kKernelTaps>, kKernelTaps> weights{};

    constexpr double operator()(std::size_t row, std::size_t col) const { return weights[row][col]; }
    constexpr double sum() const {
        double s = 0.0;
        for (const auto& r : weights)
            for (double w : r) s += w;
        return s;
    }
};

/// Cubic B-spline scaling filter [1, 4, 6, 4, 1] / 16.
constexpr Kernel1D b3_spline_kernel_1d() {
    return Kernel1D{{1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0}};
}

/// Separable 2D smoothing filter h[k][l] = h1d[k] * h1d[l]. Every entry is a
/// dyadic rational, so the products are exact in binary floating point.
constexpr Kernel2D smoothing_kernel_2d() {
    const Kernel1D h = b3_spline_kernel_1d();
    Kernel2D out;
    for (std::size_t k = 0; k < kKernelTaps; ++k)
        for (std::size_t l = 0; l < kKernelTaps; ++l) out.weights[k][l] = h[k] * h[l];
    return out;
}

/// Wavelet filter g = delta - h. Only used to cross-check detail planes; the
/// transform itself computes details by subtracting successive smoothings.
constexpr Kernel2D highpass_kernel_2d() {
    Kernel2D g = smoothing_kernel_2d();
    for (std::size_t k = 0; k < kKernelTaps; ++k)
        for (std::size_t l = 0; l < kKernelTaps; ++l)
            g.weights[k][l] = (k == 2 && l == 2 ? 1.0 : 0.0) - g.weights[k][l];
    return g;
}

}  // namespace starlet

#endif  // STARLET_KERNEL_HPP
