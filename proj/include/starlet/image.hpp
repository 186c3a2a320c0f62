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

#ifndef STARLET_IMAGE_HPP
#define STARLET_IMAGE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace starlet {

// Raised when an argument violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Row-major 2D grid. Pixel (x, y) lives at data[y * width + x].
template <typename T>
class Image {
public:
    using value_type = T;

    Image() = default;

    Image(std::size_t width, std::size_t height, T fill = T{})
        : width_(width), height_(height), data_(width * height, fill) {}

    Image(std::size_t width, std::size_t height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != width_ * height_)
            throw ValidationError("image data length " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(width_) + "x" +
                                  std::to_string(height_));
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }
    const T& operator()(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }

    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<T> pixels() noexcept { return data_; }
    std::span<const T> pixels() const noexcept { return data_; }

    std::span<T> row(std::size_t y) noexcept { return {data_.data() + y * width_, width_}; }
    std::span<const T> row(std::size_t y) const noexcept { return {data_.data() + y * width_, width_}; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    template <typename U>
    bool same_shape(const Image<U>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<T> data_;
};

// Real-valued intensity plane (inputs, smooth and detail coefficients).
using GrayImage = Image<double>;

// 0 = background, 1 = region of interest. uint8_t avoids std::vector<bool>.
using BinaryImage = Image<std::uint8_t>;

using Rgb = std::array<std::uint8_t, 3>;
using RgbImage = Image<Rgb>;

template <typename T, typename U>
void require_same_shape(const Image<T>& a, const Image<U>& b, const char* what) {
    if (!a.same_shape(b))
        throw ValidationError(std::string(what) + ": dimension mismatch (" +
                              std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                              " vs " + std::to_string(b.width()) + "x" +
                              std::to_string(b.height()) + ")");
}

inline bool all_finite(const GrayImage& image) noexcept {
    for (double v : image)
        if (!std::isfinite(v)) return false;
    return true;
}

inline std::size_t count_nonzero(const BinaryImage& mask) noexcept {
    std::size_t n = 0;
    for (auto v : mask) n += (v != 0);
    return n;
}

inline BinaryImage complement(const BinaryImage& mask) {
    BinaryImage out(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 0 : 1;
    return out;
}

}  // namespace starlet

#endif  // STARLET_IMAGE_HPP
