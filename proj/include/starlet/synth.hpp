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

// Synthetic micrograph analogues with exact ground truth: bright disks
// ("blobs") and thin line segments ("tracks") on a flat background.

#ifndef STARLET_SYNTH_HPP
#define STARLET_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "starlet/image.hpp"
#include "starlet/transform.hpp"

namespace starlet::synth {

class PlacementError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// SplitMix64. Fixed algorithm, so fixtures are identical on every platform
/// (unlike std:: distributions, whose output is implementation-defined).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    // Box-Muller, one variate per call (the sine branch is discarded).
    double normal() noexcept {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

enum class FixtureKind { Blobs, Tracks };

constexpr std::string_view to_string(FixtureKind kind) noexcept {
    return kind == FixtureKind::Blobs ? "blobs" : "tracks";
}

struct FixtureSpec {
    FixtureKind kind = FixtureKind::Blobs;
    std::size_t width = 256;
    std::size_t height = 256;
    int count = 5;
    double size = 8.0;  // disk radius (Blobs) or line thickness (Tracks), pixels
    double foreground = 0.9;
    double background = 0.1;
    double noise_sigma = 0.05;
    bool blur = false;
    std::uint64_t seed = 7;
};

struct Fixture {
    GrayImage image;
    BinaryImage ground_truth;
};

/// Pixels of a disk of radius r under center-of-pixel inclusion x^2 + y^2 <= r^2.
inline std::size_t disk_area(double radius) {
    const auto r = static_cast<long>(std::floor(radius));
    std::size_t n = 0;
    for (long y = -r; y <= r; ++y)
        for (long x = -r; x <= r; ++x)
            if (static_cast<double>(x * x + y * y) <= radius * radius) ++n;
    return n;
}

namespace detail {

inline constexpr int kMaxPlacementAttempts = 10000;

inline void validate(const FixtureSpec& spec) {
    if (spec.width == 0 || spec.height == 0) throw ValidationError("fixture: canvas must be non-empty");
    if (spec.count < 0) throw ValidationError("fixture: count must be >= 0");
    if (!(spec.size > 0.0)) throw ValidationError("fixture: shape size must be positive");
    if (!(spec.foreground > spec.background)) throw ValidationError("fixture: foreground must exceed background");
    if (spec.background < 0.0 || spec.foreground > 1.0)
        throw ValidationError("fixture: intensities must lie in [0, 1]");
    if (!(spec.noise_sigma >= 0.0)) throw ValidationError("fixture: noise sigma must be >= 0");
}

inline void draw_blobs(const FixtureSpec& spec, SplitMix64& rng, BinaryImage& gt) {
    const double r = spec.size;
    const auto margin = static_cast<std::int64_t>(std::ceil(r));
    const auto w = static_cast<std::int64_t>(spec.width);
    const auto h = static_cast<std::int64_t>(spec.height);
    if (w - 1 - margin < margin || h - 1 - margin < margin)
        throw PlacementError("fixture: canvas too small for a disk of radius " + std::to_string(r));

    struct Center { std::int64_t x, y; };
    std::vector<Center> centers;
    for (int n = 0; n < spec.count; ++n) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
            const Center c{rng.uniform_int(margin, w - 1 - margin), rng.uniform_int(margin, h - 1 - margin)};
            // Disks whose centers are more than 2r apart share no pixel.
            placed = std::none_of(centers.begin(), centers.end(), [&](const Center& o) {
                const double dx = static_cast<double>(c.x - o.x);
                const double dy = static_cast<double>(c.y - o.y);
                return dx * dx + dy * dy <= 4.0 * r * r;
            });
            if (placed) centers.push_back(c);
        }
        if (!placed)
            throw PlacementError("fixture: could not place disk " + std::to_string(n + 1) + " of " +
                                 std::to_string(spec.count) + " without overlap after " +
                                 std::to_string(kMaxPlacementAttempts) + " attempts");
    }
    for (const auto& c : centers)
        for (std::int64_t y = c.y - margin; y <= c.y + margin; ++y)
            for (std::int64_t x = c.x - margin; x <= c.x + margin; ++x) {
                const double dx = static_cast<double>(x - c.x);
                const double dy = static_cast<double>(y - c.y);
                if (dx * dx + dy * dy <= r * r) gt(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = 1;
            }
}

inline double distance_to_segment(double px, double py, double ax, double ay, double bx, double by) {
    const double vx = bx - ax;
    const double vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = px - (ax + t * vx);
    const double dy = py - (ay + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

// Each track: orientation uniform in [0, pi), length uniform in
// [min(w, h) / 8, min(w, h) / 3], midpoint chosen so the whole stroke stays
// at least one thickness away from the border.
inline void draw_tracks(const FixtureSpec& spec, SplitMix64& rng, BinaryImage& gt) {
    const double w = static_cast<double>(spec.width);
    const double h = static_cast<double>(spec.height);
    const double half = spec.size / 2.0;
    const double margin = spec.size;
    const double min_len = std::min(w, h) / 8.0;
    const double max_len = std::min(w, h) / 3.0;

    for (int n = 0; n < spec.count; ++n) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
            const double theta = rng.uniform(0.0, std::numbers::pi);
            const double length = rng.uniform(min_len, max_len);
            const double hx = 0.5 * length * std::cos(theta);
            const double hy = 0.5 * length * std::sin(theta);
            const double ext_x = std::abs(hx) + margin;
            const double ext_y = std::abs(hy) + margin;
            if (w - 1.0 - ext_x < ext_x || h - 1.0 - ext_y < ext_y) continue;
            const double cx = rng.uniform(ext_x, w - 1.0 - ext_x);
            const double cy = rng.uniform(ext_y, h - 1.0 - ext_y);
            const double ax = cx - hx, ay = cy - hy, bx = cx + hx, by = cy + hy;

            const auto x0 = static_cast<std::size_t>(std::floor(std::min(ax, bx) - half));
            const auto x1 = static_cast<std::size_t>(std::ceil(std::max(ax, bx) + half));
            const auto y0 = static_cast<std::size_t>(std::floor(std::min(ay, by) - half));
            const auto y1 = static_cast<std::size_t>(std::ceil(std::max(ay, by) + half));
            for (std::size_t y = y0; y <= y1 && y < spec.height; ++y)
                for (std::size_t x = x0; x <= x1 && x < spec.width; ++x)
                    if (distance_to_segment(static_cast<double>(x), static_cast<double>(y), ax, ay, bx, by) <= half)
                        gt(x, y) = 1;
            placed = true;
        }
        if (!placed)
            throw PlacementError("fixture: canvas too small to place track " + std::to_string(n + 1));
    }
}

// 3x3 mean filter with mirror boundaries.
inline GrayImage box_blur3(const GrayImage& in) {
    const auto w = static_cast<std::ptrdiff_t>(in.width());
    const auto h = static_cast<std::ptrdiff_t>(in.height());
    GrayImage out(in.width(), in.height());
    for (std::ptrdiff_t y = 0; y < h; ++y)
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double acc = 0.0;
            for (std::ptrdiff_t dy = -1; dy <= 1; ++dy)
                for (std::ptrdiff_t dx = -1; dx <= 1; ++dx)
                    acc += in(static_cast<std::size_t>(mirror_index(x + dx, w)),
                              static_cast<std::size_t>(mirror_index(y + dy, h)));
            out(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc / 9.0;
        }
    return out;
}

}  // namespace detail

/// Renders the fixture. Geometry is drawn from the generator first, then one
/// normal variate per pixel in raster order, so the ground truth depends only
/// on the seed and geometry parameters, never on the noise level.
inline Fixture generate(const FixtureSpec& spec) {
    detail::validate(spec);
    SplitMix64 rng(spec.seed);
    BinaryImage gt(spec.width, spec.height, 0);
    if (spec.kind == FixtureKind::Blobs) detail::draw_blobs(spec, rng, gt);
    else detail::draw_tracks(spec, rng, gt);

    GrayImage image(spec.width, spec.height);
    for (std::size_t i = 0; i < image.size(); ++i) image[i] = gt[i] ? spec.foreground : spec.background;
    if (spec.noise_sigma > 0.0)
        for (double& v : image) v += spec.noise_sigma * rng.normal();
    if (spec.blur) image = detail::box_blur3(image);
    for (double& v : image) v = std::clamp(v, 0.0, 1.0);
    return Fixture{std::move(image), std::move(gt)};
}

}  // namespace starlet::synth

#endif  // STARLET_SYNTH_HPP
