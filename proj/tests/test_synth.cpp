#include <gtest/gtest.h>

#include <cmath>

#include "starlet/synth.hpp"

using namespace starlet;
using namespace starlet::synth;

namespace {

std::size_t brute_disk(double r) {
    std::size_t n = 0;
    const long bound = static_cast<long>(r) + 2;
    for (long y = -bound; y <= bound; ++y)
        for (long x = -bound; x <= bound; ++x)
            if (std::hypot(static_cast<double>(x), static_cast<double>(y)) <= r + 1e-12) ++n;
    return n;
}

// Flood fill to split the GT into its disks.
std::vector<std::size_t> component_sizes(const BinaryImage& m) {
    BinaryImage seen(m.width(), m.height(), 0);
    std::vector<std::size_t> sizes;
    for (std::size_t y0 = 0; y0 < m.height(); ++y0)
        for (std::size_t x0 = 0; x0 < m.width(); ++x0) {
            if (!m(x0, y0) || seen(x0, y0)) continue;
            std::vector<std::pair<std::size_t, std::size_t>> stack{{x0, y0}};
            seen(x0, y0) = 1;
            std::size_t n = 0;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                ++n;
                const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const long nx = static_cast<long>(x) + dx[k], ny = static_cast<long>(y) + dy[k];
                    if (nx < 0 || ny < 0 || nx >= static_cast<long>(m.width()) || ny >= static_cast<long>(m.height()))
                        continue;
                    const auto ux = static_cast<std::size_t>(nx), uy = static_cast<std::size_t>(ny);
                    if (m(ux, uy) && !seen(ux, uy)) {
                        seen(ux, uy) = 1;
                        stack.emplace_back(ux, uy);
                    }
                }
            }
            sizes.push_back(n);
        }
    return sizes;
}

}  // namespace

TEST(SplitMix64, KnownSequence) {
    // Reference outputs of SplitMix64 seeded with 0.
    SplitMix64 rng(0);
    EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(Synth, NoiseFreeBlobArea) {
    FixtureSpec spec;
    spec.count = 3;
    spec.size = 8;
    spec.noise_sigma = 0;
    const auto fx = generate(spec);
    const std::size_t roi = count_nonzero(fx.ground_truth);
    std::size_t bright = 0;
    for (double v : fx.image) bright += v > spec.background;
    EXPECT_EQ(roi, 3 * disk_area(8));
    EXPECT_EQ(bright, roi);
    EXPECT_EQ(disk_area(8), brute_disk(8));
}

TEST(Synth, DisksMatchBruteRasterization) {
    FixtureSpec spec;
    spec.count = 5;
    spec.size = 6;
    spec.noise_sigma = 0;
    const auto fx = generate(spec);
    const auto sizes = component_sizes(fx.ground_truth);
    ASSERT_EQ(sizes.size(), 5u);
    for (auto s : sizes) EXPECT_EQ(s, brute_disk(6));
}

TEST(Synth, Deterministic) {
    for (FixtureKind kind : {FixtureKind::Blobs, FixtureKind::Tracks}) {
        FixtureSpec spec;
        spec.kind = kind;
        spec.size = kind == FixtureKind::Tracks ? 2.0 : 8.0;
        const auto a = generate(spec);
        const auto b = generate(spec);
        EXPECT_EQ(a.image, b.image);
        EXPECT_EQ(a.ground_truth, b.ground_truth);
        spec.seed += 1;
        EXPECT_NE(generate(spec).ground_truth, a.ground_truth);
    }
}

TEST(Synth, GroundTruthIndependentOfNoise) {
    for (FixtureKind kind : {FixtureKind::Blobs, FixtureKind::Tracks}) {
        FixtureSpec spec;
        spec.kind = kind;
        spec.size = kind == FixtureKind::Tracks ? 2.0 : 8.0;
        spec.noise_sigma = 0.0;
        const auto clean = generate(spec);
        spec.noise_sigma = 0.2;
        spec.blur = true;
        EXPECT_EQ(generate(spec).ground_truth, clean.ground_truth);
    }
}

TEST(Synth, NoiseStatistics) {
    FixtureSpec spec;
    spec.count = 0;
    spec.background = 0.5;
    spec.foreground = 0.9;
    spec.noise_sigma = 0.05;
    const auto fx = generate(spec);
    double mean = 0.0;
    for (double v : fx.image) mean += v;
    mean /= static_cast<double>(fx.image.size());
    double var = 0.0;
    for (double v : fx.image) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(fx.image.size() - 1));
    EXPECT_GE(sd, 0.04);
    EXPECT_LE(sd, 0.06);
    EXPECT_NEAR(mean, 0.5, 0.005);
}

TEST(Synth, ImageClampedAndTracksInside) {
    FixtureSpec spec;
    spec.kind = FixtureKind::Tracks;
    spec.count = 8;
    spec.size = 2;
    spec.seed = 11;
    spec.noise_sigma = 0.3;
    const auto fx = generate(spec);
    for (double v : fx.image) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_GT(count_nonzero(fx.ground_truth), 0u);
    for (std::size_t x = 0; x < spec.width; ++x) {
        EXPECT_EQ(fx.ground_truth(x, 0), 0);
        EXPECT_EQ(fx.ground_truth(x, spec.height - 1), 0);
    }
}

TEST(Synth, BlurSmoothsImage) {
    FixtureSpec spec;
    spec.noise_sigma = 0.0;
    spec.blur = true;
    const auto fx = generate(spec);
    std::size_t intermediate = 0;
    for (double v : fx.image) intermediate += v > spec.background + 1e-9 && v < spec.foreground - 1e-9;
    EXPECT_GT(intermediate, 0u);
}

TEST(Synth, Errors) {
    FixtureSpec spec;
    spec.width = 40;
    spec.height = 40;
    spec.count = 20;
    spec.size = 8;
    EXPECT_THROW(generate(spec), PlacementError);
    spec.count = 1;
    spec.size = 30;
    EXPECT_THROW(generate(spec), PlacementError);
    FixtureSpec inverted;
    inverted.foreground = 0.1;
    inverted.background = 0.9;
    EXPECT_THROW(generate(inverted), ValidationError);
    FixtureSpec neg;
    neg.noise_sigma = -1;
    EXPECT_THROW(generate(neg), ValidationError);
}
