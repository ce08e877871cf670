#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "camloc/camera_model.hpp"

namespace camloc {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(FrameVector, KnownAnglesAndNorm) {
    EXPECT_NEAR(frame_vector(0.0).x, 0.0, 1e-15);
    EXPECT_NEAR(frame_vector(0.0).y, 1.0, 1e-15);
    EXPECT_NEAR(frame_vector(kPi / 2).x, -1.0, 1e-15);
    EXPECT_NEAR(frame_vector(kPi / 2).y, 0.0, 1e-15);
    EXPECT_NEAR(normal_vector(0.0).x, 1.0, 1e-15);
    EXPECT_NEAR(normal_vector(kPi).x, -1.0, 1e-15);
    EXPECT_NEAR(normal_vector(kPi).y, 0.0, 1e-15);

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> ang(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = ang(gen);
        EXPECT_NEAR(norm(frame_vector(a)), 1.0, 1e-15);
        EXPECT_NEAR(norm(normal_vector(a)), 1.0, 1e-15);
        EXPECT_NEAR(dot(frame_vector(a), normal_vector(a)), 0.0, 1e-15);
    }
}

TEST(DualPair, OrthonormalPair) {
    const auto d = dual_pair(0.0, kPi / 2);
    EXPECT_NEAR(d.first.x, 0.0, 1e-15);
    EXPECT_NEAR(d.first.y, 1.0, 1e-15);
    EXPECT_NEAR(d.second.x, -1.0, 1e-15);
    EXPECT_NEAR(d.second.y, 0.0, 1e-15);
}

TEST(DualPair, ParallelPlanesRejected) {
    try {
        dual_pair(0.0, kPi);
        FAIL() << "expected ParallelImagePlanes";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParallelImagePlanes);
    }
    EXPECT_THROW(dual_pair(1.0, 1.0), Error);
}

TEST(DualPair, ResolutionOfIdentity) {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi), coord(-1.0, 1.0);
    int trials = 0;
    while (trials < 10000) {
        const double a1 = ang(gen), a2 = ang(gen);
        if (std::abs(std::sin(a2 - a1)) < 0.1) continue;
        ++trials;
        const Point2 p{coord(gen), coord(gen)};
        const auto d = dual_pair(a1, a2);
        const Point2 back = dot(p, frame_vector(a1)) * d.first + dot(p, frame_vector(a2)) * d.second;
        ASSERT_LE(distance(back, p), 1e-10 * std::max(1.0, norm(p)));
    }
}

TEST(CameraArray, DerivedGeometry) {
    const CameraArray orth(8, 2.0, 4);
    EXPECT_DOUBLE_EQ(orth.sensor_length(), 4.0);
    EXPECT_DOUBLE_EQ(orth.pixel_width(), 1.0);
    EXPECT_DOUBLE_EQ(orth.angle(2), kPi / 2);

    const CameraArray persp(5, 1.0, 3, ProjectionKind::perspective(1.0));
    EXPECT_NEAR(persp.sensor_length(), 2.0 / std::sqrt(3.0), 1e-15);
    EXPECT_DOUBLE_EQ(persp.pixel_width(), persp.sensor_length() / 3);

    for (int i = 0; i < orth.cameras(); ++i) {
        EXPECT_GE(orth.angle(i), 0.0);
        EXPECT_LT(orth.angle(i), 2 * kPi);
        if (i > 0) EXPECT_GT(orth.angle(i), orth.angle(i - 1));
    }
}

TEST(CameraArray, RejectsInvalidConfigs) {
    EXPECT_THROW(CameraArray(0, 1.0, 3), Error);
    EXPECT_THROW(CameraArray(4, -1.0, 3), Error);
    EXPECT_THROW(CameraArray(4, 1.0, 0), Error);
    EXPECT_THROW(ProjectionKind::perspective(0.0), Error);
}

TEST(Project, Examples) {
    const auto orth = ProjectionKind::orthogonal();
    const auto persp = ProjectionKind::perspective(1.0);
    for (double a : {0.0, 1.0, 4.0}) {
        EXPECT_EQ(project(orth, 1.0, a, {0, 0}), 0.0);
        EXPECT_EQ(project(persp, 1.0, a, {0, 0}), 0.0);
    }
    EXPECT_DOUBLE_EQ(project(orth, 1.0, 0.0, {1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(project(persp, 1.0, 0.0, {0, 0.5}), 0.25);

    const auto far = ProjectionKind::perspective(1e9);
    EXPECT_NEAR(project(far, 1.0, 1.0, {0.3, 0.4}), project(orth, 1.0, 1.0, {0.3, 0.4}), 1e-8);
}

TEST(Project, BehindCamera) {
    const auto persp = ProjectionKind::perspective(1.0);
    try {
        project(persp, 1.0, 0.0, {2.5, 0.0});
        FAIL() << "expected BehindCamera";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BehindCamera);
    }
}

TEST(Project, PerspectiveApproachesOrthogonal) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = 1.5;
    const auto far = ProjectionKind::perspective(1e6 * r);
    for (int i = 0; i < 10000; ++i) {
        const double rho = r * std::sqrt(u(gen)), t = 2 * kPi * u(gen), a = 2 * kPi * u(gen);
        const Point2 p{rho * std::cos(t), rho * std::sin(t)};
        ASSERT_LE(std::abs(project(far, r, a, p) - project(ProjectionKind::orthogonal(), r, a, p)), 1e-5 * r);
    }
}

TEST(Quantise, EvenSensor) {
    auto q = quantise(0.3, 1.0, 4);
    EXPECT_EQ(q.index, 0);
    EXPECT_DOUBLE_EQ(q.center, 0.5);
    q = quantise(-0.3, 1.0, 4);
    EXPECT_EQ(q.index, -1);
    EXPECT_DOUBLE_EQ(q.center, -0.5);
    q = quantise(1.0, 1.0, 4);
    EXPECT_EQ(q.index, 1);
    EXPECT_DOUBLE_EQ(q.center, 1.5);
    EXPECT_FALSE(q.out_of_sensor);
}

TEST(Quantise, OddSensor) {
    auto q = quantise(0.3, 1.0, 3);
    EXPECT_EQ(q.index, 0);
    EXPECT_DOUBLE_EQ(q.center, 0.0);
    q = quantise(0.6, 1.0, 3);
    EXPECT_EQ(q.index, 1);
    EXPECT_DOUBLE_EQ(q.center, 1.0);
    q = quantise(-0.6, 1.0, 3);
    EXPECT_EQ(q.index, -1);
}

TEST(Quantise, ClampsAndFlagsOutsideSensor) {
    auto q = quantise(1.7, 1.0, 2);
    EXPECT_EQ(q.index, 0);
    EXPECT_DOUBLE_EQ(q.center, 0.5);
    EXPECT_TRUE(q.out_of_sensor);
    // the top edge itself clamps to the last pixel without a flag
    q = quantise(1.0, 1.0, 2);
    EXPECT_EQ(q.index, 0);
    EXPECT_FALSE(q.out_of_sensor);
    q = quantise(-9.0, 1.0, 5);
    EXPECT_EQ(q.index, -2);
    EXPECT_TRUE(q.out_of_sensor);
}

TEST(Quantise, ErrorWithinHalfPixel) {
    std::mt19937_64 gen(4);
    for (int n = 1; n <= 9; ++n) {
        const double w = 0.37;
        std::uniform_real_distribution<double> y(-0.5 * n * w, 0.5 * n * w);
        for (int i = 0; i < 2000; ++i) {
            const double v = y(gen);
            const auto q = quantise(v, w, n);
            ASSERT_FALSE(q.out_of_sensor);
            ASSERT_LE(std::abs(q.center - v), 0.5 * w + 1e-12) << "n=" << n << " y=" << v;
        }
    }
}

TEST(Snapshot, OriginOddSensor) {
    const auto s = snapshot(CameraArray(4, 1.0, 3), {0, 0});
    for (int idx : s.indices) EXPECT_EQ(idx, 0);
}

TEST(Snapshot, HandComputedReadings) {
    // alpha = 0: q = 0.5; alpha = 2pi/3: q = -0.5 sin 120 + 0.5 cos 120 = -0.683;
    // alpha = 4pi/3: q = 0.183. Floor quantiser with w = 1.
    const auto s = snapshot(CameraArray(3, 1.0, 2), {0.5, 0.5});
    EXPECT_EQ(s.indices, (std::vector<int>{0, -1, 0}));
    EXPECT_EQ(s.centers, (std::vector<double>{0.5, -0.5, 0.5}));
}

TEST(Snapshot, SensorCoversRegionOfInterest) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int kind = 0; kind < 2; ++kind) {
        for (int n = 1; n <= 8; ++n) {
            const CameraArray array(7, 1.3, n, kind ? ProjectionKind::perspective(0.9) : ProjectionKind::orthogonal());
            for (int i = 0; i < 10000 / 8; ++i) {
                const double rho = 1.3 * std::sqrt(u(gen)), t = 2 * kPi * u(gen);
                ASSERT_FALSE(snapshot(array, {rho * std::cos(t), rho * std::sin(t)}).any_out_of_sensor());
            }
            // on the rim itself as well
            for (int i = 0; i < 64; ++i) {
                const double t = 2 * kPi * i / 64;
                ASSERT_FALSE(snapshot(array, {1.3 * std::cos(t), 1.3 * std::sin(t)}).any_out_of_sensor());
            }
        }
    }
}

TEST(Sweep, Examples) {
    auto s = sweep({0, 1});
    EXPECT_DOUBLE_EQ(s.amplitude, 1.0);
    EXPECT_DOUBLE_EQ(s.phase, kPi / 2);
    s = sweep({-1, 0});
    EXPECT_DOUBLE_EQ(s.amplitude, 1.0);
    EXPECT_DOUBLE_EQ(s.phase, 0.0);
    s = sweep({0, 0});
    EXPECT_EQ(s.amplitude, 0.0);
    EXPECT_EQ(s.phase, 0.0);
}

TEST(Sweep, MatchesOrthogonalProjection) {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> c(-2.0, 2.0), a(0.0, 2 * kPi);
    for (int t = 0; t < 100; ++t) {
        const Point2 p{c(gen), c(gen)};
        const auto s = sweep(p);
        for (int i = 0; i < 100; ++i) {
            const double alpha = a(gen);
            ASSERT_NEAR(s(alpha), project(ProjectionKind::orthogonal(), 1.0, alpha, p), 1e-12);
        }
    }
}

TEST(DiscontinuityAngles, Examples) {
    // |p| = 0.5 < w: only the zero threshold, at -beta and pi - beta
    const Point2 p{0.3, 0.4};
    const double beta = sweep(p).phase;
    const auto d = discontinuity_angles(p, 1.0, Parity::Even);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0].k, 0);
    EXPECT_EQ(d[1].k, 0);
    std::vector<double> expected{wrap_angle(-beta), wrap_angle(kPi - beta)};
    std::sort(expected.begin(), expected.end());
    EXPECT_NEAR(d[0].angle, expected[0], 1e-12);
    EXPECT_NEAR(d[1].angle, expected[1], 1e-12);

    // |p| = 1.5: thresholds -1, 0, 1 each crossed twice
    const auto d6 = discontinuity_angles({0.9, 1.2}, 1.0, Parity::Even);
    EXPECT_EQ(d6.size(), 6u);
    EXPECT_TRUE(discontinuity_angles({0.18, 0.24}, 1.0, Parity::Odd).empty());
    EXPECT_TRUE(std::is_sorted(d6.begin(), d6.end(), [](auto& a, auto& b) { return a.angle < b.angle; }));
}

TEST(DiscontinuityAngles, MatchQuantisedSweepJumps) {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> c(-1.0, 1.0), wd(0.05, 0.6);
    constexpr int kGrid = 10000;
    for (int trial = 0; trial < 40; ++trial) {
        const Point2 p{c(gen), c(gen)};
        const double w = wd(gen);
        const Parity parity = trial % 2 ? Parity::Odd : Parity::Even;
        const int n = 2 * static_cast<int>(std::ceil(norm(p) / w)) + 4 + (parity == Parity::Odd ? 1 : 0);
        const auto s = sweep(p);
        const auto disc = discontinuity_angles(p, w, parity);
        auto index_at = [&](double a) { return quantise(s(a), w, n).index; };
        std::size_t next = 0;
        int jumps = 0;
        for (int j = 0; j < kGrid; ++j) {
            const double a0 = 2 * kPi * j / kGrid, a1 = 2 * kPi * (j + 1) / kGrid;
            int crossed = 0;
            while (next < disc.size() && disc[next].angle <= a1) {
                if (disc[next].angle > a0) ++crossed;
                ++next;
            }
            const bool changed = index_at(a0) != index_at(a1);
            ASSERT_EQ(changed, crossed > 0) << "trial " << trial << " step " << j;
            jumps += crossed;
        }
        // every returned angle falls in exactly one grid step
        EXPECT_EQ(jumps, static_cast<int>(disc.size()) - (disc.empty() || disc.front().angle > 0.0 ? 0 : 1));
    }
}

}  // namespace
}  // namespace camloc
