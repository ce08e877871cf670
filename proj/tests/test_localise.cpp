#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "camloc/localise.hpp"

namespace camloc {
namespace {

constexpr double kPi = std::numbers::pi;

Point2 random_in_disc(std::mt19937_64& gen, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double rho = radius * std::sqrt(u(gen)), t = 2 * kPi * u(gen);
    return {rho * std::cos(t), rho * std::sin(t)};
}

TEST(Estimator, NamesRoundTrip) {
    for (auto e : {Estimator::TwoView, Estimator::LeastSquares, Estimator::CellCentroid}) {
        EXPECT_EQ(parse_estimator(to_string(e)), e);
    }
    EXPECT_FALSE(parse_estimator("median").has_value());
}

TEST(TwoView, ExactReadingsRecoverPoint) {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int i = 0; i < 1000; ++i) {
        const double a1 = ang(gen), a2 = ang(gen);
        if (std::abs(std::sin(a1 - a2)) < 0.1) continue;
        const Point2 p = random_in_disc(gen, 1.0);
        const Point2 est = reconstruct_two_view(dot(p, frame_vector(a1)), dot(p, frame_vector(a2)), a1, a2);
        ASSERT_LE(distance(est, p), 1e-12);
    }
}

TEST(TwoView, OrthonormalPairExample) {
    const Point2 est = reconstruct_two_view(0.5, -0.25, 0.0, kPi / 2);
    EXPECT_NEAR(est.x, 0.25, 1e-15);
    EXPECT_NEAR(est.y, 0.5, 1e-15);
}

TEST(TwoView, QuantisedExample) {
    // y-reading 0.3 -> pixel centre 0.375; x-reading -0.6 -> pixel centre -0.625
    const Point2 p{0.6, 0.3};
    const double w = 0.25;
    const double s1 = quantise(dot(p, frame_vector(0.0)), w, 8).center;
    const double s2 = quantise(dot(p, frame_vector(kPi / 2)), w, 8).center;
    const Point2 est = reconstruct_two_view(s1, s2, 0.0, kPi / 2);
    EXPECT_NEAR(est.x, 0.625, 1e-15);
    EXPECT_NEAR(est.y, 0.375, 1e-15);
    EXPECT_LE(std::abs(est.x - p.x), w);
    EXPECT_LE(std::abs(est.y - p.y), w);
}

TEST(TwoView, BestPairConditioning) {
    EXPECT_EQ(best_pair(CameraArray(4, 1.0, 3)), (std::pair{0, 1}));
    EXPECT_EQ(best_pair(CameraArray(6, 1.0, 3)), (std::pair{0, 1}));
    EXPECT_EQ(best_pair(CameraArray(8, 1.0, 3)), (std::pair{0, 2}));
    EXPECT_THROW(best_pair(CameraArray(1, 1.0, 3)), Error);
}

TEST(LeastSquares, UnquantisedReadingsRecoverPoint) {
    std::mt19937_64 gen(22);
    for (int kind = 0; kind < 2; ++kind) {
        const CameraArray array(7, 1.0, 3, kind ? ProjectionKind::perspective(0.8) : ProjectionKind::orthogonal());
        for (int i = 0; i < 1000; ++i) {
            const Point2 p = random_in_disc(gen, 1.0);
            Snapshot snap;
            for (int c = 0; c < array.cameras(); ++c) snap.centers.push_back(project(array, c, p));
            ASSERT_LE(distance(reconstruct_least_squares(snap, array), p), 1e-10);
            ASSERT_LE(distance(reconstruct_two_view(snap, array), p), 1e-10);
        }
    }
}

TEST(LeastSquares, TwoCamerasMatchTwoView) {
    std::mt19937_64 gen(23);
    const CameraArray array(2, 1.0, 5);
    // m = 2 puts the cameras opposite each other: the pair is parallel.
    EXPECT_THROW(reconstruct_least_squares(snapshot(array, {0.2, 0.1}), array), Error);

    const CameraArray tilted(3, 1.0, 5);
    for (int i = 0; i < 500; ++i) {
        const Point2 p = random_in_disc(gen, 1.0);
        const auto snap = snapshot(tilted, p);
        Snapshot pair;
        pair.centers = {snap.centers[0], snap.centers[1]};
        const double a0 = tilted.angle(0), a1 = tilted.angle(1);
        // a square system from cameras 0 and 1 solves to the dual-frame estimate
        detail::NormalEquations eq;
        eq.add(frame_vector(a0), pair.centers[0]);
        eq.add(frame_vector(a1), pair.centers[1]);
        ASSERT_LE(distance(eq.solve(), reconstruct_two_view(pair.centers[0], pair.centers[1], a0, a1)), 1e-12);
    }
}

TEST(CellCentroid, CentroidMapsToItself) {
    const CameraArray array(6, 1.0, 3, ProjectionKind::perspective(1.0));
    const auto part = build_partition(array);
    for (const auto& c : part.cells()) {
        const auto res = localise(array, c.centroid, Estimator::CellCentroid, &part);
        EXPECT_EQ(res.estimate.x, c.centroid.x);
        EXPECT_EQ(res.estimate.y, c.centroid.y);
        EXPECT_EQ(*res.error, 0.0);
    }
}

TEST(CellCentroid, EstimateReproducesOwnSignature) {
    const CameraArray array(11, 1.0, 4);
    const auto part = build_partition(array);
    std::mt19937_64 gen(24);
    for (int i = 0; i < 2000; ++i) {
        const Point2 p = random_in_disc(gen, 0.999);
        const auto res = localise(array, p, Estimator::CellCentroid, &part);
        ASSERT_EQ(snapshot(array, res.estimate).indices, snapshot(array, p).indices);
    }
}

TEST(Localise, CentroidNeedsPartition) {
    EXPECT_THROW(localise(CameraArray(4, 1.0, 3), {0.1, 0.1}, Estimator::CellCentroid), Error);
}

TEST(ImaginaryAngle, ExactReadingGivesOwnAngle) {
    std::mt19937_64 gen(25);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int i = 0; i < 1000; ++i) {
        const Point2 p = random_in_disc(gen, 1.0);
        const double a = ang(gen);
        ASSERT_NEAR(imaginary_angle(p, a, dot(p, frame_vector(a))), a, 1e-7);
    }
}

TEST(ImaginaryAngle, ShiftedReading) {
    EXPECT_NEAR(imaginary_angle({0, 1}, 0.0, std::cos(0.1)), 0.1, 1e-12);
}

TEST(ImaginaryAngle, ReadingBeyondAmplitude) {
    try {
        imaginary_angle({0.1, 0.0}, 0.0, 0.5);
        FAIL() << "expected NoSolution";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoSolution);
    }
}

TEST(ImaginaryAngle, QuantisedReadingsSatisfyTheirEquation) {
    std::mt19937_64 gen(26);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    const double w = 0.1;
    int solved = 0;
    for (int i = 0; i < 2000; ++i) {
        const Point2 p = random_in_disc(gen, 1.0);
        const double a = ang(gen);
        const double s = quantise(dot(p, frame_vector(a)), w, 20).center;
        if (std::abs(s) > norm(p)) {
            EXPECT_THROW(imaginary_angle(p, a, s), Error);
            continue;
        }
        const double a_img = imaginary_angle(p, a, s);
        ASSERT_NEAR(dot(p, frame_vector(a_img)), s, 1e-12);
        ASSERT_LE(std::abs(a_img - a), kPi);
        ++solved;
    }
    EXPECT_GT(solved, 1500);
}

TEST(ErrorMatrix, VanishesWithoutShift) {
    std::mt19937_64 gen(27);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int i = 0; i < 1000; ++i) {
        const double a1 = ang(gen), a2 = ang(gen);
        if (std::abs(std::sin(a1 - a2)) < 0.1) continue;
        EXPECT_LE(error_matrix_compact(a1, a2, a1, a2).max_abs(), 1e-14);
        EXPECT_LE(error_matrix_expanded(a1, a2, a1, a2).max_abs(), 1e-14);
    }
}

TEST(ErrorMatrix, ShiftedFirstCamera) {
    const double expected = std::sin(0.1) + 1.0 - std::cos(0.1);
    for (const auto& e : {error_matrix_compact(0, kPi / 2, 0.1, kPi / 2), error_matrix_expanded(0, kPi / 2, 0.1, kPi / 2)}) {
        const Vec2 d = e.apply({1, 1});
        EXPECT_NEAR(d.x, 0.0, 1e-12);
        EXPECT_NEAR(d.y, expected, 1e-12);
        EXPECT_NEAR(d.y, 0.1048292, 1e-7);
    }
}

TEST(ErrorMatrix, FormsAgree) {
    std::mt19937_64 gen(28);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int i = 0; i < 5000; ++i) {
        const double a1 = ang(gen), a2 = ang(gen), b1 = ang(gen), b2 = ang(gen);
        if (std::abs(std::sin(a1 - a2)) < 0.1) continue;
        const auto c = error_matrix_compact(a1, a2, b1, b2);
        const auto x = error_matrix_expanded(a1, a2, b1, b2);
        for (int r = 0; r < 2; ++r)
            for (int k = 0; k < 2; ++k) ASSERT_NEAR(c.e[r][k], x.e[r][k], 1e-12);
    }
    EXPECT_THROW(error_matrix_expanded(0.0, kPi, 0.1, 0.2), Error);
}

TEST(ErrorMatrix, PredictsTwoViewError) {
    // readings equal <p, phi(a')>, so delta = p - p_hat = E p
    std::mt19937_64 gen(29);
    const double w = 0.05;
    const double a1 = 0.3, a2 = 0.3 + kPi / 2;
    for (int i = 0; i < 1000; ++i) {
        const Point2 p = random_in_disc(gen, 1.0);
        const double s1 = quantise(dot(p, frame_vector(a1)), w, 40).center;
        const double s2 = quantise(dot(p, frame_vector(a2)), w, 40).center;
        if (std::abs(s1) > norm(p) || std::abs(s2) > norm(p)) continue;
        const double b1 = imaginary_angle(p, a1, s1), b2 = imaginary_angle(p, a2, s2);
        const Vec2 delta = p - reconstruct_two_view(s1, s2, a1, a2);
        const Vec2 predicted = error_matrix_compact(a1, a2, b1, b2).apply(p);
        ASSERT_LE(distance(delta, predicted), 1e-10);
    }
}

TEST(Bounds, WorstCaseValues) {
    EXPECT_NEAR(worst_case_bound(10, 1.0), 0.789568352087, 1e-9);
    EXPECT_NEAR(worst_case_bound(50, 1.0), 0.0315827340834, 1e-9);
    EXPECT_DOUBLE_EQ(worst_case_bound(10, 2.0), 4 * worst_case_bound(10, 1.0));
    EXPECT_THROW(worst_case_bound(1, 1.0), Error);
}

TEST(Bounds, PointBound) {
    EXPECT_EQ(point_bound({1, -1}, 12), 0.0);
    const double r = 1.3;
    for (int m : {3, 10, 40}) {
        EXPECT_NEAR(point_bound({r / std::sqrt(2.0), r / std::sqrt(2.0)}, m), worst_case_bound(m, r), 1e-14);
    }
    EXPECT_NEAR(point_bound({0.3, 0.4}, 16), 4 * kPi * kPi * 0.49 / 256, 1e-15);
    EXPECT_NEAR(point_bound({0.3, 0.4}, 16), 0.0755642, 1e-7);
}

TEST(Bounds, PointBoundNeverExceedsWorstCase) {
    std::mt19937_64 gen(30);
    for (int i = 0; i < 10000; ++i) {
        const Point2 p = random_in_disc(gen, 2.0);
        ASSERT_LE(point_bound(p, 17), worst_case_bound(17, 2.0) * (1 + 1e-15));
    }
}

}  // namespace
}  // namespace camloc
