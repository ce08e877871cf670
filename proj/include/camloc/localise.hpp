#ifndef CAMLOC_LOCALISE_HPP
#define CAMLOC_LOCALISE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "camloc/camera_model.hpp"
#include "camloc/error.hpp"
#include "camloc/geometry.hpp"
#include "camloc/partition.hpp"

namespace camloc {

enum class Estimator { TwoView, LeastSquares, CellCentroid };

inline std::string_view to_string(Estimator e) noexcept {
    switch (e) {
    case Estimator::TwoView: return "twoview";
    case Estimator::LeastSquares: return "lsq";
    case Estimator::CellCentroid: return "centroid";
    }
    return "unknown";
}

inline std::optional<Estimator> parse_estimator(std::string_view s) noexcept {
    if (s == "twoview") return Estimator::TwoView;
    if (s == "lsq") return Estimator::LeastSquares;
    if (s == "centroid") return Estimator::CellCentroid;
    return std::nullopt;
}

struct LocalisationResult {
    Point2 estimate;
    Estimator estimator = Estimator::LeastSquares;
    std::optional<double> error;  // |p - estimate| when the truth is known
};

/// Dual-frame reconstruction from two readings: s1 * dual1 + s2 * dual2.
inline Point2 reconstruct_two_view(double s1, double s2, double alpha1, double alpha2) {
    const auto duals = dual_pair(alpha1, alpha2);
    return s1 * duals.first + s2 * duals.second;
}

/// Camera pair with the largest |sin(a_j1 - a_j2)|; ties go to the lowest indices.
inline std::pair<int, int> best_pair(const CameraArray& array) {
    detail::require(array.cameras() >= 2, "two-view reconstruction needs at least two cameras");
    std::pair<int, int> best{0, 1};
    double best_s = -1.0;
    for (int i = 0; i < array.cameras(); ++i) {
        for (int j = i + 1; j < array.cameras(); ++j) {
            const double s = std::abs(std::sin(array.angle(j) - array.angle(i)));
            if (s > best_s + 1e-12) {
                best_s = s;
                best = {i, j};
            }
        }
    }
    return best;
}

namespace detail {

/// Row g and right-hand side b of the linear equation <g, p> = b satisfied by
/// any point whose projection on camera `alpha` equals `reading`.
inline std::pair<Vec2, double> reading_row(const CameraArray& array, double alpha, double reading) {
    if (!array.kind().is_perspective()) return {frame_vector(alpha), reading};
    const double f = array.focal_length();
    return {f * frame_vector(alpha) + reading * normal_vector(alpha), reading * (array.radius() + f)};
}

struct NormalEquations {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;

    void add(Vec2 g, double rhs) noexcept {
        a11 += g.x * g.x;
        a12 += g.x * g.y;
        a22 += g.y * g.y;
        b1 += g.x * rhs;
        b2 += g.y * rhs;
    }

    [[nodiscard]] Point2 solve() const {
        const double det = a11 * a22 - a12 * a12;
        const double scale = 0.5 * (a11 + a22);
        if (!(det > 1e-12 * scale * scale))
            throw Error(ErrorCode::RankDeficient, "readings do not determine a unique point");
        return {(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
    }
};

}  // namespace detail

/// Two-view estimate from the best-conditioned pair of a snapshot. Orthogonal
/// readings use the dual frame; perspective readings solve the pair's two
/// linear equations.
inline Point2 reconstruct_two_view(const Snapshot& snap, const CameraArray& array) {
    const auto [i, j] = best_pair(array);
    const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
    if (!array.kind().is_perspective())
        return reconstruct_two_view(snap.centers.at(ui), snap.centers.at(uj), array.angle(i), array.angle(j));
    detail::NormalEquations eq;
    const auto [g1, b1] = detail::reading_row(array, array.angle(i), snap.centers.at(ui));
    const auto [g2, b2] = detail::reading_row(array, array.angle(j), snap.centers.at(uj));
    eq.add(g1, b1);
    eq.add(g2, b2);
    return eq.solve();
}

/// Unweighted least squares over all cameras. Orthogonal: the pseudo-inverse
/// of the frame applied to the readings. Perspective: the stacked equations
/// f<p,phi_i> - s_i (r + f - <p,phi_perp_i>) = 0.
inline Point2 reconstruct_least_squares(const Snapshot& snap, const CameraArray& array) {
    detail::require(array.cameras() >= 2, "least squares needs at least two cameras");
    detail::require(snap.centers.size() == static_cast<std::size_t>(array.cameras()),
                    "snapshot does not match the camera array");
    detail::NormalEquations eq;
    for (int i = 0; i < array.cameras(); ++i) {
        const auto [g, b] = detail::reading_row(array, array.angle(i), snap.centers[static_cast<std::size_t>(i)]);
        eq.add(g, b);
    }
    return eq.solve();
}

/// Consistent estimate: centroid of the cell carrying the snapshot's signature.
inline Point2 reconstruct_cell_centroid(const Snapshot& snap, const Partition& partition) {
    const Cell* cell = partition.find(snap.indices);
    if (cell == nullptr) throw Error(ErrorCode::CellNotFound, "no cell carries the observed signature");
    return cell->centroid;
}

/// Runs the acquisition pipeline on `p` and applies an estimator. `partition`
/// is required for the cell-centroid estimator.
inline LocalisationResult localise(const CameraArray& array, Point2 p, Estimator estimator,
                                   const Partition* partition = nullptr) {
    const Snapshot snap = snapshot(array, p);
    LocalisationResult out;
    out.estimator = estimator;
    switch (estimator) {
    case Estimator::TwoView: out.estimate = reconstruct_two_view(snap, array); break;
    case Estimator::LeastSquares: out.estimate = reconstruct_least_squares(snap, array); break;
    case Estimator::CellCentroid:
        detail::require(partition != nullptr, "cell-centroid estimator needs a partition");
        out.estimate = reconstruct_cell_centroid(snap, *partition);
        break;
    }
    out.error = distance(p, out.estimate);
    return out;
}

/// Angle a' nearest to `alpha` at which the unquantised orthogonal projection
/// of p equals `reading`: |p| sin(a' + beta) = reading. Returned unwrapped,
/// within pi of `alpha`.
inline double imaginary_angle(Point2 p, double alpha, double reading) {
    const Sweep s = sweep(p);
    detail::require(s.amplitude > 0.0, "imaginary camera angle is undefined at the origin");
    double ratio = reading / s.amplitude;
    if (std::abs(ratio) > 1.0) {
        if (std::abs(ratio) > 1.0 + 1e-12)
            throw Error(ErrorCode::NoSolution, "reading exceeds the projection amplitude");
        ratio = std::copysign(1.0, ratio);
    }
    const double base = std::asin(ratio);
    double best = 0.0;
    double best_gap = 1e300;
    for (double candidate : {base - s.phase, std::numbers::pi - base - s.phase}) {
        // shortest signed difference to alpha, in (-pi, pi]
        double diff = wrap_angle(candidate - alpha);
        if (diff > std::numbers::pi) diff -= 2.0 * std::numbers::pi;
        // equidistant branches: take the anti-clockwise one
        if (std::abs(diff) < best_gap - 1e-12 || (std::abs(diff) <= best_gap + 1e-12 && diff > best - alpha)) {
            best_gap = std::abs(diff);
            best = alpha + diff;
        }
    }
    return best;
}

/// 2x2 matrix E mapping the true point to the localisation error, delta = E p.
struct ErrorMatrix {
    std::array<std::array<double, 2>, 2> e{};

    [[nodiscard]] Vec2 apply(Point2 p) const noexcept {
        return {e[0][0] * p.x + e[0][1] * p.y, e[1][0] * p.x + e[1][1] * p.y};
    }
    [[nodiscard]] double max_abs() const noexcept {
        return std::max({std::abs(e[0][0]), std::abs(e[0][1]), std::abs(e[1][0]), std::abs(e[1][1])});
    }
};

/// E = I - dual(a1) phi(a1')^T - dual(a2) phi(a2')^T
inline ErrorMatrix error_matrix_compact(double alpha1, double alpha2, double alpha1_img, double alpha2_img) {
    const auto d = dual_pair(alpha1, alpha2);
    const Vec2 p1 = frame_vector(alpha1_img);
    const Vec2 p2 = frame_vector(alpha2_img);
    ErrorMatrix m;
    m.e[0][0] = 1.0 - d.first.x * p1.x - d.second.x * p2.x;
    m.e[0][1] = -d.first.x * p1.y - d.second.x * p2.y;
    m.e[1][0] = -d.first.y * p1.x - d.second.y * p2.x;
    m.e[1][1] = 1.0 - d.first.y * p1.y - d.second.y * p2.y;
    return m;
}

/// The same matrix written as a product of the dual-frame factor and the
/// angle-shift differences:
///   E = 1/sin(a1 - a2) [cos a2, -cos a1; sin a2, -sin a1]
///         [sin a1 - sin a1', cos a1' - cos a1; sin a2 - sin a2', cos a2' - cos a2]
inline ErrorMatrix error_matrix_expanded(double alpha1, double alpha2, double alpha1_img, double alpha2_img) {
    const double s = std::sin(alpha1 - alpha2);
    if (!(std::abs(s) > kParallelEps))
        throw Error(ErrorCode::ParallelImagePlanes, "image planes at the two angles are parallel");
    const double left[2][2] = {{std::cos(alpha2), -std::cos(alpha1)}, {std::sin(alpha2), -std::sin(alpha1)}};
    const double right[2][2] = {
        {std::sin(alpha1) - std::sin(alpha1_img), std::cos(alpha1_img) - std::cos(alpha1)},
        {std::sin(alpha2) - std::sin(alpha2_img), std::cos(alpha2_img) - std::cos(alpha2)},
    };
    ErrorMatrix m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.e[i][j] = (left[i][0] * right[0][j] + left[i][1] * right[1][j]) / s;
    return m;
}

/// Worst-case squared localisation error outside the central circle: 8 pi^2 r^2 / m^2.
inline double worst_case_bound(int cameras, double radius) {
    detail::require(cameras >= 2 && radius > 0.0, "bound needs m >= 2 and r > 0");
    const double m = cameras;
    return 8.0 * std::numbers::pi * std::numbers::pi * radius * radius / (m * m);
}

/// Point-dependent intermediate bound 4 pi^2 (x + y)^2 / m^2.
inline double point_bound(Point2 p, int cameras) {
    detail::require(cameras >= 2, "bound needs m >= 2");
    const double m = cameras;
    const double s = p.x + p.y;
    return 4.0 * std::numbers::pi * std::numbers::pi * s * s / (m * m);
}

}  // namespace camloc

#endif  // CAMLOC_LOCALISE_HPP
