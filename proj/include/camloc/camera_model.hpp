#ifndef CAMLOC_CAMERA_MODEL_HPP
#define CAMLOC_CAMERA_MODEL_HPP

// Circular camera ring: frame vectors, projections and the pixel quantiser.
//
// Camera i sits at angle alpha_i = 2*pi*i/m on the ring of radius r, looking at
// the origin. Its image plane is the tangent line at [cos a, sin a]; image
// coordinates are measured along phi(a) = [-sin a, cos a] from the tangency
// point, for both projection models.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "camloc/error.hpp"
#include "camloc/geometry.hpp"

namespace camloc {

inline constexpr double kParallelEps = 1e-9;

enum class Projection { Orthogonal, Perspective };

struct ProjectionKind {
    Projection tag = Projection::Orthogonal;
    double focal_length = 0.0;  // only meaningful for Perspective

    static ProjectionKind orthogonal() noexcept { return {}; }
    static ProjectionKind perspective(double f) {
        detail::require(std::isfinite(f) && f > 0.0, "perspective projection needs a positive focal length");
        return {Projection::Perspective, f};
    }

    [[nodiscard]] bool is_perspective() const noexcept { return tag == Projection::Perspective; }
    [[nodiscard]] std::string short_name() const { return is_perspective() ? "persp" : "orth"; }
};

enum class Parity { Even, Odd };

inline constexpr Parity parity_of(int pixels) noexcept { return pixels % 2 == 0 ? Parity::Even : Parity::Odd; }

/// Image-plane threshold in units of w: k for even sensors, k + 1/2 for odd.
inline constexpr double threshold_value(int k, Parity parity) noexcept {
    return parity == Parity::Even ? static_cast<double>(k) : k + 0.5;
}

/// phi(a): unit vector along the image plane, anti-clockwise around the ring.
inline Vec2 frame_vector(double alpha) noexcept { return {-std::sin(alpha), std::cos(alpha)}; }

/// phi_perp(a): unit normal of the image plane (outward, towards the camera).
inline Vec2 normal_vector(double alpha) noexcept { return {std::cos(alpha), std::sin(alpha)}; }

struct DualPair {
    Vec2 first;   // dual of phi(alpha1)
    Vec2 second;  // dual of phi(alpha2)
};

/// Dual vectors of the two-element frame {phi(alpha1), phi(alpha2)}, so that
/// <p,phi1> * first + <p,phi2> * second == p.
inline DualPair dual_pair(double alpha1, double alpha2) {
    const double s = std::sin(alpha2 - alpha1);
    if (!(std::abs(s) > kParallelEps))
        throw Error(ErrorCode::ParallelImagePlanes, "image planes at the two angles are parallel");
    return {Vec2{std::cos(alpha2), std::sin(alpha2)} / s, Vec2{std::cos(alpha1), std::sin(alpha1)} / (-s)};
}

class CameraArray {
public:
    CameraArray(int cameras, double radius, int pixels, ProjectionKind kind = ProjectionKind::orthogonal())
        : m_(cameras), r_(radius), n_(pixels), kind_(kind) {
        detail::require(cameras >= 1, "camera count must be at least 1");
        detail::require(std::isfinite(radius) && radius > 0.0, "ring radius must be positive");
        detail::require(pixels >= 1, "pixel count must be at least 1");
        if (kind.is_perspective())
            detail::require(std::isfinite(kind.focal_length) && kind.focal_length > 0.0,
                            "perspective projection needs a positive focal length");
        if (kind_.is_perspective()) {
            const double f = kind_.focal_length;
            sensor_ = 2.0 * f * r_ / std::sqrt(f * f + 2.0 * f * r_);
        } else {
            sensor_ = 2.0 * r_;
        }
        w_ = sensor_ / n_;
        angles_.reserve(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) angles_.push_back(2.0 * std::numbers::pi * i / m_);
    }

    [[nodiscard]] int cameras() const noexcept { return m_; }
    [[nodiscard]] double radius() const noexcept { return r_; }
    [[nodiscard]] int pixels() const noexcept { return n_; }
    [[nodiscard]] Parity parity() const noexcept { return parity_of(n_); }
    [[nodiscard]] const ProjectionKind& kind() const noexcept { return kind_; }
    [[nodiscard]] double focal_length() const noexcept { return kind_.focal_length; }
    [[nodiscard]] double angle(int i) const { return angles_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] const std::vector<double>& angles() const noexcept { return angles_; }
    [[nodiscard]] double sensor_length() const noexcept { return sensor_; }
    [[nodiscard]] double pixel_width() const noexcept { return w_; }

    /// Valid pixel index range [lo, hi].
    [[nodiscard]] std::pair<int, int> pixel_range() const noexcept {
        if (parity() == Parity::Even) return {-n_ / 2, n_ / 2 - 1};
        return {-(n_ - 1) / 2, (n_ - 1) / 2};
    }

private:
    int m_;
    double r_;
    int n_;
    ProjectionKind kind_;
    double sensor_ = 0.0;
    double w_ = 0.0;
    std::vector<double> angles_;
};

/// Projection of p onto the image plane of a camera at angle alpha.
inline double project(const ProjectionKind& kind, double radius, double alpha, Point2 p) {
    const double along = dot(p, frame_vector(alpha));
    if (!kind.is_perspective()) return along;
    const double f = kind.focal_length;
    const double depth = radius + f - dot(p, normal_vector(alpha));
    if (!(depth > 0.0)) throw Error(ErrorCode::BehindCamera, "point is not in front of the pinhole");
    return f * along / depth;
}

inline double project(const CameraArray& array, int camera, Point2 p) {
    detail::require(camera >= 0 && camera < array.cameras(), "camera index out of range");
    return project(array.kind(), array.radius(), array.angle(camera), p);
}

struct Reading {
    int index = 0;
    double center = 0.0;
    bool out_of_sensor = false;
};

/// Uniform pixel quantiser. Even n: floor(y/w), centers at (k + 1/2) w. Odd n:
/// sign(y) * floor(|y|/w + 1/2), centers at k w. Readings beyond the sensor
/// clamp to the edge pixel and are flagged.
inline Reading quantise(double y, double w, int n) {
    detail::require(w > 0.0 && n >= 1, "quantiser needs w > 0 and n >= 1");
    Reading out;
    long long raw = 0;
    long long lo = 0, hi = 0;
    if (n % 2 == 0) {
        raw = static_cast<long long>(std::floor(y / w));
        lo = -n / 2;
        hi = n / 2 - 1;
    } else {
        const double mag = std::floor(std::abs(y) / w + 0.5);
        raw = static_cast<long long>(y < 0.0 ? -mag : mag);
        lo = -(n - 1) / 2;
        hi = (n - 1) / 2;
    }
    out.index = static_cast<int>(std::clamp(raw, lo, hi));
    out.center = n % 2 == 0 ? (out.index + 0.5) * w : out.index * w;
    out.out_of_sensor = std::abs(y) > 0.5 * n * w * (1.0 + 1e-12);
    return out;
}

/// Per-camera quantised readings of one point.
struct Snapshot {
    std::vector<int> indices;
    std::vector<double> centers;
    std::vector<bool> out_of_sensor;

    [[nodiscard]] bool any_out_of_sensor() const noexcept {
        return std::find(out_of_sensor.begin(), out_of_sensor.end(), true) != out_of_sensor.end();
    }
};

inline Snapshot snapshot(const CameraArray& array, Point2 p) {
    Snapshot s;
    const auto m = static_cast<std::size_t>(array.cameras());
    s.indices.reserve(m);
    s.centers.reserve(m);
    s.out_of_sensor.reserve(m);
    for (int i = 0; i < array.cameras(); ++i) {
        const Reading r = quantise(project(array, i, p), array.pixel_width(), array.pixels());
        s.indices.push_back(r.index);
        s.centers.push_back(r.center);
        s.out_of_sensor.push_back(r.out_of_sensor);
    }
    return s;
}

/// Orthogonal projection as a function of the camera angle:
/// q(alpha) = amplitude * sin(alpha + phase).
struct Sweep {
    double amplitude = 0.0;
    double phase = 0.0;

    [[nodiscard]] double operator()(double alpha) const noexcept { return amplitude * std::sin(alpha + phase); }
};

inline Sweep sweep(Point2 p) noexcept {
    if (p.x == 0.0 && p.y == 0.0) return {};
    return {norm(p), std::atan2(p.y, -p.x)};
}

struct Discontinuity {
    double angle = 0.0;  // in [0, 2pi)
    int k = 0;           // threshold integer: level k*w (even) or (k+1/2)*w (odd)
};

/// Angles where the quantised orthogonal projection of p jumps, i.e. where the
/// sweep crosses a quantiser threshold. Tangential touches are not jumps.
inline std::vector<Discontinuity> discontinuity_angles(Point2 p, double w, Parity parity) {
    detail::require(w > 0.0, "pixel width must be positive");
    const Sweep s = sweep(p);
    std::vector<Discontinuity> out;
    if (s.amplitude == 0.0) return out;
    const double offset = parity == Parity::Even ? 0.0 : 0.5;
    const int kmax = static_cast<int>(std::ceil(s.amplitude / w)) + 1;
    for (int k = -kmax; k <= kmax; ++k) {
        const double level = (k + offset) * w;
        if (!(std::abs(level) < s.amplitude)) continue;
        const double base = std::asin(level / s.amplitude);
        out.push_back({wrap_angle(base - s.phase), k});
        out.push_back({wrap_angle(std::numbers::pi - base - s.phase), k});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
    std::vector<Discontinuity> merged;
    for (const auto& d : out) {
        if (!merged.empty() && d.angle - merged.back().angle <= 1e-12) continue;
        merged.push_back(d);
    }
    if (merged.size() > 1 && merged.front().angle + 2.0 * std::numbers::pi - merged.back().angle <= 1e-12)
        merged.pop_back();
    return merged;
}

}  // namespace camloc

#endif  // CAMLOC_CAMERA_MODEL_HPP
