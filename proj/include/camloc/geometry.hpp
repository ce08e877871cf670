#ifndef CAMLOC_GEOMETRY_HPP
#define CAMLOC_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace camloc {

/// A point (or vector) in world coordinates.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr Point2 operator*(Point2 a, double s) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr Point2 operator/(Point2 a, double s) noexcept { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Point2, Point2) noexcept = default;
};

using Vec2 = Point2;
using Polygon = std::vector<Point2>;

inline constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) noexcept { return norm(a - b); }
inline bool is_finite(Point2 p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Wraps an angle into [0, 2pi).
inline double wrap_angle(double a) noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(a, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
}

/// Signed area, positive for counter-clockwise vertex order.
inline double signed_area(std::span<const Point2> poly) noexcept {
    double acc = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) acc += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * acc;
}

inline double area(std::span<const Point2> poly) noexcept { return std::abs(signed_area(poly)); }

/// Area centroid. Vertices are shifted to the first one before accumulating so
/// small cells far from the origin keep their precision.
inline Point2 centroid(std::span<const Point2> poly) noexcept {
    if (poly.empty()) return {};
    const Point2 o = poly[0];
    double a2 = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = poly[i] - o;
        const Point2 q = poly[(i + 1) % n] - o;
        const double c = cross(p, q);
        a2 += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    if (a2 == 0.0) {
        Point2 mean{};
        for (const auto& p : poly) mean = mean + p;
        return mean / static_cast<double>(n);
    }
    return o + Point2{cx / (3.0 * a2), cy / (3.0 * a2)};
}

/// Largest pairwise vertex distance.
inline double diameter(std::span<const Point2> poly) noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j) best = std::max(best, distance(poly[i], poly[j]));
    return best;
}

inline bool is_convex_ccw(std::span<const Point2> poly, double tol = 1e-12) noexcept {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i], b = poly[(i + 1) % n], c = poly[(i + 2) % n];
        const double scale = std::max({norm(b - a) * norm(c - b), 1e-300});
        if (cross(b - a, c - b) < -tol * scale) return false;
    }
    return signed_area(poly) > 0.0;
}

/// Point-in-convex-polygon (CCW). Points on the boundary count as inside.
inline bool contains(std::span<const Point2> poly, Point2 p, double tol = 1e-12) noexcept {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i], b = poly[(i + 1) % n];
        if (cross(b - a, p - a) < -tol * norm(b - a)) return false;
    }
    return n >= 3;
}

/// Regular polygon with `sides` vertices on the circle of radius `radius`, CCW,
/// first vertex on the positive X axis.
inline Polygon regular_polygon(int sides, double radius) {
    Polygon poly;
    poly.reserve(static_cast<std::size_t>(sides));
    for (int i = 0; i < sides; ++i) {
        const double t = 2.0 * std::numbers::pi * i / sides;
        poly.push_back({radius * std::cos(t), radius * std::sin(t)});
    }
    return poly;
}

/// Line a*x + b*y = c with (a, b) of unit length.
struct Line {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    [[nodiscard]] double signed_distance(Point2 p) const noexcept { return a * p.x + b * p.y - c; }
    [[nodiscard]] double distance_from_origin() const noexcept { return std::abs(c); }
};

/// Splits a convex polygon by a line. Returns (negative side, positive side);
/// either may be empty when the line does not cross the interior. Vertices
/// within `eps` of the line are treated as lying on it.
inline std::pair<Polygon, Polygon> split_convex(std::span<const Point2> poly, const Line& line, double eps) {
    const std::size_t n = poly.size();
    std::vector<double> d(n);
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = line.signed_distance(poly[i]);
        if (std::abs(d[i]) <= eps) d[i] = 0.0;
        lo = std::min(lo, d[i]);
        hi = std::max(hi, d[i]);
    }
    if (hi <= 0.0) return {Polygon(poly.begin(), poly.end()), {}};
    if (lo >= 0.0) return {{}, Polygon(poly.begin(), poly.end())};

    Polygon neg, pos;
    neg.reserve(n + 2);
    pos.reserve(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const Point2 p = poly[i];
        if (d[i] <= 0.0) neg.push_back(p);
        if (d[i] >= 0.0) pos.push_back(p);
        if ((d[i] < 0.0 && d[j] > 0.0) || (d[i] > 0.0 && d[j] < 0.0)) {
            const double t = d[i] / (d[i] - d[j]);
            const Point2 x = p + t * (poly[j] - p);
            neg.push_back(x);
            pos.push_back(x);
        }
    }
    return {std::move(neg), std::move(pos)};
}

}  // namespace camloc

#endif  // CAMLOC_GEOMETRY_HPP
