#ifndef CAMLOC_PARTITION_HPP
#define CAMLOC_PARTITION_HPP

// Cells of constant signature inside the region of interest.
//
// Every quantiser threshold is a straight line in world coordinates for both
// projection models, so each cell is the intersection of m strips with the
// disc and is convex. Cells are built by splitting a regular polygon that
// approximates the disc with every threshold line in turn.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <unordered_map>
#include <utility>
#include <vector>

#include "camloc/camera_model.hpp"
#include "camloc/error.hpp"
#include "camloc/geometry.hpp"

namespace camloc {

inline constexpr int kDefaultDiscSides = 720;
inline constexpr double kSliverArea = 1e-14;  // relative to r^2

struct BoundaryLine {
    Line line;  // positive side: projection above the threshold
    int camera = 0;
    int threshold_k = 0;
};

struct Cell {
    std::vector<int> signature;
    Polygon polygon;  // convex, counter-clockwise
    double area = 0.0;
    Point2 centroid;
    double diameter = 0.0;
};

struct SignatureHash {
    std::size_t operator()(const std::vector<int>& sig) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int v : sig) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

class Partition {
public:
    Partition(CameraArray array, std::vector<Cell> cells, int disc_sides)
        : array_(std::move(array)), cells_(std::move(cells)), disc_sides_(disc_sides) {
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            auto [it, inserted] = lookup_.try_emplace(cells_[i].signature, i);
            if (!inserted) {
                ++duplicates_;
                if (cells_[i].area > cells_[it->second].area) it->second = i;
            }
        }
    }

    [[nodiscard]] const CameraArray& array() const noexcept { return array_; }
    [[nodiscard]] const std::vector<Cell>& cells() const noexcept { return cells_; }
    [[nodiscard]] int disc_sides() const noexcept { return disc_sides_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
    /// Number of cells whose signature repeats an earlier cell's.
    [[nodiscard]] std::size_t duplicate_signatures() const noexcept { return duplicates_; }

    /// Cell with the given signature, or nullptr.
    [[nodiscard]] const Cell* find(const std::vector<int>& signature) const {
        const auto it = lookup_.find(signature);
        return it == lookup_.end() ? nullptr : &cells_[it->second];
    }

    [[nodiscard]] double total_area() const noexcept {
        double acc = 0.0;
        for (const auto& c : cells_) acc += c.area;
        return acc;
    }

    /// Area of the regular polygon the cells tile.
    [[nodiscard]] double disc_polygon_area() const noexcept {
        const double r = array_.radius();
        return 0.5 * disc_sides_ * r * r * std::sin(2.0 * std::numbers::pi / disc_sides_);
    }

private:
    CameraArray array_;
    std::vector<Cell> cells_;
    int disc_sides_;
    std::unordered_map<std::vector<int>, std::size_t, SignatureHash> lookup_;
    std::size_t duplicates_ = 0;
};

namespace detail {

/// Threshold line of camera `alpha` at image-plane level `level`.
inline Line threshold_line(const CameraArray& array, double alpha, double level) {
    const Vec2 phi = frame_vector(alpha);
    if (!array.kind().is_perspective()) return {phi.x, phi.y, level};
    // f<p,phi> = level * (r + f - <p,phi_perp>)
    const double f = array.focal_length();
    const Vec2 g = f * phi + level * normal_vector(alpha);
    const double len = norm(g);
    return {g.x / len, g.y / len, level * (array.radius() + f) / len};
}

/// World-space distance from the origin to the threshold line at `level`;
/// the same for every camera.
inline double threshold_distance(const CameraArray& array, double level) {
    if (!array.kind().is_perspective()) return std::abs(level);
    const double f = array.focal_length();
    return std::abs(level) * (array.radius() + f) / std::hypot(f, level);
}

inline bool crosses_disc(const CameraArray& array, double level) {
    return threshold_distance(array, level) < array.radius() * (1.0 - 1e-9);
}

/// Threshold integers whose lines cross the open disc, ascending.
inline std::vector<int> crossing_thresholds(const CameraArray& array) {
    std::vector<int> ks;
    const Parity parity = array.parity();
    const int n = array.pixels();
    for (int k = -n; k <= n; ++k) {
        if (crosses_disc(array, threshold_value(k, parity) * array.pixel_width())) ks.push_back(k);
    }
    return ks;
}

}  // namespace detail

/// Every (camera, threshold) line that crosses the open disc of radius r.
inline std::vector<BoundaryLine> boundary_lines(const CameraArray& array) {
    std::vector<BoundaryLine> out;
    const auto ks = detail::crossing_thresholds(array);
    out.reserve(ks.size() * static_cast<std::size_t>(array.cameras()));
    for (int i = 0; i < array.cameras(); ++i) {
        for (int k : ks) {
            const double level = threshold_value(k, array.parity()) * array.pixel_width();
            out.push_back({detail::threshold_line(array, array.angle(i), level), i, k});
        }
    }
    return out;
}

inline Partition build_partition(const CameraArray& array, int disc_sides = kDefaultDiscSides) {
    detail::require(disc_sides >= 16, "disc polygon needs at least 16 sides");
    const double r = array.radius();
    const double eps = 1e-12 * r;
    const double sliver = kSliverArea * r * r;

    std::vector<Polygon> polys{regular_polygon(disc_sides, r)};
    std::vector<Polygon> next;
    for (const auto& bl : boundary_lines(array)) {
        next.clear();
        next.reserve(polys.size() + 16);
        for (auto& poly : polys) {
            auto [neg, pos] = split_convex(poly, bl.line, eps);
            if (neg.empty() || pos.empty()) {
                next.push_back(std::move(poly));
                continue;
            }
            for (auto* piece : {&neg, &pos}) {
                for (const auto& v : *piece) {
                    if (!is_finite(v))
                        throw Error(ErrorCode::DegenerateArrangement, "split produced a non-finite vertex");
                }
                if (piece->size() >= 3 && area(*piece) >= sliver) next.push_back(std::move(*piece));
            }
        }
        polys.swap(next);
    }

    std::vector<Cell> cells;
    cells.reserve(polys.size());
    for (auto& poly : polys) {
        if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
        Cell c;
        c.area = area(poly);
        c.centroid = centroid(poly);
        c.diameter = diameter(poly);
        c.signature = snapshot(array, c.centroid).indices;
        c.polygon = std::move(poly);
        cells.push_back(std::move(c));
    }
    return Partition(array, std::move(cells), disc_sides);
}

struct RasterPartition {
    std::size_t cell_count = 0;
    std::map<std::vector<int>, std::int64_t> occupancy;  // signature -> grid points
    std::int64_t excluded = 0;                           // grid points dropped as too close to a line
};

/// Labels a resolution x resolution grid over the true disc with snapshot
/// signatures. Grid points closer than `exclusion` (world units) to a boundary
/// line are left out; a negative value means half a grid step.
inline RasterPartition raster_partition(const CameraArray& array, int resolution = 2048, double exclusion = -1.0) {
    detail::require(resolution >= 64, "raster resolution must be at least 64");
    const double r = array.radius();
    const double w = array.pixel_width();
    const double inv_w = 1.0 / w;
    const int m = array.cameras();
    const double h = 2.0 * r / resolution;
    const double band = exclusion < 0.0 ? 0.5 * h : exclusion;
    const bool persp = array.kind().is_perspective();
    const bool even = array.parity() == Parity::Even;
    const double f = array.focal_length();
    const double offset = even ? 0.0 : 0.5;
    const auto [idx_lo, idx_hi] = array.pixel_range();

    const auto ks = detail::crossing_thresholds(array);
    const int kmin = ks.empty() ? 1 : ks.front();
    const int kmax = ks.empty() ? 0 : ks.back();
    // world distance per unit of |q - level| for perspective lines, divided by depth
    std::vector<double> line_scale;
    for (int k = kmin; k <= kmax; ++k) {
        const double level = (k + offset) * w;
        line_scale.push_back(persp ? 1.0 / std::hypot(f, level) : 1.0);
    }

    struct Cam {
        double s, c;
    };
    std::vector<Cam> cams;
    for (int i = 0; i < m; ++i) cams.push_back({std::sin(array.angle(i)), std::cos(array.angle(i))});

    RasterPartition out;
    std::unordered_map<std::vector<int>, std::int64_t, SignatureHash> counts;
    std::vector<int> sig(static_cast<std::size_t>(m)), run_sig;
    std::int64_t run = 0;
    auto flush = [&] {
        if (run > 0) counts[run_sig] += run;
        run = 0;
    };

    for (int row = 0; row < resolution; ++row) {
        const double y = -r + (row + 0.5) * h;
        for (int col = 0; col < resolution; ++col) {
            const double x = -r + (col + 0.5) * h;
            if (x * x + y * y >= r * r) {
                flush();
                continue;
            }
            bool near_line = false;
            for (std::size_t i = 0; i < cams.size(); ++i) {
                const double along = -x * cams[i].s + y * cams[i].c;
                double q = along;
                double depth = 1.0;
                if (persp) {
                    depth = r + f - (x * cams[i].c + y * cams[i].s);
                    q = f * along / depth;
                }
                const double u = q * inv_w;
                int idx = 0;
                if (even) {
                    idx = static_cast<int>(std::floor(u));
                } else {
                    const double mag = std::floor(std::abs(u) + 0.5);
                    idx = static_cast<int>(u < 0.0 ? -mag : mag);
                }
                sig[i] = std::clamp(idx, idx_lo, idx_hi);
                const int k = static_cast<int>(std::lround(u - offset));
                if (k >= kmin && k <= kmax) {
                    const double gap = std::abs(u - offset - k) * w;
                    const double d = persp ? depth * gap * line_scale[static_cast<std::size_t>(k - kmin)] : gap;
                    if (d < band) {
                        near_line = true;
                        break;
                    }
                }
            }
            if (near_line) {
                flush();
                ++out.excluded;
                continue;
            }
            if (run > 0 && sig != run_sig) flush();
            if (run == 0) run_sig = sig;
            ++run;
        }
        flush();
    }
    out.occupancy.insert(counts.begin(), counts.end());
    out.cell_count = out.occupancy.size();
    return out;
}

/// Radius of the disc around the origin that extra cameras refine at most
/// angularly: distance to the nearest threshold line with k != 0 (even n) or
/// to the nearest line at all (odd n). Capped at r.
inline double central_radius(const CameraArray& array) {
    double best = array.radius();
    for (int k : detail::crossing_thresholds(array)) {
        if (array.parity() == Parity::Even && k == 0) continue;
        best = std::min(best, detail::threshold_distance(array, threshold_value(k, array.parity()) * array.pixel_width()));
    }
    return best;
}

/// Region of world space imaged by one pixel, cut to the slab between the
/// front and back tangents of the disc. Rectangle of width w for orthogonal
/// projection; trapezoid with parallel sides w (near) and (1 + 2r/f) w (far)
/// for perspective.
inline Polygon pixel_backprojection(const CameraArray& array, int camera, int pixel) {
    detail::require(camera >= 0 && camera < array.cameras(), "camera index out of range");
    const auto [lo_idx, hi_idx] = array.pixel_range();
    detail::require(pixel >= lo_idx && pixel <= hi_idx, "pixel index out of range");
    const double w = array.pixel_width();
    const double r = array.radius();
    const double lo = array.parity() == Parity::Even ? pixel * w : (pixel - 0.5) * w;
    const double hi = lo + w;
    const double alpha = array.angle(camera);
    const Vec2 phi = frame_vector(alpha);
    const Vec2 out = normal_vector(alpha);

    // (image coordinate, height along the outward normal) -> world point
    auto at = [&](double q, double height) {
        double along = q;
        if (array.kind().is_perspective()) {
            const double f = array.focal_length();
            along = q * (r + f - height) / f;
        }
        return along * phi + height * out;
    };
    // near side is the front of the disc (height +r), far side the back (-r)
    Polygon poly{at(lo, -r), at(hi, -r), at(hi, r), at(lo, r)};
    if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    return poly;
}

inline const Cell& cell_of(const Partition& partition, Point2 p) {
    const double r = partition.array().radius();
    detail::require(norm(p) <= r * (1.0 - 1e-9), "point must lie strictly inside the region of interest");
    const Cell* cell = partition.find(snapshot(partition.array(), p).indices);
    if (cell == nullptr) throw Error(ErrorCode::CellNotFound, "no cell carries this point's signature");
    return *cell;
}

}  // namespace camloc

#endif  // CAMLOC_PARTITION_HPP
