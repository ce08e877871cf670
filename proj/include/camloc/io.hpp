#ifndef CAMLOC_IO_HPP
#define CAMLOC_IO_HPP

// File outputs: partition JSON, MSE CSV, and SVG renderings.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "camloc/camera_model.hpp"
#include "camloc/experiments.hpp"
#include "camloc/partition.hpp"

namespace camloc::io {

using nlohmann::json;

inline json to_json(Point2 p) { return json::array({p.x, p.y}); }

inline json to_json(const Cell& cell) {
    json poly = json::array();
    for (const auto& v : cell.polygon) poly.push_back(to_json(v));
    return {
        {"signature", cell.signature},
        {"polygon", std::move(poly)},
        {"area", cell.area},
        {"centroid", to_json(cell.centroid)},
        {"diameter", cell.diameter},
    };
}

/// Partition schema shared by the CLI and the explorer service.
inline json to_json(const Partition& partition) {
    const auto& a = partition.array();
    json cells = json::array();
    for (const auto& c : partition.cells()) cells.push_back(to_json(c));
    return {
        {"m", a.cameras()},
        {"n", a.pixels()},
        {"r", a.radius()},
        {"kind", a.kind().short_name()},
        {"f", a.kind().is_perspective() ? json(a.focal_length()) : json(nullptr)},
        {"w", a.pixel_width()},
        {"central_radius", central_radius(a)},
        {"cells", std::move(cells)},
    };
}

inline json to_json(const Snapshot& s) { return {{"indices", s.indices}, {"centers", s.centers}}; }

/// Shortest decimal form that round-trips through a double.
inline std::string format_exact(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::string csv_header() { return "m,kind,mse,stderr,samples\n"; }

inline std::string csv_row(const MseRow& row, const ProjectionKind& kind) {
    return std::to_string(row.m) + "," + kind.short_name() + "," + format_exact(row.mse) + "," +
           format_exact(row.std_error) + "," + std::to_string(row.samples) + "\n";
}

inline std::string to_csv(std::span<const MseTable> tables) {
    std::string out = csv_header();
    for (const auto& t : tables)
        for (const auto& row : t.rows) out += csv_row(row, t.config.kind);
    return out;
}

namespace detail {
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}
}  // namespace detail

/// Cells, disc outline, camera positions and the central circle.
inline std::string partition_svg(const Partition& partition) {
    const auto& a = partition.array();
    const double size = 800.0;
    const double margin = 40.0;
    const double r = a.radius();
    const double extent = r * 1.08;
    const double scale = (size / 2.0 - margin) / extent;
    auto sx = [&](double x) { return size / 2.0 + scale * x; };
    auto sy = [&](double y) { return size / 2.0 - scale * y; };
    using detail::num;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\" width=\"800\" height=\"800\">\n";
    os << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    os << "<g fill=\"none\" stroke=\"#1f4e9a\" stroke-width=\"0.6\">\n";
    for (const auto& cell : partition.cells()) {
        os << "<polygon points=\"";
        for (std::size_t i = 0; i < cell.polygon.size(); ++i) {
            if (i) os << ' ';
            os << num(sx(cell.polygon[i].x)) << ',' << num(sy(cell.polygon[i].y));
        }
        os << "\"/>\n";
    }
    os << "</g>\n";
    os << "<circle cx=\"400\" cy=\"400\" r=\"" << num(scale * r) << "\" fill=\"none\" stroke=\"#2a9d3a\"/>\n";
    os << "<circle cx=\"400\" cy=\"400\" r=\"" << num(scale * central_radius(a))
       << "\" fill=\"none\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\"/>\n";
    for (int i = 0; i < a.cameras(); ++i) {
        const Vec2 u = normal_vector(a.angle(i));
        os << "<circle cx=\"" << num(sx(1.04 * r * u.x)) << "\" cy=\"" << num(sy(1.04 * r * u.y))
           << "\" r=\"3\" fill=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

struct Series {
    std::string label;
    std::string color;
    const MseTable* table = nullptr;
    const FitResult* fit = nullptr;
};

/// MSE-vs-camera-count plot: markers per series plus the fitted curve.
inline std::string growth_svg(std::span<const Series> series) {
    const double width = 800.0, height = 500.0;
    const double left = 80.0, right = 30.0, top = 30.0, bottom = 60.0;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
    for (const auto& s : series) {
        for (const auto& row : s.table->rows) {
            xmin = std::min(xmin, static_cast<double>(row.m));
            xmax = std::max(xmax, static_cast<double>(row.m));
            ymax = std::max(ymax, row.mse + row.std_error);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > 0.0)) ymax = 1.0;
    ymax *= 1.1;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
    auto sy = [&](double y) { return height - bottom - y / ymax * (height - top - bottom); };
    using detail::num;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\" "
          "font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
       << height - bottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double y = ymax * i / 5.0;
        os << "<line x1=\"" << left - 4 << "\" y1=\"" << num(sy(y)) << "\" x2=\"" << left << "\" y2=\"" << num(sy(y))
           << "\" stroke=\"black\"/>";
        os << "<text x=\"" << left - 8 << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">" << num(y)
           << "</text>\n";
    }
    const int step = std::max(1, static_cast<int>(std::ceil((xmax - xmin) / 8.0)));
    for (int x = static_cast<int>(xmin); x <= static_cast<int>(xmax); x += step) {
        os << "<line x1=\"" << num(sx(x)) << "\" y1=\"" << height - bottom << "\" x2=\"" << num(sx(x)) << "\" y2=\""
           << height - bottom + 4 << "\" stroke=\"black\"/>";
        os << "<text x=\"" << num(sx(x)) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">" << x
           << "</text>\n";
    }
    os << "<text x=\"" << num((left + width - right) / 2) << "\" y=\"" << height - 15
       << "\" text-anchor=\"middle\">No. of cameras</text>\n";
    os << "<text transform=\"translate(20," << num((top + height - bottom) / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">MSE / r^2</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        for (const auto& row : s.table->rows) {
            os << "<circle cx=\"" << num(sx(row.m)) << "\" cy=\"" << num(sy(row.mse)) << "\" r=\"3\" fill=\"none\" stroke=\""
               << s.color << "\"/>\n";
        }
        if (s.fit != nullptr) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-dasharray=\"6 3\" points=\"";
            for (int i = 0; i <= 200; ++i) {
                const double x = xmin + (xmax - xmin) * i / 200.0;
                if (i) os << ' ';
                os << num(sx(x)) << ',' << num(sy((*s.fit)(x)));
            }
            os << "\"/>\n";
        }
        const double ly = top + 10 + 18.0 * static_cast<double>(k);
        os << "<circle cx=\"" << width - 260 << "\" cy=\"" << ly << "\" r=\"3\" fill=\"none\" stroke=\"" << s.color
           << "\"/>";
        os << "<text x=\"" << width - 250 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace camloc::io

#endif  // CAMLOC_IO_HPP
