// camloc: command-line front end for partitions, Monte-Carlo MSE runs, the
// worst-case bound, the MSE-vs-cameras figure and the explorer service.
//
// Exit codes: 0 success, 2 invalid flags, 3 numerical failure, 1 I/O failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "camloc/camloc.hpp"
#include "camloc/service.hpp"

namespace {

constexpr int kExitFlags = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 1;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

camloc::ProjectionKind make_kind(const std::string& projection, double focal, double radius) {
    if (projection == "persp") return camloc::ProjectionKind::perspective(focal > 0.0 ? focal : radius);
    return camloc::ProjectionKind::orthogonal();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localisation accuracy of circular camera arrays"};
    app.require_subcommand(1);

    // partition
    auto* part = app.add_subcommand("partition", "Cell partition of the region of interest (JSON or SVG)");
    int p_cameras = 0, p_pixels = 0, p_sides = camloc::kDefaultDiscSides;
    double p_radius = 1.0, p_focal = 0.0;
    std::string p_projection = "orth", p_out;
    part->add_option("--cameras", p_cameras, "Number of cameras m")->required()->check(CLI::Range(1, 4096));
    part->add_option("--pixels", p_pixels, "Pixels per sensor n")->required()->check(CLI::Range(1, 4096));
    part->add_option("--radius", p_radius, "Ring radius r")->check(CLI::PositiveNumber);
    part->add_option("--projection", p_projection, "orth or persp")->check(CLI::IsMember({"orth", "persp"}));
    part->add_option("--focal", p_focal, "Focal length f (defaults to r)")->check(CLI::PositiveNumber);
    part->add_option("--disc-sides", p_sides, "Sides of the disc polygon")->check(CLI::Range(16, 1 << 20));
    part->add_option("--out", p_out, "Output file (.json or .svg); stdout JSON when omitted");

    // mse
    auto* mse = app.add_subcommand("mse", "Monte-Carlo mean squared error over a range of camera counts");
    int m_from = 0, m_to = 0, m_pixels = 0, m_threads = 1;
    double m_radius = 1.0, m_focal = 0.0;
    std::int64_t m_samples = 10000;
    std::uint64_t m_seed = 0;
    std::string m_projection = "orth", m_estimator = "centroid", m_out;
    mse->add_option("--cameras-from", m_from, "First camera count")->required()->check(CLI::Range(2, 4096));
    mse->add_option("--cameras-to", m_to, "Last camera count")->required()->check(CLI::Range(2, 4096));
    mse->add_option("--pixels", m_pixels, "Pixels per sensor n")->required()->check(CLI::Range(1, 4096));
    mse->add_option("--radius", m_radius, "Ring radius r")->check(CLI::PositiveNumber);
    mse->add_option("--projection", m_projection, "orth, persp or both")
        ->check(CLI::IsMember({"orth", "persp", "both"}));
    mse->add_option("--focal", m_focal, "Focal length f (defaults to r)")->check(CLI::PositiveNumber);
    mse->add_option("--estimator", m_estimator, "centroid, lsq or twoview")
        ->check(CLI::IsMember({"centroid", "lsq", "twoview"}));
    mse->add_option("--samples", m_samples, "Samples per row")->check(CLI::Range(std::int64_t{100}, std::int64_t{1} << 40));
    mse->add_option("--seed", m_seed, "Random seed");
    mse->add_option("--threads", m_threads, "Worker threads")->check(CLI::Range(1, 1024));
    mse->add_option("--out", m_out, "Output CSV file; stdout when omitted");

    // bound
    auto* bound = app.add_subcommand("bound", "Worst-case squared-error bound 8 pi^2 r^2 / m^2");
    int b_cameras = 0;
    double b_radius = 1.0;
    bound->add_option("--cameras", b_cameras, "Number of cameras m")->required()->check(CLI::Range(2, 1 << 30));
    bound->add_option("--radius", b_radius, "Ring radius r")->check(CLI::PositiveNumber);

    // figure growth
    auto* figure = app.add_subcommand("figure", "Preset plots");
    figure->require_subcommand(1);
    auto* growth = figure->add_subcommand("growth", "MSE vs camera count, m = 20..50, n = 3, f = r, both projections");
    std::string g_out, g_csv;
    std::int64_t g_samples = 10000;
    std::uint64_t g_seed = 0;
    int g_threads = 1;
    growth->add_option("--out", g_out, "Output SVG file")->required();
    growth->add_option("--csv", g_csv, "Also write the MSE table as CSV");
    growth->add_option("--samples", g_samples, "Samples per row")->check(CLI::Range(std::int64_t{100}, std::int64_t{1} << 40));
    growth->add_option("--seed", g_seed, "Random seed");
    growth->add_option("--threads", g_threads, "Worker threads")->check(CLI::Range(1, 1024));

    // serve
    auto* serve = app.add_subcommand("serve", "Start the explorer HTTP service");
    int s_port = 8080;
    std::string s_host = "0.0.0.0", s_ui = "web";
    serve->add_option("--port", s_port, "TCP port")->check(CLI::Range(1, 65535));
    serve->add_option("--host", s_host, "Bind address");
    serve->add_option("--ui-dir", s_ui, "Directory with the static UI bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitFlags;
    }

    try {
        if (*part) {
            const camloc::CameraArray array(p_cameras, p_radius, p_pixels, make_kind(p_projection, p_focal, p_radius));
            const auto partition = camloc::build_partition(array, p_sides);
            if (ends_with(p_out, ".svg"))
                write_output(p_out, camloc::io::partition_svg(partition));
            else
                write_output(p_out, camloc::io::to_json(partition).dump() + "\n");
        } else if (*mse) {
            if (m_to < m_from) throw camloc::Error(camloc::ErrorCode::InvalidArgument, "--cameras-to is below --cameras-from");
            std::vector<int> ms(static_cast<std::size_t>(m_to - m_from + 1));
            std::iota(ms.begin(), ms.end(), m_from);
            std::vector<camloc::ProjectionKind> kinds;
            if (m_projection != "persp") kinds.push_back(camloc::ProjectionKind::orthogonal());
            if (m_projection != "orth") kinds.push_back(make_kind("persp", m_focal, m_radius));
            const auto estimator = *camloc::parse_estimator(m_estimator);
            const auto tables =
                camloc::sweep_cameras(ms, m_pixels, m_radius, kinds, estimator, m_samples, m_seed, m_threads);
            write_output(m_out, camloc::io::to_csv(tables));
        } else if (*bound) {
            std::cout << camloc::io::format_exact(camloc::worst_case_bound(b_cameras, b_radius)) << "\n";
        } else if (*growth) {
            std::vector<int> ms(31);
            std::iota(ms.begin(), ms.end(), 20);
            const std::vector kinds{camloc::ProjectionKind::orthogonal(), camloc::ProjectionKind::perspective(1.0)};
            const auto tables = camloc::sweep_cameras(ms, 3, 1.0, kinds, camloc::Estimator::CellCentroid, g_samples,
                                                      g_seed, g_threads);
            const auto fit_o = camloc::fit_reciprocal_quadratic(tables[0]);
            const auto fit_p = camloc::fit_reciprocal_quadratic(tables[1]);
            const std::vector<camloc::io::Series> series{
                {"Orthogonal projection", "#000000", &tables[0], &fit_o},
                {"Perspective projection (f = r)", "#1f4e9a", &tables[1], &fit_p},
            };
            write_output(g_out, camloc::io::growth_svg(series));
            if (!g_csv.empty()) write_output(g_csv, camloc::io::to_csv(tables));
            for (const auto& [name, fit] : {std::pair{"orth", fit_o}, std::pair{"persp", fit_p}}) {
                std::cout << name << ": 1/MSE = " << fit.a << " m^2 + " << fit.b << " m + " << fit.c
                          << "  (R^2 = " << fit.r_squared << ")\n";
            }
        } else if (*serve) {
            std::cerr << "serving on http://" << s_host << ":" << s_port << "\n";
            if (!camloc::service::run_server(s_port, s_ui, s_host)) {
                std::cerr << "error: cannot listen on " << s_host << ":" << s_port << "\n";
                return kExitIo;
            }
        }
    } catch (const camloc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_numerical() ? kExitNumerical : kExitFlags;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
