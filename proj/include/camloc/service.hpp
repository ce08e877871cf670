#ifndef CAMLOC_SERVICE_HPP
#define CAMLOC_SERVICE_HPP

// HTTP facade for the partition explorer. Handlers are plain functions of the
// query parameters so they can be exercised without a socket; run_server()
// wires them to cpp-httplib.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

// Eigen (via experiments.hpp) must precede httplib.h: <resolv.h> defines a
// `_res` macro that collides with Eigen parameter names.
#include "camloc/camera_model.hpp"
#include "camloc/error.hpp"
#include "camloc/experiments.hpp"
#include "camloc/io.hpp"
#include "camloc/localise.hpp"
#include "camloc/partition.hpp"

#include <httplib.h>
#include <json.hpp>

namespace camloc::service {

using nlohmann::json;
using Params = std::map<std::string, std::string, std::less<>>;

inline constexpr int kMaxCameras = 64;
inline constexpr int kMaxPixels = 16;
inline constexpr double kMaxRadius = 10.0;
inline constexpr double kMaxFocalRatio = 100.0;
inline constexpr std::int64_t kMaxSamples = 100000;

struct Response {
    int status = 200;
    json body;
};

/// Validation failure carrying a machine-readable reason.
struct BadRequest {
    std::string reason;
    std::string message;
};

struct ExploreRequest {
    int m = 0;
    int n = 0;
    double r = 1.0;
    ProjectionKind kind;
    std::optional<Point2> probe;
    Estimator estimator = Estimator::CellCentroid;
    std::int64_t samples = 1000;
    std::uint64_t seed = 0;

    [[nodiscard]] CameraArray array() const { return CameraArray(m, r, n, kind); }
};

namespace detail {

template <class T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) return std::nullopt;
    }
    return value;
}

template <class T>
std::optional<T> get(const Params& params, std::string_view key, std::optional<T> fallback = std::nullopt) {
    const auto it = params.find(key);
    if (it == params.end()) {
        if (fallback) return fallback;
        throw BadRequest{"missing_" + std::string(key), "missing parameter '" + std::string(key) + "'"};
    }
    auto v = parse_number<T>(it->second);
    if (!v) throw BadRequest{"invalid_" + std::string(key), "parameter '" + std::string(key) + "' is not a number"};
    return v;
}

inline void check(bool ok, const char* reason, const std::string& message) {
    if (!ok) throw BadRequest{reason, message};
}

}  // namespace detail

/// Parses and validates the common explorer parameters. Throws BadRequest.
inline ExploreRequest parse_request(const Params& params, bool need_probe = false) {
    using detail::check;
    using detail::get;
    ExploreRequest req;
    req.m = *get<int>(params, "m");
    req.n = *get<int>(params, "n");
    req.r = *get<double>(params, "r", 1.0);
    check(req.m >= 1 && req.m <= kMaxCameras, "m_out_of_range", "m must be in [1, 64]");
    check(req.n >= 1 && req.n <= kMaxPixels, "n_out_of_range", "n must be in [1, 16]");
    check(req.r > 0.0 && req.r <= kMaxRadius, "r_out_of_range", "r must be in (0, 10]");

    const auto kind_it = params.find("kind");
    const std::string kind = kind_it == params.end() ? "orth" : kind_it->second;
    if (kind == "orth") {
        req.kind = ProjectionKind::orthogonal();
    } else if (kind == "persp") {
        const double f = *get<double>(params, "f", req.r);
        check(f > 0.0 && f <= kMaxFocalRatio * req.r, "f_out_of_range", "f must be in (0, 100 r]");
        req.kind = ProjectionKind::perspective(f);
    } else {
        throw BadRequest{"invalid_kind", "kind must be 'orth' or 'persp'"};
    }

    if (const auto it = params.find("estimator"); it != params.end()) {
        const auto e = parse_estimator(it->second);
        check(e.has_value(), "invalid_estimator", "estimator must be one of centroid, lsq, twoview");
        req.estimator = *e;
    }
    req.samples = *get<std::int64_t>(params, "samples", std::int64_t{1000});
    check(req.samples >= 100 && req.samples <= kMaxSamples, "samples_out_of_range", "samples must be in [100, 100000]");
    req.seed = *get<std::uint64_t>(params, "seed", std::uint64_t{0});

    if (need_probe || params.contains("x") || params.contains("y")) {
        const Point2 p{*get<double>(params, "x"), *get<double>(params, "y")};
        check(norm(p) <= req.r * (1.0 - 1e-9), "point_outside_disc", "probe point must lie inside the disc");
        req.probe = p;
    }
    return req;
}

namespace detail {

inline Response error_response(int status, std::string_view reason, std::string_view message) {
    return {status, json{{"error", message}, {"reason", reason}}};
}

template <class F>
Response guarded(F&& body) {
    try {
        return body();
    } catch (const BadRequest& e) {
        return error_response(400, e.reason, e.message);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) return error_response(400, "invalid_argument", e.what());
        return error_response(422, to_string(e.code()), e.what());
    }
}

}  // namespace detail

/// GET /api/partition
inline Response handle_partition(const Params& params) {
    return detail::guarded([&] {
        const auto req = parse_request(params);
        return Response{200, io::to_json(build_partition(req.array()))};
    });
}

/// GET /api/estimate
inline Response handle_estimate(const Params& params) {
    return detail::guarded([&] {
        const auto req = parse_request(params, true);
        detail::check(req.m >= 2, "m_out_of_range", "estimates need at least two cameras");
        const auto array = req.array();
        const Point2 p = *req.probe;
        std::optional<Partition> partition;
        if (req.estimator == Estimator::CellCentroid) partition.emplace(build_partition(array));
        const auto result = localise(array, p, req.estimator, partition ? &*partition : nullptr);
        const double central = central_radius(array);
        json body{
            {"snapshot", io::to_json(snapshot(array, p))},
            {"estimator", to_string(req.estimator)},
            {"estimate", io::to_json(result.estimate)},
            {"error", *result.error},
            {"squared_error", *result.error * *result.error},
            {"bound", {{"worst_case", worst_case_bound(array.cameras(), array.radius())},
                       {"point", point_bound(p, array.cameras())}}},
            {"central_radius", central},
            {"inside_central_circle", norm(p) < central},
        };
        return Response{200, std::move(body)};
    });
}

/// GET /api/mse
inline Response handle_mse(const Params& params) {
    return detail::guarded([&] {
        const auto req = parse_request(params);
        const auto array = req.array();
        const auto est = mse_monte_carlo(array, req.estimator, req.samples, req.seed);
        json body{
            {"m", array.cameras()},   {"kind", array.kind().short_name()}, {"mse", est.mse},
            {"stderr", est.std_error}, {"samples", est.samples},           {"excluded", est.excluded},
            {"estimator", to_string(req.estimator)},
            {"seed", req.seed},
        };
        return Response{200, std::move(body)};
    });
}

inline Params to_params(const httplib::Request& req) {
    Params out;
    for (const auto& [k, v] : req.params) out.emplace(k, v);
    return out;
}

/// Registers the API routes (and, when `ui_dir` exists, the static UI bundle)
/// on an httplib server.
inline void install_routes(httplib::Server& server, const std::filesystem::path& ui_dir = {}) {
    auto wrap = [](Response (*handler)(const Params&)) {
        return [handler](const httplib::Request& req, httplib::Response& res) {
            const Response out = handler(to_params(req));
            res.status = out.status;
            if (out.status == 200) res.set_header("Cache-Control", "public, max-age=3600");
            res.set_content(out.body.dump(), "application/json; charset=utf-8");
        };
    };
    server.Get("/api/partition", wrap(&handle_partition));
    server.Get("/api/estimate", wrap(&handle_estimate));
    server.Get("/api/mse", wrap(&handle_mse));
    server.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
        const auto origin = req.get_header_value("Origin");
        if (origin.starts_with("http://localhost") || origin.starts_with("http://127.0.0.1")) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Vary", "Origin");
        }
    });
    std::error_code ec;
    if (!ui_dir.empty() && std::filesystem::is_directory(ui_dir, ec)) server.set_mount_point("/", ui_dir.string());
}

/// Blocks serving on `host:port` until the server is stopped.
inline bool run_server(int port, const std::filesystem::path& ui_dir = {}, const std::string& host = "0.0.0.0") {
    httplib::Server server;
    install_routes(server, ui_dir);
    return server.listen(host, port);
}

}  // namespace camloc::service

#endif  // CAMLOC_SERVICE_HPP
