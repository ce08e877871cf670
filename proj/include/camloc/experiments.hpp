#ifndef CAMLOC_EXPERIMENTS_HPP
#define CAMLOC_EXPERIMENTS_HPP

// Monte-Carlo mean squared localisation error, camera-count sweeps and the
// reciprocal-quadratic fit of MSE(m).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "camloc/camera_model.hpp"
#include "camloc/error.hpp"
#include "camloc/localise.hpp"
#include "camloc/partition.hpp"

namespace camloc {

/// Counter-based sampling: sample i depends only on (seed, i), so results do
/// not depend on how samples are spread across workers.
namespace rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline constexpr double to_unit(std::uint64_t x) noexcept { return static_cast<double>(x >> 11) * 0x1.0p-53; }

/// Point drawn uniformly by area from the disc of radius `radius`.
inline Point2 disc_sample(std::uint64_t seed, std::uint64_t index, double radius) noexcept {
    const std::uint64_t key = splitmix64(seed ^ splitmix64(index));
    const double u = to_unit(splitmix64(key));
    const double v = to_unit(splitmix64(key ^ 0xd1b54a32d192ed03ULL));
    const double rho = radius * std::sqrt(u);
    const double t = 2.0 * std::numbers::pi * v;
    return {rho * std::cos(t), rho * std::sin(t)};
}

}  // namespace rng

struct MseEstimate {
    double mse = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;   // samples that contributed
    std::int64_t excluded = 0;  // dropped because their signature has no cell
};

struct MseRow {
    int m = 0;
    double mse = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

struct MseConfig {
    int n = 0;
    double r = 1.0;
    ProjectionKind kind;
    Estimator estimator = Estimator::CellCentroid;
    std::uint64_t seed = 0;
};

struct MseTable {
    std::vector<MseRow> rows;  // ascending m, unique
    MseConfig config;
};

inline constexpr double kMaxExcludedFraction = 1e-3;

/// Mean squared error of `estimator` over `samples` points drawn uniformly from
/// the disc of radius r (1 - 1e-9). Squared errors are summed in sample order,
/// so the result is bitwise independent of `threads`.
inline MseEstimate mse_monte_carlo(const CameraArray& array, Estimator estimator, std::int64_t samples,
                                   std::uint64_t seed, int threads = 1) {
    detail::require(samples >= 100, "Monte-Carlo run needs at least 100 samples");
    detail::require(threads >= 1, "thread count must be positive");

    std::optional<Partition> partition;
    if (estimator == Estimator::CellCentroid) partition.emplace(build_partition(array));
    const Partition* part = partition ? &*partition : nullptr;
    const double radius = array.radius() * (1.0 - 1e-9);

    std::vector<double> sq(static_cast<std::size_t>(samples));
    auto work = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            const Point2 p = rng::disc_sample(seed, static_cast<std::uint64_t>(i), radius);
            double value = std::numeric_limits<double>::quiet_NaN();
            try {
                const auto res = localise(array, p, estimator, part);
                const Vec2 d = p - res.estimate;
                value = dot(d, d);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::CellNotFound) throw;
            }
            sq[static_cast<std::size_t>(i)] = value;
        }
    };

    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(threads, samples));
    if (workers == 1) {
        work(0, samples);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const std::int64_t chunk = (samples + workers - 1) / workers;
        for (std::int64_t t = 0; t < workers; ++t) {
            const std::int64_t begin = t * chunk;
            const std::int64_t end = std::min(samples, begin + chunk);
            pool.emplace_back([&, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    MseEstimate out;
    double sum = 0.0;
    for (double v : sq) {
        if (std::isnan(v)) {
            ++out.excluded;
            continue;
        }
        sum += v;
        ++out.samples;
    }
    if (static_cast<double>(out.excluded) >= kMaxExcludedFraction * static_cast<double>(samples))
        throw Error(ErrorCode::CellNotFound, "too many samples fell outside every cell");
    out.mse = sum / static_cast<double>(out.samples);
    double ss = 0.0;
    for (double v : sq) {
        if (!std::isnan(v)) ss += (v - out.mse) * (v - out.mse);
    }
    const double var = out.samples > 1 ? ss / static_cast<double>(out.samples - 1) : 0.0;
    out.std_error = std::sqrt(var / static_cast<double>(out.samples));
    return out;
}

/// One MSE table per projection kind over the given camera counts. Every row
/// uses the same seed, so all rows and kinds see the same sampled points.
inline std::vector<MseTable> sweep_cameras(std::span<const int> m_values, int pixels, double radius,
                                           std::span<const ProjectionKind> kinds, Estimator estimator,
                                           std::int64_t samples, std::uint64_t seed, int threads = 1) {
    detail::require(!m_values.empty(), "camera counts must not be empty");
    detail::require(std::adjacent_find(m_values.begin(), m_values.end(), std::greater_equal<>()) == m_values.end(),
                    "camera counts must be strictly ascending");
    std::vector<MseTable> tables;
    for (const auto& kind : kinds) {
        MseTable table;
        table.config = {pixels, radius, kind, estimator, seed};
        for (int m : m_values) {
            const auto est = mse_monte_carlo(CameraArray(m, radius, pixels, kind), estimator, samples, seed, threads);
            table.rows.push_back({m, est.mse, est.std_error, est.samples});
        }
        tables.push_back(std::move(table));
    }
    return tables;
}

/// MSE(m) ~ 1 / (a m^2 + b m + c)
struct FitResult {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double r_squared = 0.0;  // of the linearised response 1/MSE

    [[nodiscard]] double operator()(double m) const noexcept { return 1.0 / (a * m * m + b * m + c); }
};

inline FitResult fit_reciprocal_quadratic(const MseTable& table) {
    const auto& rows = table.rows;
    std::vector<int> ms;
    for (const auto& row : rows) {
        detail::require(row.mse > 0.0, "fit needs strictly positive MSE values");
        ms.push_back(row.m);
    }
    std::sort(ms.begin(), ms.end());
    detail::require(std::unique(ms.begin(), ms.end()) - ms.begin() >= 3, "fit needs at least three distinct m");

    const auto k = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd design(k, 3);
    Eigen::VectorXd response(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double m = rows[static_cast<std::size_t>(i)].m;
        design(i, 0) = m * m;
        design(i, 1) = m;
        design(i, 2) = 1.0;
        response(i) = 1.0 / rows[static_cast<std::size_t>(i)].mse;
    }
    // scale columns so the QR rank test is not dominated by m^2
    const Eigen::Vector3d scale = design.colwise().norm().transpose();
    const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-12);
    if (qr.rank() < 3) throw Error(ErrorCode::SingularFit, "design matrix is rank deficient");
    const Eigen::Vector3d coef = qr.solve(response).cwiseQuotient(scale);

    FitResult out{coef(0), coef(1), coef(2), 0.0};
    const Eigen::VectorXd resid = response - design * coef;
    const double mean = response.mean();
    const double ss_tot = (response.array() - mean).square().sum();
    const double ss_res = resid.squaredNorm();
    out.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    return out;
}

namespace detail {
inline std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}
}  // namespace detail

/// Spearman rank correlation with average ranks for ties.
inline double spearman(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size() && x.size() >= 2, "spearman needs two equal-length series");
    const auto rx = detail::average_ranks(x);
    const auto ry = detail::average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const MseTable& table) {
    std::vector<double> ms, mses;
    for (const auto& row : table.rows) {
        ms.push_back(row.m);
        mses.push_back(row.mse);
    }
    return spearman(ms, mses);
}

}  // namespace camloc

#endif  // CAMLOC_EXPERIMENTS_HPP
