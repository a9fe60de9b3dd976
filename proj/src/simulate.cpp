#include "stpp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "stpp/error.hpp"
#include "stpp/random.hpp"
#include "stpp/text.hpp"

namespace stpp {

namespace {

constexpr std::uint32_t kMainStream = 0;
constexpr std::uint32_t kProbeStream = 1;

double draw_coordinate(RandomStream& rng, const Interval& iv) {
    return std::min(iv.hi(), iv.lo() + rng.uniform() * iv.length());
}

SpaceTimePoint draw_point(RandomStream& rng, const Window& w) {
    const double x = draw_coordinate(rng, w.x());
    const double y = draw_coordinate(rng, w.y());
    const double t = draw_coordinate(rng, w.t());
    return {x, y, t};
}

double checked_intensity(const PointFunction& f, const SpaceTimePoint& p, double lambda_max) {
    const double v = f(p);
    if (!std::isfinite(v) || v < 0.0)
        throw InvalidArgument("intensity is " + text::format_double(v) + " at " + to_string(p));
    if (v > lambda_max * (1.0 + 1e-9))
        throw InvalidArgument("intensity " + text::format_double(v) + " at " + to_string(p) +
                              " exceeds lambda_max " + text::format_double(lambda_max));
    return v;
}

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * static_cast<double>(k) + 1.0) * z * p1 - static_cast<double>(k) * p2) /
                     (static_cast<double>(k) + 1.0);
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

}  // namespace

PointPattern simulate_homogeneous(const Window& window, double rate, const SimConfig& cfg) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw InvalidArgument("rate must be finite and nonnegative");
    RandomStream rng(cfg.seed, kMainStream);
    const auto n = rng.poisson(rate * window.volume());
    std::vector<SpaceTimePoint> pts;
    pts.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) pts.push_back(draw_point(rng, window));
    return PointPattern(window, std::move(pts));
}

PointPattern simulate_inhomogeneous(const Window& window, const PointFunction& intensity, const SimConfig& cfg) {
    if (!(cfg.lambda_max > 0.0) || !std::isfinite(cfg.lambda_max))
        throw InvalidArgument("lambda_max must be positive and finite");

    RandomStream probe(cfg.seed, kProbeStream);
    for (std::size_t i = 0; i < kLambdaMaxProbes; ++i) checked_intensity(intensity, draw_point(probe, window), cfg.lambda_max);

    RandomStream rng(cfg.seed, kMainStream);
    const auto n = rng.poisson(cfg.lambda_max * window.volume());
    std::vector<SpaceTimePoint> pts;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto p = draw_point(rng, window);
        const double u = rng.uniform();
        if (u * cfg.lambda_max < checked_intensity(intensity, p, cfg.lambda_max)) pts.push_back(p);
    }
    return PointPattern(window, std::move(pts));
}

double reference_integral(const Window& window, const PointFunction& f, std::size_t panels, std::size_t order) {
    if (panels == 0 || order == 0) throw InvalidArgument("reference integral needs panels and order >= 1");
    std::vector<double> gn, gw;
    gauss_legendre(order, gn, gw);

    // 1D composite nodes per axis.
    std::array<std::vector<double>, 3> nodes, weights;
    for (int a = 0; a < 3; ++a) {
        const auto& iv = window.axis(a);
        const double h = iv.length() / static_cast<double>(panels);
        for (std::size_t pnl = 0; pnl < panels; ++pnl) {
            const double mid = iv.lo() + (static_cast<double>(pnl) + 0.5) * h;
            for (std::size_t q = 0; q < order; ++q) {
                nodes[a].push_back(mid + 0.5 * h * gn[q]);
                weights[a].push_back(0.5 * h * gw[q]);
            }
        }
    }
    double total = 0.0;
    for (std::size_t k = 0; k < nodes[2].size(); ++k) {
        double plane = 0.0;
        for (std::size_t j = 0; j < nodes[1].size(); ++j) {
            double line = 0.0;
            for (std::size_t i = 0; i < nodes[0].size(); ++i)
                line += weights[0][i] * f(SpaceTimePoint(nodes[0][i], nodes[1][j], nodes[2][k]));
            plane += weights[1][j] * line;
        }
        total += weights[2][k] * plane;
    }
    return total;
}

}  // namespace stpp
