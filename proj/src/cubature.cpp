#include "stpp/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "stpp/error.hpp"
#include "stpp/text.hpp"

namespace stpp {

GridResolution::GridResolution(std::size_t nx_, std::size_t ny_, std::size_t nt_) : nx(nx_), ny(ny_), nt(nt_) {
    if (nx == 0 || ny == 0 || nt == 0) throw InvalidArgument("grid resolution must be at least 1 along every axis");
}

GridResolution GridResolution::parse(std::string_view s) {
    const auto parts = text::split(s, ',');
    if (parts.size() != 3) throw ParseError("grid resolution must be 'nx,ny,nt', got '" + std::string(s) + "'");
    std::size_t n[3];
    for (int i = 0; i < 3; ++i) {
        const auto v = text::parse_int(parts[i], "grid resolution");
        if (v < 1) throw ParseError("grid resolution entries must be >= 1, got '" + std::string(s) + "'");
        n[i] = static_cast<std::size_t>(v);
    }
    return {n[0], n[1], n[2]};
}

std::string to_string(const GridResolution& r) {
    return std::to_string(r.nx) + "," + std::to_string(r.ny) + "," + std::to_string(r.nt);
}

namespace {

std::size_t axis_bin(const Interval& iv, std::size_t n, double v) {
    const double scaled = (v - iv.lo()) * static_cast<double>(n) / iv.length();
    const auto bin = static_cast<std::size_t>(std::floor(scaled));
    return std::min(bin, n - 1);
}

double axis_center(const Interval& iv, std::size_t n, std::size_t i) {
    return iv.lo() + (static_cast<double>(i) + 0.5) * iv.length() / static_cast<double>(n);
}

const char* axis_name(int a) { return a == 0 ? "x" : (a == 1 ? "y" : "t"); }

// Cell-count weights nu / n_k for the given point list.
std::vector<double> cell_count_weights(const Window& window, const GridResolution& res,
                                       const std::vector<SpaceTimePoint>& points) {
    std::vector<std::size_t> cell(points.size());
    std::vector<std::size_t> count(res.cell_count(), 0);
    for (std::size_t k = 0; k < points.size(); ++k) {
        cell[k] = cube_index(window, res, points[k]);
        ++count[cell[k]];
    }
    const double nu = cell_volume(window, res);
    std::vector<double> w(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) w[k] = nu / static_cast<double>(count[cell[k]]);
    return w;
}

std::string few_dummies_warning(std::size_t n_dummy, std::size_t n_data) {
    return "dummy count " + std::to_string(n_dummy) + " does not exceed data count " + std::to_string(n_data) +
           "; refine the grid for an accurate likelihood approximation";
}

}  // namespace

std::size_t cube_index(const Window& window, const GridResolution& res, const SpaceTimePoint& p) {
    for (int a = 0; a < 3; ++a) {
        if (!window.axis(a).contains(p[a]))
            throw InvalidArgument(std::string("coordinate ") + axis_name(a) + " = " + text::format_double(p[a]) +
                                  " of point " + to_string(p) + " lies outside the window");
    }
    const auto ix = axis_bin(window.x(), res.nx, p.x);
    const auto iy = axis_bin(window.y(), res.ny, p.y);
    const auto it = axis_bin(window.t(), res.nt, p.t);
    return ix + res.nx * (iy + res.ny * it);
}

SpaceTimePoint cell_center(const Window& window, const GridResolution& res, std::size_t cell) {
    const std::size_t ix = cell % res.nx;
    const std::size_t iy = (cell / res.nx) % res.ny;
    const std::size_t it = cell / (res.nx * res.ny);
    return {axis_center(window.x(), res.nx, ix), axis_center(window.y(), res.ny, iy),
            axis_center(window.t(), res.nt, it)};
}

std::vector<SpaceTimePoint> generate_dummy_grid(const Window& window, const GridResolution& res) {
    std::vector<SpaceTimePoint> out;
    out.reserve(res.cell_count());
    for (std::size_t c = 0; c < res.cell_count(); ++c) out.push_back(cell_center(window, res, c));
    return out;
}

CubatureScheme build_scheme(const PointPattern& pattern, const GridResolution& res) {
    CubatureScheme s(pattern.window(), res);
    s.n_data_ = pattern.size();
    s.points_.assign(pattern.points().begin(), pattern.points().end());
    auto dummies = generate_dummy_grid(pattern.window(), res);
    s.n_dummy_ = dummies.size();
    s.points_.insert(s.points_.end(), dummies.begin(), dummies.end());
    s.is_data_.assign(s.points_.size(), 0);
    std::fill_n(s.is_data_.begin(), s.n_data_, std::uint8_t{1});
    s.weights_ = cell_count_weights(s.window_, res, s.points_);
    if (s.n_dummy_ <= s.n_data_) s.warnings_.push_back(few_dummies_warning(s.n_dummy_, s.n_data_));
    return s;
}

CubatureScheme build_dummy_scheme(const Window& window, const GridResolution& res) {
    return build_scheme(PointPattern(window), res);
}

std::vector<double> responses(const CubatureScheme& scheme) {
    std::vector<double> y(scheme.size());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = scheme.is_data()[k] ? 1.0 / scheme.weights()[k] : 0.0;
    return y;
}

double approximate_integral(const CubatureScheme& scheme, const PointFunction& f) {
    double sum = 0.0;
    for (std::size_t k = 0; k < scheme.size(); ++k) {
        const double v = f(scheme.points()[k]);
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidArgument("integrand is " + text::format_double(v) + " at cubature point " +
                                  std::to_string(k) + " " + to_string(scheme.points()[k]));
        sum += scheme.weights()[k] * v;
    }
    return sum;
}

std::vector<double> ReplicatedCubatureScheme::responses(std::size_t level) const {
    const auto& e = is_data_.at(level);
    const auto& a = weights_.at(level);
    std::vector<double> y(e.size());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = e[k] ? 1.0 / a[k] : 0.0;
    return y;
}

ReplicatedCubatureScheme build_replicated_scheme(const MarkedPointPattern& pattern, const GridResolution& res) {
    if (pattern.level_count() == 0) throw InvalidArgument("replicated scheme needs at least one mark level");
    ReplicatedCubatureScheme s(pattern.window(), res);
    s.levels_ = pattern.levels();
    s.n_data_ = pattern.size();
    s.base_.assign(pattern.points().begin(), pattern.points().end());
    auto dummies = generate_dummy_grid(pattern.window(), res);
    s.n_dummy_ = dummies.size();
    s.base_.insert(s.base_.end(), dummies.begin(), dummies.end());

    // Every level carries the whole shared location set, so the per-level
    // cell counts coincide.
    const auto w = cell_count_weights(s.window_, res, s.base_);
    const std::size_t M = s.levels_.size();
    s.weights_.assign(M, w);
    s.is_data_.assign(M, std::vector<std::uint8_t>(s.base_.size(), 0));
    for (std::size_t i = 0; i < s.n_data_; ++i) s.is_data_[pattern.mark_position(i)][i] = 1;
    if (s.n_dummy_ <= s.n_data_) s.warnings_.push_back(few_dummies_warning(s.n_dummy_, s.n_data_));
    return s;
}

void write_scheme_csv(std::ostream& os, const CubatureScheme& scheme) {
    os << "x,y,t,is_data,weight\n";
    for (std::size_t k = 0; k < scheme.size(); ++k) {
        const auto& p = scheme.points()[k];
        os << text::format_double(p.x) << ',' << text::format_double(p.y) << ',' << text::format_double(p.t) << ','
           << int(scheme.is_data()[k]) << ',' << text::format_double(scheme.weights()[k]) << '\n';
    }
}

void write_scheme_csv(std::ostream& os, const ReplicatedCubatureScheme& scheme) {
    os << "x,y,t,is_data,weight,mark\n";
    for (std::size_t m = 0; m < scheme.levels().size(); ++m) {
        for (std::size_t k = 0; k < scheme.locations(); ++k) {
            const auto& p = scheme.base()[k];
            os << text::format_double(p.x) << ',' << text::format_double(p.y) << ',' << text::format_double(p.t)
               << ',' << int(scheme.is_data_by_level()[m][k]) << ','
               << text::format_double(scheme.weights_by_level()[m][k]) << ',' << scheme.levels()[m].label << '\n';
        }
    }
}

}  // namespace stpp
