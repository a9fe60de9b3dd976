#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stpp/geometry.hpp"
#include "stpp/pattern.hpp"

namespace stpp {

// Number of partition cells along x, y and t.
struct GridResolution {
    std::size_t nx = 10;
    std::size_t ny = 10;
    std::size_t nt = 10;

    GridResolution() = default;
    GridResolution(std::size_t nx_, std::size_t ny_, std::size_t nt_);
    // "nx,ny,nt"
    static GridResolution parse(std::string_view text);

    std::size_t cell_count() const noexcept { return nx * ny * nt; }
    std::size_t along(int axis) const noexcept { return axis == 0 ? nx : (axis == 1 ? ny : nt); }

    friend bool operator==(const GridResolution&, const GridResolution&) = default;
};

std::string to_string(const GridResolution& r);

// Volume of one partition cell.
inline double cell_volume(const Window& w, const GridResolution& r) {
    return w.volume() / static_cast<double>(r.cell_count());
}

// Cell id with x varying fastest. Cells are half-open [lo, hi) along each
// axis except the last one, which also owns the window's upper face.
// Throws InvalidArgument when p is outside the window.
std::size_t cube_index(const Window& window, const GridResolution& res, const SpaceTimePoint& p);

SpaceTimePoint cell_center(const Window& window, const GridResolution& res, std::size_t cell);

// One dummy point at the center of each cell, in cell-id order.
std::vector<SpaceTimePoint> generate_dummy_grid(const Window& window, const GridResolution& res);

// Data points followed by dummy points, with the cell-count weights
// a_k = nu / n_k and data indicators e_k.
class CubatureScheme {
public:
    const Window& window() const noexcept { return window_; }
    const GridResolution& resolution() const noexcept { return res_; }
    const std::vector<SpaceTimePoint>& points() const noexcept { return points_; }
    const std::vector<std::uint8_t>& is_data() const noexcept { return is_data_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t n_data() const noexcept { return n_data_; }
    std::size_t n_dummy() const noexcept { return n_dummy_; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    friend CubatureScheme build_scheme(const PointPattern&, const GridResolution&);
    friend CubatureScheme build_dummy_scheme(const Window&, const GridResolution&);
    CubatureScheme(Window w, GridResolution r) : window_(w), res_(r) {}

    Window window_;
    GridResolution res_;
    std::vector<SpaceTimePoint> points_;
    std::vector<std::uint8_t> is_data_;
    std::vector<double> weights_;
    std::size_t n_data_ = 0;
    std::size_t n_dummy_ = 0;
    std::vector<std::string> warnings_;
};

// Warns (in warnings()) when the dummy count does not exceed the data count.
CubatureScheme build_scheme(const PointPattern& pattern, const GridResolution& res);
// Dummy-only scheme for integrating over the window.
CubatureScheme build_dummy_scheme(const Window& window, const GridResolution& res);

// y_k = e_k / a_k.
std::vector<double> responses(const CubatureScheme& scheme);

using PointFunction = std::function<double(const SpaceTimePoint&)>;

// Riemann sum  sum_k a_k f(x_k). Throws InvalidArgument when f is negative
// or non-finite at some node.
double approximate_integral(const CubatureScheme& scheme, const PointFunction& f);

// Cubature scheme replicated across the M levels of a multitype pattern.
// All levels share the same locations (ground data, then grid dummies).
class ReplicatedCubatureScheme {
public:
    const Window& window() const noexcept { return window_; }
    const GridResolution& resolution() const noexcept { return res_; }
    const std::vector<MarkLevel>& levels() const noexcept { return levels_; }
    const std::vector<SpaceTimePoint>& base() const noexcept { return base_; }
    std::size_t n_data() const noexcept { return n_data_; }
    std::size_t n_dummy() const noexcept { return n_dummy_; }
    std::size_t locations() const noexcept { return base_.size(); }

    // Indexed [level position][location].
    const std::vector<std::vector<std::uint8_t>>& is_data_by_level() const noexcept { return is_data_; }
    const std::vector<std::vector<double>>& weights_by_level() const noexcept { return weights_; }
    std::vector<double> responses(std::size_t level) const;
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    friend ReplicatedCubatureScheme build_replicated_scheme(const MarkedPointPattern&, const GridResolution&);
    ReplicatedCubatureScheme(Window w, GridResolution r) : window_(w), res_(r) {}

    Window window_;
    GridResolution res_;
    std::vector<MarkLevel> levels_;
    std::vector<SpaceTimePoint> base_;
    std::size_t n_data_ = 0;
    std::size_t n_dummy_ = 0;
    std::vector<std::vector<std::uint8_t>> is_data_;
    std::vector<std::vector<double>> weights_;
    std::vector<std::string> warnings_;
};

// Each level's weights follow the single-type rule over the full shared
// location set, so every level's weights sum to the window volume.
ReplicatedCubatureScheme build_replicated_scheme(const MarkedPointPattern& pattern, const GridResolution& res);

// CSV with header x,y,t,is_data,weight (and a trailing mark column for the
// replicated scheme, one block of rows per level).
void write_scheme_csv(std::ostream& os, const CubatureScheme& scheme);
void write_scheme_csv(std::ostream& os, const ReplicatedCubatureScheme& scheme);

}  // namespace stpp
