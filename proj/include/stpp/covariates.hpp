#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stpp/cubature.hpp"
#include "stpp/geometry.hpp"

namespace stpp {

// A covariate value observed at one sampling location.
struct CovariateSample {
    SpaceTimePoint location;
    double value = 0.0;
};

// Inverse-distance weighting parameters. Distances are measured after
// dividing each axis by its scale factor, so that space and time can be
// compared; for_window() maps the window onto the unit cube.
struct IdwConfig {
    double power = 2.0;
    std::array<double, 3> scaling{1.0, 1.0, 1.0};

    static IdwConfig for_window(const Window& w, double power = 2.0);
    // Throws InvalidArgument unless power > 0 and every scale factor > 0.
    void validate() const;
};

// Scaled Euclidean distance between two points.
double scaled_distance(const SpaceTimePoint& a, const SpaceTimePoint& b, const IdwConfig& cfg);

// Weighted mean of the sample values with weights 1 / d^p. A query within
// 1e-12 (scaled) of one or more samples returns their mean value.
double idw_interpolate(std::span<const CovariateSample> samples, const SpaceTimePoint& query, const IdwConfig& cfg);

// Covariate values on a regular grid; values are stored in cube_index order.
class CovariateGrid {
public:
    CovariateGrid(Window window, GridResolution res, std::vector<double> values);

    const Window& window() const noexcept { return window_; }
    const GridResolution& resolution() const noexcept { return res_; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const CovariateGrid&, const CovariateGrid&) = default;

private:
    Window window_;
    GridResolution res_;
    std::vector<double> values_;
};

CovariateGrid smooth_to_grid(std::span<const CovariateSample> samples, const Window& window,
                             const GridResolution& res, const IdwConfig& cfg);

// Value of the cell containing p (the nearest cell center for interior points).
double nearest_grid_value(const CovariateGrid& grid, const SpaceTimePoint& p);

struct Intercept {
    friend bool operator==(const Intercept&, const Intercept&) = default;
};

// x^i y^j t^k with i + j + k <= kMaxMonomialDegree.
struct CoordinateMonomial {
    unsigned ex = 0;
    unsigned ey = 0;
    unsigned et = 0;

    unsigned degree() const noexcept { return ex + ey + et; }
    friend bool operator==(const CoordinateMonomial&, const CoordinateMonomial&) = default;
};

inline constexpr unsigned kMaxMonomialDegree = 6;

struct ExternalCovariate {
    std::shared_ptr<const CovariateGrid> grid;
    std::string name;

    friend bool operator==(const ExternalCovariate& a, const ExternalCovariate& b) {
        return a.name == b.name && a.grid == b.grid;
    }
};

using CovariateFunction = std::variant<Intercept, CoordinateMonomial, ExternalCovariate>;

// Throws InvalidArgument for a monomial of excessive degree or an external
// covariate without a grid.
void validate(const CovariateFunction& f);

// Canonical display name: "1", "x", "x^2*t", or the external name.
std::string term_name(const CovariateFunction& f);

double evaluate_covariate(const CovariateFunction& f, const SpaceTimePoint& p);

}  // namespace stpp
