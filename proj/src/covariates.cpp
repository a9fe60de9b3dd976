#include "stpp/covariates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stpp/error.hpp"
#include "stpp/text.hpp"

namespace stpp {

namespace {

// Neumaier-compensated running sum; keeps IDW means insensitive to sample order.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

constexpr double kCoincidence = 1e-12;

double ipow(double base, unsigned e) {
    double r = 1.0;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

IdwConfig IdwConfig::for_window(const Window& w, double power) {
    return {power, {w.x().length(), w.y().length(), w.t().length()}};
}

void IdwConfig::validate() const {
    if (!(power > 0.0) || !std::isfinite(power)) throw InvalidArgument("IDW power must be positive");
    for (double s : scaling)
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("IDW scale factors must be positive");
}

double scaled_distance(const SpaceTimePoint& a, const SpaceTimePoint& b, const IdwConfig& cfg) {
    const double dx = (a.x - b.x) / cfg.scaling[0];
    const double dy = (a.y - b.y) / cfg.scaling[1];
    const double dt = (a.t - b.t) / cfg.scaling[2];
    return std::sqrt(dx * dx + dy * dy + dt * dt);
}

double idw_interpolate(std::span<const CovariateSample> samples, const SpaceTimePoint& query, const IdwConfig& cfg) {
    if (samples.empty()) throw InvalidArgument("IDW interpolation needs at least one covariate sample");
    cfg.validate();

    std::vector<double> dist(samples.size());
    double dmin = std::numeric_limits<double>::infinity();
    double lo = samples[0].value, hi = samples[0].value;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        dist[j] = scaled_distance(query, samples[j].location, cfg);
        dmin = std::min(dmin, dist[j]);
        lo = std::min(lo, samples[j].value);
        hi = std::max(hi, samples[j].value);
    }

    if (dmin < kCoincidence) {
        CompensatedSum sum;
        std::size_t count = 0;
        for (std::size_t j = 0; j < samples.size(); ++j) {
            if (dist[j] < kCoincidence) {
                sum.add(samples[j].value);
                ++count;
            }
        }
        return sum.value() / static_cast<double>(count);
    }

    // Weights are rescaled by dmin^p, which cancels in the ratio but keeps
    // large powers from underflowing.
    CompensatedSum num, den;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const double w = std::pow(dmin / dist[j], cfg.power);
        num.add(w * samples[j].value);
        den.add(w);
    }
    return std::clamp(num.value() / den.value(), lo, hi);
}

CovariateGrid::CovariateGrid(Window window, GridResolution res, std::vector<double> values)
    : window_(window), res_(res), values_(std::move(values)) {
    if (values_.size() != res_.cell_count())
        throw InvalidArgument("covariate grid has " + std::to_string(values_.size()) + " values for " +
                              std::to_string(res_.cell_count()) + " cells");
    for (std::size_t c = 0; c < values_.size(); ++c)
        if (!std::isfinite(values_[c])) throw InvalidArgument("non-finite covariate value in cell " + std::to_string(c));
}

CovariateGrid smooth_to_grid(std::span<const CovariateSample> samples, const Window& window,
                             const GridResolution& res, const IdwConfig& cfg) {
    std::vector<double> values(res.cell_count());
    for (std::size_t c = 0; c < values.size(); ++c)
        values[c] = idw_interpolate(samples, cell_center(window, res, c), cfg);
    return CovariateGrid(window, res, std::move(values));
}

double nearest_grid_value(const CovariateGrid& grid, const SpaceTimePoint& p) {
    return grid.values()[cube_index(grid.window(), grid.resolution(), p)];
}

void validate(const CovariateFunction& f) {
    if (const auto* m = std::get_if<CoordinateMonomial>(&f)) {
        if (m->degree() > kMaxMonomialDegree)
            throw InvalidArgument("monomial " + term_name(f) + " exceeds the maximum total degree " +
                                  std::to_string(kMaxMonomialDegree));
    } else if (const auto* e = std::get_if<ExternalCovariate>(&f)) {
        if (!e->grid) throw InvalidArgument("external covariate '" + e->name + "' has no grid");
        if (e->name.empty()) throw InvalidArgument("external covariate needs a name");
    }
}

std::string term_name(const CovariateFunction& f) {
    struct Visitor {
        std::string operator()(const Intercept&) const { return "1"; }
        std::string operator()(const CoordinateMonomial& m) const {
            std::string out;
            auto factor = [&out](const char* axis, unsigned e) {
                if (e == 0) return;
                if (!out.empty()) out += '*';
                out += axis;
                if (e > 1) out += "^" + std::to_string(e);
            };
            factor("x", m.ex);
            factor("y", m.ey);
            factor("t", m.et);
            return out.empty() ? "1" : out;
        }
        std::string operator()(const ExternalCovariate& e) const { return e.name; }
    };
    return std::visit(Visitor{}, f);
}

double evaluate_covariate(const CovariateFunction& f, const SpaceTimePoint& p) {
    struct Visitor {
        const SpaceTimePoint& p;
        double operator()(const Intercept&) const { return 1.0; }
        double operator()(const CoordinateMonomial& m) const { return ipow(p.x, m.ex) * ipow(p.y, m.ey) * ipow(p.t, m.et); }
        double operator()(const ExternalCovariate& e) const {
            try {
                return nearest_grid_value(*e.grid, p);
            } catch (const InvalidArgument& ex) {
                throw InvalidArgument("covariate '" + e.name + "': " + ex.what());
            }
        }
    };
    return std::visit(Visitor{p}, f);
}

}  // namespace stpp
