#include "stpp/geometry.hpp"

#include <cmath>

#include "stpp/error.hpp"
#include "stpp/text.hpp"

namespace stpp {

SpaceTimePoint::SpaceTimePoint(double x_, double y_, double t_) : x(x_), y(y_), t(t_) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(t))
        throw InvalidArgument("non-finite coordinate in point " + to_string(*this));
}

std::string to_string(const SpaceTimePoint& p) {
    return "(" + text::format_double(p.x) + ", " + text::format_double(p.y) + ", " + text::format_double(p.t) + ")";
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidArgument("interval bounds must be finite");
    if (!(hi > lo))
        throw InvalidArgument("degenerate interval [" + text::format_double(lo) + ", " + text::format_double(hi) +
                              "]: length must be positive");
}

Window::Window(Interval x, Interval y, Interval t) : x_(x), y_(y), t_(t) {}

Window Window::from_bounds(const std::array<double, 6>& b) {
    return Window({b[0], b[1]}, {b[2], b[3]}, {b[4], b[5]});
}

std::string to_string(const Window& w) {
    auto iv = [](const Interval& i) {
        return "[" + text::format_double(i.lo()) + ", " + text::format_double(i.hi()) + "]";
    };
    return iv(w.x()) + " x " + iv(w.y()) + " x " + iv(w.t());
}

}  // namespace stpp
