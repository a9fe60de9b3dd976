#pragma once

#include <array>
#include <string>

namespace stpp {

// An event location (x, y) observed at time t.
struct SpaceTimePoint {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;

    SpaceTimePoint() = default;
    // Throws InvalidArgument on NaN or infinite coordinates.
    SpaceTimePoint(double x_, double y_, double t_);

    double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : t); }

    friend bool operator==(const SpaceTimePoint&, const SpaceTimePoint&) = default;
};

std::string to_string(const SpaceTimePoint& p);

// Closed interval [lo, hi] with hi > lo.
class Interval {
public:
    Interval(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double length() const noexcept { return hi_ - lo_; }
    bool contains(double v) const noexcept { return v >= lo_ && v <= hi_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
};

// Axis-aligned observation box W x T. Boundary points are inside.
class Window {
public:
    Window(Interval x, Interval y, Interval t);
    // Parses the six bounds x0,x1,y0,y1,t0,t1.
    static Window from_bounds(const std::array<double, 6>& b);
    static Window unit() { return Window({0, 1}, {0, 1}, {0, 1}); }

    const Interval& x() const noexcept { return x_; }
    const Interval& y() const noexcept { return y_; }
    const Interval& t() const noexcept { return t_; }
    const Interval& axis(int a) const noexcept { return a == 0 ? x_ : (a == 1 ? y_ : t_); }

    double volume() const noexcept { return x_.length() * y_.length() * t_.length(); }
    bool contains(const SpaceTimePoint& p) const noexcept {
        return x_.contains(p.x) && y_.contains(p.y) && t_.contains(p.t);
    }

    friend bool operator==(const Window&, const Window&) = default;

private:
    Interval x_;
    Interval y_;
    Interval t_;
};

inline double volume(const Window& w) { return w.volume(); }

std::string to_string(const Window& w);

}  // namespace stpp
