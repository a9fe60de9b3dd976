#include "stpp/pattern.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "stpp/error.hpp"

namespace stpp {

namespace {

void check_inside(const Window& window, std::span<const SpaceTimePoint> points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!window.contains(points[i]))
            throw InvalidArgument("point " + std::to_string(i) + " " + to_string(points[i]) +
                                  " lies outside window " + to_string(window));
    }
}

}  // namespace

PointPattern::PointPattern(Window window, std::vector<SpaceTimePoint> points)
    : window_(window), points_(std::move(points)) {
    check_inside(window_, points_);
}

std::vector<std::size_t> find_duplicates(std::span<const SpaceTimePoint> points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return std::tuple(points[i].x, points[i].y, points[i].t, i); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    std::vector<std::size_t> dups;
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (points[order[k]] == points[order[k - 1]]) dups.push_back(order[k]);
    }
    std::sort(dups.begin(), dups.end());
    return dups;
}

MarkedPointPattern::MarkedPointPattern(Window window, std::vector<SpaceTimePoint> points,
                                       std::vector<std::size_t> marks, std::vector<std::string> level_labels)
    : window_(window), points_(std::move(points)), marks_(std::move(marks)) {
    if (marks_.size() != points_.size())
        throw InvalidArgument("marked pattern: " + std::to_string(points_.size()) + " points but " +
                              std::to_string(marks_.size()) + " marks");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < level_labels.size(); ++i) {
        if (level_labels[i].empty()) throw InvalidArgument("mark level labels must be nonempty");
        if (!seen.insert(level_labels[i]).second)
            throw InvalidArgument("duplicate mark level '" + level_labels[i] + "'");
        levels_.push_back({std::move(level_labels[i]), i + 1});
    }
    for (std::size_t i = 0; i < marks_.size(); ++i) {
        if (marks_[i] >= levels_.size())
            throw InvalidArgument("point " + std::to_string(i) + " has a mark outside the level list");
    }
    check_inside(window_, points_);
}

MarkedPointPattern MarkedPointPattern::from_labels(Window window, std::vector<SpaceTimePoint> points,
                                                   const std::vector<std::string>& labels,
                                                   std::vector<std::string> levels) {
    if (levels.empty()) {
        std::set<std::string> distinct(labels.begin(), labels.end());
        levels.assign(distinct.begin(), distinct.end());
    }
    std::vector<std::size_t> marks;
    marks.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto it = std::find(levels.begin(), levels.end(), labels[i]);
        if (it == levels.end())
            throw InvalidArgument("point " + std::to_string(i) + " has undeclared mark '" + labels[i] + "'");
        marks.push_back(static_cast<std::size_t>(it - levels.begin()));
    }
    return MarkedPointPattern(window, std::move(points), std::move(marks), std::move(levels));
}

const MarkLevel& MarkedPointPattern::level(const std::string& label) const {
    for (const auto& l : levels_)
        if (l.label == label) return l;
    throw InvalidArgument("unknown mark level '" + label + "'");
}

std::map<MarkLevel, PointPattern> split_by_mark(const MarkedPointPattern& pattern) {
    std::vector<std::vector<SpaceTimePoint>> buckets(pattern.level_count());
    for (std::size_t i = 0; i < pattern.size(); ++i) buckets[pattern.mark_position(i)].push_back(pattern.points()[i]);
    std::map<MarkLevel, PointPattern> out;
    for (std::size_t m = 0; m < buckets.size(); ++m)
        out.emplace(pattern.levels()[m], PointPattern(pattern.window(), std::move(buckets[m])));
    return out;
}

PointPattern ground_pattern(const MarkedPointPattern& pattern) {
    return PointPattern(pattern.window(), {pattern.points().begin(), pattern.points().end()});
}

}  // namespace stpp
