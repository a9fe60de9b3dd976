#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stpp/geometry.hpp"

namespace stpp {

// Unmarked spatio-temporal point pattern: a finite, ordered set of events
// inside a window.
class PointPattern {
public:
    explicit PointPattern(Window window, std::vector<SpaceTimePoint> points = {});

    const Window& window() const noexcept { return window_; }
    std::span<const SpaceTimePoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const SpaceTimePoint& operator[](std::size_t i) const { return points_[i]; }

private:
    Window window_;
    std::vector<SpaceTimePoint> points_;
};

// Indices i < j such that point j repeats an earlier point exactly.
// Duplicates are legal but break the "no multiple points" assumption of the
// likelihood; callers should warn.
std::vector<std::size_t> find_duplicates(std::span<const SpaceTimePoint> points);

// Category of a multitype pattern; index runs 1..M.
struct MarkLevel {
    std::string label;
    std::size_t index = 0;

    friend bool operator==(const MarkLevel& a, const MarkLevel& b) { return a.index == b.index && a.label == b.label; }
    friend auto operator<=>(const MarkLevel& a, const MarkLevel& b) { return a.index <=> b.index; }
};

class MarkedPointPattern {
public:
    // marks[i] is a position into level_labels (0-based). Labels must be
    // distinct and nonempty.
    MarkedPointPattern(Window window, std::vector<SpaceTimePoint> points, std::vector<std::size_t> marks,
                       std::vector<std::string> level_labels);

    // Levels are the distinct labels in lexicographic order, unless
    // `levels` is given explicitly (which may include unobserved levels).
    static MarkedPointPattern from_labels(Window window, std::vector<SpaceTimePoint> points,
                                          const std::vector<std::string>& labels,
                                          std::vector<std::string> levels = {});

    const Window& window() const noexcept { return window_; }
    std::span<const SpaceTimePoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<MarkLevel>& levels() const noexcept { return levels_; }
    std::size_t level_count() const noexcept { return levels_.size(); }

    // 0-based position of point i's level in levels().
    std::size_t mark_position(std::size_t i) const { return marks_[i]; }
    const MarkLevel& mark(std::size_t i) const { return levels_[marks_[i]]; }
    // Throws InvalidArgument for an unknown label.
    const MarkLevel& level(const std::string& label) const;

private:
    Window window_;
    std::vector<SpaceTimePoint> points_;
    std::vector<std::size_t> marks_;
    std::vector<MarkLevel> levels_;
};

std::map<MarkLevel, PointPattern> split_by_mark(const MarkedPointPattern& pattern);
PointPattern ground_pattern(const MarkedPointPattern& pattern);

}  // namespace stpp
