#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stpp/covariates.hpp"
#include "stpp/pattern.hpp"

// CSV and binary file formats. Column layouts are documented in FORMATS.md.
namespace stpp::io {

// Rows of a pattern CSV: header `x,y,t` or `x,y,t,mark`.
struct PatternTable {
    std::vector<SpaceTimePoint> points;
    std::optional<std::vector<std::string>> marks;
};

PatternTable read_pattern_csv(std::istream& is, const std::string& source = "<stream>");
PatternTable read_pattern_csv(const std::filesystem::path& path);

void write_pattern_csv(std::ostream& os, const PointPattern& pattern);
void write_pattern_csv(std::ostream& os, const MarkedPointPattern& pattern);

// Bounding box of the points; throws InvalidArgument if it is degenerate.
Window infer_window(const std::vector<SpaceTimePoint>& points);

// Header `x,y,t,value`.
std::vector<CovariateSample> read_covariate_samples_csv(std::istream& is, const std::string& source = "<stream>");
std::vector<CovariateSample> read_covariate_samples_csv(const std::filesystem::path& path);

// Header `cell_id,x_center,y_center,t_center,value`.
void write_grid_csv(std::ostream& os, const CovariateGrid& grid);

// Writes <stem>.json (header) and <stem>.bin (raw little-endian float64
// values in cell order). Returns the header path.
std::filesystem::path save_grid(const CovariateGrid& grid, const std::filesystem::path& stem,
                                const std::string& name);
CovariateGrid load_grid(const std::filesystem::path& header_path);

// Reads a whole file; throws IoError.
std::string read_file(const std::filesystem::path& path);
// Writes a whole file; throws IoError.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace stpp::io
