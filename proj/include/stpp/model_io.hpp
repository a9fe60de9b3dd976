#pragma once

#include <filesystem>
#include <string>

#include "stpp/model.hpp"

namespace stpp {

inline constexpr int kModelSchemaVersion = 1;

// Writes the fitted model as JSON to `path`. External covariate grids are
// written next to it as <stem>.<name>.grid.{json,bin} and referenced by
// relative path.
void save_model(const FittedModel& model, const std::filesystem::path& path);

// Throws ParseError on schema mismatch, IoError on unreadable files.
FittedModel load_model(const std::filesystem::path& path);

}  // namespace stpp
