#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stpp {

// Invalid input data or arguments (bad window, point outside window, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed text input: CSV rows, term lists, intensity expressions.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// exp() of a linear predictor would leave the representable range.
class OverflowError : public std::runtime_error {
public:
    OverflowError(const std::string& what, std::size_t row, double eta)
        : std::runtime_error(what), row_(row), eta_(eta) {}

    std::size_t row() const noexcept { return row_; }
    double linear_predictor() const noexcept { return eta_; }

private:
    std::size_t row_;
    double eta_;
};

class RankDeficiencyError : public std::runtime_error {
public:
    RankDeficiencyError(const std::string& what, std::string column)
        : std::runtime_error(what), column_(std::move(column)) {}

    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

// The fit cannot proceed: non-finite deviance, empty pattern, ...
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace stpp
