#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stpp/covariates.hpp"

// Text grammars for model terms and log-linear intensities:
//
//   term      := "1" | monomial | covariate-name
//   monomial  := factor ("*" factor)*      factor := ("x"|"y"|"t") ["^" int]
//   log-intensity := ["+"|"-"] summand (("+"|"-") summand)*
//   summand   := number | [number "*"] monomial
namespace stpp {

using ExternalCovariates = std::map<std::string, ExternalCovariate>;

// Throws ParseError("unknown term ...") for names that are neither
// coordinate monomials nor declared external covariates.
CovariateFunction parse_term(std::string_view token, const ExternalCovariates& externals = {});
// Comma-separated list, e.g. "1,x,y,t,x*t".
std::vector<CovariateFunction> parse_terms(std::string_view list, const ExternalCovariates& externals = {});

// exp(sum_i c_i * monomial_i(x, y, t)).
class LogLinearIntensity {
public:
    struct Component {
        double coefficient = 0.0;
        CoordinateMonomial monomial;
    };

    LogLinearIntensity() = default;
    explicit LogLinearIntensity(std::vector<Component> components);
    static LogLinearIntensity parse(std::string_view expression);
    static LogLinearIntensity constant(double log_rate) {
        return LogLinearIntensity(std::vector<Component>{Component{log_rate, {}}});
    }

    const std::vector<Component>& components() const noexcept { return components_; }
    double log_value(const SpaceTimePoint& p) const;
    double operator()(const SpaceTimePoint& p) const;
    std::string to_string() const;

    // Model terms able to represent this intensity exactly: the intercept
    // followed by every non-constant monomial, with matching coefficients.
    std::vector<CovariateFunction> model_terms() const;
    std::vector<double> model_coefficients() const;

private:
    std::vector<Component> components_;
};

}  // namespace stpp
