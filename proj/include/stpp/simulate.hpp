#pragma once

#include <cstdint>
#include <functional>

#include "stpp/cubature.hpp"
#include "stpp/geometry.hpp"
#include "stpp/pattern.hpp"

namespace stpp {

struct SimConfig {
    std::uint64_t seed = 0;
    // Dominating rate for thinning; must bound the target intensity.
    double lambda_max = 1.0;
};

// Number of random window points used to check lambda_max (non-exhaustive).
inline constexpr std::size_t kLambdaMaxProbes = 10'000;

// N ~ Poisson(rate * volume) uniform points. A zero rate gives an empty pattern.
PointPattern simulate_homogeneous(const Window& window, double rate, const SimConfig& cfg);

// Lewis-Shedler thinning of a homogeneous process at cfg.lambda_max.
// Throws InvalidArgument when the intensity exceeds lambda_max (relative
// slack 1e-9) at a probe or candidate point, or is negative/non-finite.
PointPattern simulate_inhomogeneous(const Window& window, const PointFunction& intensity, const SimConfig& cfg);

// Integral of f over the window by composite tensor Gauss-Legendre rules;
// used as the reference value for cubature error reporting.
double reference_integral(const Window& window, const PointFunction& f, std::size_t panels = 16,
                          std::size_t order = 8);

}  // namespace stpp
