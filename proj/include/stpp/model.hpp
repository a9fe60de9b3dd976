#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stpp/covariates.hpp"
#include "stpp/cubature.hpp"
#include "stpp/glm.hpp"
#include "stpp/pattern.hpp"

namespace stpp {

// Per-mark fixed effects standing in for random mark effects.
//   interact_all = true : every term gets its own coefficient per level.
//   interact_all = false: shared terms plus M-1 level intercept contrasts
//                         against the first level.
struct MarkFixedEffects {
    bool interact_all = true;
};

// Log-linear intensity  lambda(u, t) = exp(theta' Z(u, t)).
struct ModelSpec {
    std::vector<CovariateFunction> terms;
    std::optional<MarkFixedEffects> multitype;
    // Ridge penalty on the mark-specific columns (0 = unpenalized).
    double ridge_on_marks = 0.0;

    void validate() const;
    bool is_marked() const noexcept { return multitype.has_value(); }
};

// One coefficient of the fitted model. A column with `level` set only
// contributes to that level's linear predictor.
struct DesignColumn {
    CovariateFunction term;
    std::optional<std::size_t> level;  // position in the level list
    bool penalized = false;
    std::string name;
};

// "(Intercept)" for the intercept, otherwise term_name().
std::string column_label(const CovariateFunction& term);

std::vector<DesignColumn> unmarked_columns(const ModelSpec& spec);
// Column layout for a multitype fit. With interact_all and a positive ridge
// the levels after the first are parametrized as penalized deviations from
// the first level, so that the penalty shrinks them towards a common value.
std::vector<DesignColumn> multitype_columns(const ModelSpec& spec, const std::vector<MarkLevel>& levels);

// Row of covariate values at p for the given level (nullopt for unmarked).
// The same routine drives fitting and prediction.
std::vector<double> design_row(std::span<const DesignColumn> columns, const SpaceTimePoint& p,
                               std::optional<std::size_t> level = std::nullopt);
double row_predictor(std::span<const double> row, const Eigen::VectorXd& theta);

DesignMatrix build_design(std::span<const SpaceTimePoint> points, std::span<const DesignColumn> columns,
                          std::optional<std::size_t> level = std::nullopt);
DesignMatrix build_design(const CubatureScheme& scheme, const ModelSpec& spec);

struct SchemeSummary {
    Window window;
    GridResolution resolution;
    std::size_t n_data = 0;
    std::size_t n_dummy = 0;
    std::size_t rows = 0;
};

class FittedModel {
public:
    FittedModel(ModelSpec spec, std::vector<DesignColumn> columns, SchemeSummary scheme, FitResult fit,
                std::vector<MarkLevel> levels, std::vector<std::string> warnings = {});

    const ModelSpec& spec() const noexcept { return spec_; }
    const std::vector<DesignColumn>& columns() const noexcept { return columns_; }
    const SchemeSummary& scheme() const noexcept { return scheme_; }
    const FitResult& fit() const noexcept { return fit_; }
    const std::vector<MarkLevel>& levels() const noexcept { return levels_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    bool is_marked() const noexcept { return !levels_.empty(); }
    const Window& window() const noexcept { return scheme_.window; }

    // 2p - 2 * log_likelihood_approx.
    double aic() const;
    // Position of the level with this label; throws InvalidArgument.
    std::size_t level_position(const std::string& label) const;

private:
    ModelSpec spec_;
    std::vector<DesignColumn> columns_;
    SchemeSummary scheme_;
    FitResult fit_;
    std::vector<MarkLevel> levels_;
    std::vector<std::string> warnings_;
};

// Single-type fit through the cubature scheme. Throws FitError for an empty
// pattern.
FittedModel fit_stpp(const PointPattern& pattern, const ModelSpec& spec, const GridResolution& res,
                     const IrlsConfig& irls = {});

// Multitype fit over the replicated cubature scheme (M >= 2 levels).
FittedModel fit_multitype(const MarkedPointPattern& pattern, const ModelSpec& spec, const GridResolution& res,
                          const IrlsConfig& irls = {});

// exp of the fitted linear predictor; `mark` is required exactly when the
// model is marked.
double predict_intensity(const FittedModel& model, const SpaceTimePoint& p,
                         const std::optional<std::string>& mark = std::nullopt);
double predict_intensity_at_level(const FittedModel& model, const SpaceTimePoint& p, std::size_t level);

// Sum of the per-level intensities; marked models only.
double marginal_intensity(const FittedModel& model, const SpaceTimePoint& p);

// Riemann-sum integral of the fitted intensity over the window on a fresh
// dummy-only scheme (marginal intensity for marked models unless `mark`).
double expected_count(const FittedModel& model, const GridResolution& res,
                      const std::optional<std::string>& mark = std::nullopt);

}  // namespace stpp
