#include "stpp/model.hpp"

#include <algorithm>
#include <cmath>

#include "stpp/error.hpp"

namespace stpp {

namespace {

std::string level_tag(const MarkLevel& l) { return "mark[" + l.label + "]"; }

void append_warnings(std::vector<std::string>& out, const std::vector<std::string>& in) {
    out.insert(out.end(), in.begin(), in.end());
}

void duplicate_warning(std::vector<std::string>& out, std::span<const SpaceTimePoint> points) {
    const auto dups = find_duplicates(points);
    if (!dups.empty())
        out.push_back(std::to_string(dups.size()) + " duplicated point(s) in the pattern (first at index " +
                      std::to_string(dups.front()) + "); the Poisson model assumes no multiple points");
}

IrlsConfig with_mask(IrlsConfig cfg, const std::vector<DesignColumn>& columns, double ridge) {
    cfg.ridge = ridge;
    cfg.ridge_mask.assign(columns.size(), 0);
    for (std::size_t j = 0; j < columns.size(); ++j) cfg.ridge_mask[j] = columns[j].penalized ? 1 : 0;
    return cfg;
}

}  // namespace

void ModelSpec::validate() const {
    if (terms.empty()) throw InvalidArgument("model needs at least one term");
    std::size_t intercepts = 0;
    std::vector<std::string> names;
    for (const auto& t : terms) {
        stpp::validate(t);
        if (std::holds_alternative<Intercept>(t)) ++intercepts;
        const auto n = column_label(t);
        if (std::find(names.begin(), names.end(), n) != names.end())
            throw InvalidArgument("term '" + n + "' appears more than once");
        names.push_back(n);
    }
    if (intercepts > 1) throw InvalidArgument("intercept listed more than once");
    if (!(ridge_on_marks >= 0.0) || !std::isfinite(ridge_on_marks))
        throw InvalidArgument("ridge_on_marks must be nonnegative");
    if (!multitype && ridge_on_marks != 0.0) throw InvalidArgument("ridge_on_marks requires a multitype model");
}

std::string column_label(const CovariateFunction& term) {
    return std::holds_alternative<Intercept>(term) ? "(Intercept)" : term_name(term);
}

std::vector<DesignColumn> unmarked_columns(const ModelSpec& spec) {
    std::vector<DesignColumn> cols;
    for (const auto& t : spec.terms) cols.push_back({t, std::nullopt, false, column_label(t)});
    return cols;
}

std::vector<DesignColumn> multitype_columns(const ModelSpec& spec, const std::vector<MarkLevel>& levels) {
    if (!spec.multitype) throw InvalidArgument("multitype columns need a multitype model");
    const bool penalize = spec.ridge_on_marks > 0.0;
    std::vector<DesignColumn> cols;
    if (spec.multitype->interact_all && !penalize) {
        for (std::size_t m = 0; m < levels.size(); ++m)
            for (const auto& t : spec.terms)
                cols.push_back({t, m, false, level_tag(levels[m]) + ":" + column_label(t)});
    } else if (spec.multitype->interact_all) {
        for (const auto& t : spec.terms) cols.push_back({t, std::nullopt, false, column_label(t)});
        for (std::size_t m = 1; m < levels.size(); ++m)
            for (const auto& t : spec.terms)
                cols.push_back({t, m, true, "delta[" + levels[m].label + "]:" + column_label(t)});
    } else {
        for (const auto& t : spec.terms) cols.push_back({t, std::nullopt, false, column_label(t)});
        for (std::size_t m = 1; m < levels.size(); ++m)
            cols.push_back({Intercept{}, m, penalize, level_tag(levels[m])});
    }
    return cols;
}

std::vector<double> design_row(std::span<const DesignColumn> columns, const SpaceTimePoint& p,
                               std::optional<std::size_t> level) {
    std::vector<double> row(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto& c = columns[j];
        row[j] = (!c.level || c.level == level) ? evaluate_covariate(c.term, p) : 0.0;
    }
    return row;
}

double row_predictor(std::span<const double> row, const Eigen::VectorXd& theta) {
    double eta = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) eta += row[j] * theta[static_cast<Eigen::Index>(j)];
    return eta;
}

DesignMatrix build_design(std::span<const SpaceTimePoint> points, std::span<const DesignColumn> columns,
                          std::optional<std::size_t> level) {
    DesignMatrix X;
    X.values.resize(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(columns.size()));
    for (const auto& c : columns) X.column_names.push_back(c.name);
    for (std::size_t k = 0; k < points.size(); ++k) {
        std::vector<double> row;
        try {
            row = design_row(columns, points[k], level);
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("design row " + std::to_string(k) + ": " + e.what());
        }
        for (std::size_t j = 0; j < row.size(); ++j)
            X.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = row[j];
    }
    return X;
}

DesignMatrix build_design(const CubatureScheme& scheme, const ModelSpec& spec) {
    spec.validate();
    const auto cols = unmarked_columns(spec);
    return build_design(scheme.points(), cols);
}

FittedModel::FittedModel(ModelSpec spec, std::vector<DesignColumn> columns, SchemeSummary scheme, FitResult fit,
                         std::vector<MarkLevel> levels, std::vector<std::string> warnings)
    : spec_(std::move(spec)),
      columns_(std::move(columns)),
      scheme_(scheme),
      fit_(std::move(fit)),
      levels_(std::move(levels)),
      warnings_(std::move(warnings)) {
    if (static_cast<Eigen::Index>(columns_.size()) != fit_.coefficients.size())
        throw InvalidArgument("fitted model has " + std::to_string(columns_.size()) + " columns but " +
                              std::to_string(fit_.coefficients.size()) + " coefficients");
    for (const auto& c : columns_)
        if (c.level && *c.level >= levels_.size()) throw InvalidArgument("column '" + c.name + "' has no level");
}

double FittedModel::aic() const {
    return 2.0 * static_cast<double>(columns_.size()) - 2.0 * fit_.log_likelihood_approx;
}

std::size_t FittedModel::level_position(const std::string& label) const {
    for (std::size_t m = 0; m < levels_.size(); ++m)
        if (levels_[m].label == label) return m;
    throw InvalidArgument("unknown mark level '" + label + "'");
}

FittedModel fit_stpp(const PointPattern& pattern, const ModelSpec& spec, const GridResolution& res,
                     const IrlsConfig& irls) {
    spec.validate();
    if (spec.is_marked()) throw InvalidArgument("fit_stpp takes an unmarked model; use fit_multitype");
    if (pattern.empty()) throw FitError("no points: cannot fit an intensity to an empty pattern");

    const auto scheme = build_scheme(pattern, res);
    const auto columns = unmarked_columns(spec);
    const auto X = build_design(scheme.points(), columns);
    const auto yv = responses(scheme);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size()));
    const Eigen::VectorXd w =
        Eigen::Map<const Eigen::VectorXd>(scheme.weights().data(), static_cast<Eigen::Index>(scheme.size()));
    auto fit = fit_irls(X, y, w, with_mask(irls, columns, 0.0));

    std::vector<std::string> warnings;
    append_warnings(warnings, scheme.warnings());
    duplicate_warning(warnings, pattern.points());
    SchemeSummary summary{pattern.window(), res, scheme.n_data(), scheme.n_dummy(), scheme.size()};
    return FittedModel(spec, columns, summary, std::move(fit), {}, std::move(warnings));
}

FittedModel fit_multitype(const MarkedPointPattern& pattern, const ModelSpec& spec, const GridResolution& res,
                          const IrlsConfig& irls) {
    spec.validate();
    if (!spec.is_marked()) throw InvalidArgument("fit_multitype needs a model with mark effects");
    if (pattern.level_count() < 2)
        throw InvalidArgument("pattern has a single mark level; fit its ground pattern with fit_stpp");
    if (pattern.size() == 0) throw FitError("no points: cannot fit an intensity to an empty pattern");

    const auto scheme = build_replicated_scheme(pattern, res);
    const auto columns = multitype_columns(spec, scheme.levels());
    const std::size_t M = scheme.levels().size();
    const auto K = static_cast<Eigen::Index>(scheme.locations());

    DesignMatrix X;
    X.values.resize(K * static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(columns.size()));
    for (const auto& c : columns) X.column_names.push_back(c.name);
    Eigen::VectorXd y(X.values.rows()), w(X.values.rows());
    for (std::size_t m = 0; m < M; ++m) {
        const auto block = build_design(scheme.base(), columns, m);
        const auto offset = static_cast<Eigen::Index>(m) * K;
        X.values.middleRows(offset, K) = block.values;
        const auto ym = scheme.responses(m);
        const auto& am = scheme.weights_by_level()[m];
        for (Eigen::Index k = 0; k < K; ++k) {
            y[offset + k] = ym[static_cast<std::size_t>(k)];
            w[offset + k] = am[static_cast<std::size_t>(k)];
        }
    }
    auto fit = fit_irls(X, y, w, with_mask(irls, columns, spec.ridge_on_marks));

    std::vector<std::string> warnings;
    append_warnings(warnings, scheme.warnings());
    duplicate_warning(warnings, pattern.points());
    SchemeSummary summary{pattern.window(), res, scheme.n_data(), scheme.n_dummy(),
                          static_cast<std::size_t>(X.values.rows())};
    return FittedModel(spec, columns, summary, std::move(fit), scheme.levels(), std::move(warnings));
}

double predict_intensity_at_level(const FittedModel& model, const SpaceTimePoint& p, std::size_t level) {
    if (!model.window().contains(p)) throw InvalidArgument("prediction point " + to_string(p) + " is outside the window");
    const auto row = design_row(model.columns(), p, model.is_marked() ? std::optional(level) : std::nullopt);
    return std::exp(row_predictor(row, model.fit().coefficients));
}

double predict_intensity(const FittedModel& model, const SpaceTimePoint& p, const std::optional<std::string>& mark) {
    if (model.is_marked()) {
        if (!mark) throw InvalidArgument("a marked model needs a mark level for prediction");
        return predict_intensity_at_level(model, p, model.level_position(*mark));
    }
    if (mark) throw InvalidArgument("unmarked model cannot predict for mark '" + *mark + "'");
    return predict_intensity_at_level(model, p, 0);
}

double marginal_intensity(const FittedModel& model, const SpaceTimePoint& p) {
    if (!model.is_marked()) throw InvalidArgument("marginal intensity is defined for marked models only");
    double sum = 0.0;
    for (std::size_t m = 0; m < model.levels().size(); ++m) sum += predict_intensity_at_level(model, p, m);
    return sum;
}

double expected_count(const FittedModel& model, const GridResolution& res, const std::optional<std::string>& mark) {
    const auto scheme = build_dummy_scheme(model.window(), res);
    if (model.is_marked() && !mark)
        return approximate_integral(scheme, [&](const SpaceTimePoint& p) { return marginal_intensity(model, p); });
    return approximate_integral(scheme, [&](const SpaceTimePoint& p) { return predict_intensity(model, p, mark); });
}

}  // namespace stpp
