#include "stpp/model_io.hpp"

#include <map>

#include <json.hpp>

#include "stpp/error.hpp"
#include "stpp/io.hpp"
#include "stpp/terms.hpp"

namespace stpp {

namespace {

using json = nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index n) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) throw ParseError("matrix has the wrong shape");
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != n) throw ParseError("matrix has the wrong shape");
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

}  // namespace

void save_model(const FittedModel& model, const std::filesystem::path& path) {
    const auto& fit = model.fit();
    const auto se = fit.standard_errors();

    json covariates = json::array();
    std::map<std::string, bool> saved;
    for (const auto& c : model.columns()) {
        const auto* ext = std::get_if<ExternalCovariate>(&c.term);
        if (!ext || saved[ext->name]) continue;
        saved[ext->name] = true;
        auto stem = path.parent_path() / path.stem();
        stem += "." + ext->name + ".grid";
        const auto header = io::save_grid(*ext->grid, stem, ext->name);
        covariates.push_back({{"name", ext->name}, {"grid", header.filename().string()}});
    }

    json terms = json::array();
    for (const auto& t : model.spec().terms) terms.push_back(term_name(t));
    json spec = {{"terms", terms}, {"ridge_on_marks", model.spec().ridge_on_marks}};
    spec["multitype"] = model.spec().multitype ? json{{"interact_all", model.spec().multitype->interact_all}} : json();

    json levels = json::array();
    for (const auto& l : model.levels()) levels.push_back(l.label);

    json coefs = json::array();
    for (std::size_t j = 0; j < model.columns().size(); ++j) {
        const auto& c = model.columns()[j];
        const auto jj = static_cast<Eigen::Index>(j);
        coefs.push_back({{"name", c.name},
                         {"term", term_name(c.term)},
                         {"level", c.level ? json(model.levels()[*c.level].label) : json()},
                         {"penalized", c.penalized},
                         {"estimate", fit.coefficients[jj]},
                         {"std_error", se[jj]}});
    }

    json trace = json::array();
    for (const auto& r : fit.trace)
        trace.push_back({{"iteration", r.iteration}, {"deviance", r.deviance}, {"halvings", r.halvings},
                         {"max_step", r.max_step}});

    const auto& s = model.scheme();
    const auto& w = s.window;
    json doc = {
        {"schema", "stpp-fitted-model"},
        {"schema_version", kModelSchemaVersion},
        {"spec", spec},
        {"levels", levels},
        {"window", {{"x", {w.x().lo(), w.x().hi()}}, {"y", {w.y().lo(), w.y().hi()}}, {"t", {w.t().lo(), w.t().hi()}}}},
        {"scheme",
         {{"resolution", {s.resolution.nx, s.resolution.ny, s.resolution.nt}},
          {"n_data", s.n_data},
          {"n_dummy", s.n_dummy},
          {"rows", s.rows}}},
        {"coefficients", coefs},
        {"covariance", matrix_json(fit.covariance)},
        {"fisher", matrix_json(fit.fisher)},
        {"convergence",
         {{"converged", fit.converged},
          {"iterations", fit.iterations},
          {"deviance", fit.deviance},
          {"log_likelihood_approx", fit.log_likelihood_approx},
          {"aic", model.aic()},
          {"trace", trace}}},
        {"covariates", covariates},
        {"warnings", model.warnings()},
    };
    io::write_file(path, doc.dump(2) + "\n");
}

FittedModel load_model(const std::filesystem::path& path) {
    const auto text = io::read_file(path);
    try {
        const auto doc = json::parse(text);
        if (doc.at("schema") != "stpp-fitted-model")
            throw ParseError(path.string() + ": not a fitted-model document");
        if (doc.at("schema_version") != kModelSchemaVersion)
            throw ParseError(path.string() + ": unsupported schema version " + doc.at("schema_version").dump());

        ExternalCovariates externals;
        for (const auto& c : doc.at("covariates")) {
            const auto name = c.at("name").get<std::string>();
            auto grid = std::make_shared<const CovariateGrid>(
                io::load_grid(path.parent_path() / c.at("grid").get<std::string>()));
            externals.emplace(name, ExternalCovariate{std::move(grid), name});
        }

        ModelSpec spec;
        for (const auto& t : doc.at("spec").at("terms")) spec.terms.push_back(parse_term(t.get<std::string>(), externals));
        if (!doc.at("spec").at("multitype").is_null())
            spec.multitype = MarkFixedEffects{doc.at("spec").at("multitype").at("interact_all").get<bool>()};
        spec.ridge_on_marks = doc.at("spec").at("ridge_on_marks").get<double>();
        spec.validate();

        std::vector<MarkLevel> levels;
        for (const auto& l : doc.at("levels")) levels.push_back({l.get<std::string>(), levels.size() + 1});
        auto level_pos = [&](const std::string& label) {
            for (std::size_t m = 0; m < levels.size(); ++m)
                if (levels[m].label == label) return m;
            throw ParseError(path.string() + ": coefficient refers to unknown level '" + label + "'");
        };

        std::vector<DesignColumn> columns;
        const auto& coefs = doc.at("coefficients");
        Eigen::VectorXd theta(static_cast<Eigen::Index>(coefs.size()));
        for (std::size_t j = 0; j < coefs.size(); ++j) {
            const auto& c = coefs[j];
            DesignColumn col{parse_term(c.at("term").get<std::string>(), externals), std::nullopt,
                             c.at("penalized").get<bool>(), c.at("name").get<std::string>()};
            if (!c.at("level").is_null()) col.level = level_pos(c.at("level").get<std::string>());
            columns.push_back(std::move(col));
            theta[static_cast<Eigen::Index>(j)] = c.at("estimate").get<double>();
        }
        if (spec.is_marked() != !levels.empty())
            throw ParseError(path.string() + ": mark levels do not match the model specification");

        const auto& w = doc.at("window");
        const auto window = Window::from_bounds(
            {w.at("x")[0], w.at("x")[1], w.at("y")[0], w.at("y")[1], w.at("t")[0], w.at("t")[1]});
        const auto& s = doc.at("scheme");
        const auto& r = s.at("resolution");
        SchemeSummary summary{window,
                              GridResolution(r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>(),
                                             r.at(2).get<std::size_t>()),
                              s.at("n_data").get<std::size_t>(), s.at("n_dummy").get<std::size_t>(),
                              s.at("rows").get<std::size_t>()};

        FitResult fit;
        fit.coefficients = theta;
        fit.covariance = matrix_from_json(doc.at("covariance"), theta.size());
        fit.fisher = matrix_from_json(doc.at("fisher"), theta.size());
        const auto& conv = doc.at("convergence");
        fit.converged = conv.at("converged").get<bool>();
        fit.iterations = conv.at("iterations").get<int>();
        fit.deviance = conv.at("deviance").get<double>();
        fit.log_likelihood_approx = conv.at("log_likelihood_approx").get<double>();
        for (const auto& t : conv.at("trace"))
            fit.trace.push_back({t.at("iteration").get<int>(), t.at("deviance").get<double>(),
                                 t.at("halvings").get<int>(), t.at("max_step").get<double>()});

        return FittedModel(std::move(spec), std::move(columns), summary, std::move(fit), std::move(levels),
                           doc.at("warnings").get<std::vector<std::string>>());
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": malformed model document: " + e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(path.string() + ": inconsistent model document: " + e.what());
    }
}

}  // namespace stpp
