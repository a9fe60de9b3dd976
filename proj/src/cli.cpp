#include "stpp/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "stpp/covariates.hpp"
#include "stpp/cubature.hpp"
#include "stpp/error.hpp"
#include "stpp/io.hpp"
#include "stpp/model.hpp"
#include "stpp/model_io.hpp"
#include "stpp/random.hpp"
#include "stpp/simulate.hpp"
#include "stpp/study.hpp"
#include "stpp/terms.hpp"
#include "stpp/text.hpp"

namespace stpp::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr int kConfigSchemaVersion = 1;

// Raised for non-converged fits after the outputs are written.
struct NotConverged {};

Window parse_window(const std::string& s) {
    const auto v = text::parse_double_list(s, "window bound");
    if (v.size() != 6) throw ParseError("--window needs six bounds x0,x1,y0,y1,t0,t1, got '" + s + "'");
    try {
        return Window::from_bounds({v[0], v[1], v[2], v[3], v[4], v[5]});
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("--window: ") + e.what());
    }
}

std::string window_flag(const Window& w) {
    std::string s;
    for (int a = 0; a < 3; ++a) {
        if (a) s += ',';
        s += text::format_double(w.axis(a).lo()) + "," + text::format_double(w.axis(a).hi());
    }
    return s;
}

json window_json(const Window& w) {
    return {{"x", {w.x().lo(), w.x().hi()}}, {"y", {w.y().lo(), w.y().hi()}}, {"t", {w.t().lo(), w.t().hi()}}};
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    std::vector<std::uint64_t> out;
    if (text::trim(s).empty()) return out;
    for (const auto& tok : text::split(s, ',')) {
        const auto v = text::parse_int(tok, "seed");
        if (v < 0) throw ParseError("seeds must be nonnegative");
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

void write_text(const fs::path& path, const std::string& contents) { io::write_file(path, contents); }

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

// Expands --config FILE into flag tokens placed right after the subcommand
// name, so that explicit flags (which come later) take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::optional<std::string> config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ParseError("--config needs a file argument");
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!config_path) return args;
    if (args.empty()) throw ParseError("--config needs a subcommand");

    json doc;
    try {
        doc = json::parse(io::read_file(*config_path));
    } catch (const json::exception& e) {
        throw ParseError("config '" + *config_path + "': " + e.what());
    }
    if (!doc.is_object() || !doc.contains("schema_version") || doc["schema_version"] != kConfigSchemaVersion)
        throw ParseError("config '" + *config_path + "' must be a JSON object with \"schema_version\": 1");
    const json* section = &doc;
    if (doc.contains(args[0]) && doc[args[0]].is_object()) section = &doc[args[0]];

    std::vector<std::string> tokens;
    auto scalar = [&](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) return text::format_double(v.get<double>());
        throw ParseError("config '" + *config_path + "': unsupported value " + v.dump());
    };
    for (const auto& [key, value] : section->items()) {
        if (key == "schema_version" || (section == &doc && value.is_object())) continue;
        const auto flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
        } else if (value.is_array()) {
            for (const auto& v : value) {
                tokens.push_back(flag);
                tokens.push_back(scalar(v));
            }
        } else {
            tokens.push_back(flag);
            tokens.push_back(scalar(value));
        }
    }
    args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    return args;
}

// ---- simulate ----

struct SimulateArgs {
    std::string window;
    std::string log_intensity;
    std::optional<double> rate;
    std::optional<double> lambda_max;
    std::uint64_t seed = 0;
    std::string marks;
    std::string out;
    std::string meta;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const auto window = parse_window(a.window);
    if (a.log_intensity.empty() == !a.rate.has_value())
        throw ParseError("simulate needs exactly one of --log-intensity and --rate");

    std::optional<PointPattern> pattern;
    json meta = {{"schema", "stpp-simulation"},
                 {"schema_version", 1},
                 {"generator", std::string(RandomStream::kGeneratorId)},
                 {"seed", a.seed},
                 {"window", window_json(window)}};
    double expected = 0.0;
    if (a.rate) {
        if (!(*a.rate >= 0.0)) throw ParseError("--rate must be nonnegative");
        pattern = simulate_homogeneous(window, *a.rate, {a.seed, *a.rate});
        expected = *a.rate * window.volume();
        meta["intensity"] = "constant " + text::format_double(*a.rate);
    } else {
        const auto truth = LogLinearIntensity::parse(a.log_intensity);
        if (!a.lambda_max) throw ParseError("--log-intensity needs --lambda-max");
        try {
            pattern = simulate_inhomogeneous(window, truth, {a.seed, *a.lambda_max});
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what());
        }
        expected = reference_integral(window, truth);
        meta["intensity"] = "exp(" + truth.to_string() + ")";
        meta["lambda_max"] = *a.lambda_max;
    }
    meta["expected_count"] = expected;
    meta["realized_count"] = pattern->size();

    std::string csv;
    if (!a.marks.empty()) {
        std::vector<std::string> labels;
        std::vector<double> cumulative;
        double total = 0.0;
        for (const auto& item : text::split(a.marks, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw ParseError("--marks entries must look like LABEL=PROBABILITY");
            labels.push_back(std::string(text::trim(item.substr(0, eq))));
            const double pr = text::parse_double(item.substr(eq + 1), "mark probability");
            if (!(pr > 0.0)) throw ParseError("mark probabilities must be positive");
            total += pr;
            cumulative.push_back(total);
        }
        RandomStream rng(a.seed, 2);
        std::vector<std::string> assigned;
        for (std::size_t i = 0; i < pattern->size(); ++i) {
            const double u = rng.uniform() * total;
            const auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
            assigned.push_back(labels[std::min<std::size_t>(static_cast<std::size_t>(pos), labels.size() - 1)]);
        }
        std::vector<SpaceTimePoint> pts(pattern->points().begin(), pattern->points().end());
        const auto marked = MarkedPointPattern::from_labels(window, std::move(pts), assigned, labels);
        csv = render([&](std::ostream& os) { io::write_pattern_csv(os, marked); });
        meta["marks"] = a.marks;
    } else {
        csv = render([&](std::ostream& os) { io::write_pattern_csv(os, *pattern); });
    }

    // Without --out the CSV goes to standard output and the summary to the
    // diagnostic stream.
    std::ostream& summary = a.out.empty() ? err : out;
    if (a.out.empty())
        out << csv;
    else
        write_text(a.out, csv);
    if (!a.meta.empty() || !a.out.empty()) {
        const fs::path meta_path =
            a.meta.empty() ? fs::path(a.out).replace_extension(".meta.json") : fs::path(a.meta);
        write_text(meta_path, meta.dump(2) + "\n");
    }
    summary << "simulated " << pattern->size() << " points (expected " << text::format_double(expected) << ")";
    if (!a.out.empty()) summary << " -> " << a.out;
    summary << '\n';
    return kSuccess;
}

// ---- shared pattern loading ----

struct LoadedPattern {
    Window window;
    io::PatternTable table;
};

LoadedPattern load_pattern(const std::string& path, const std::string& window, bool infer, std::ostream& err) {
    if (window.empty() == !infer) throw ParseError("give exactly one of --window and --infer-window");
    auto table = io::read_pattern_csv(fs::path(path));
    Window w = infer ? io::infer_window(table.points) : parse_window(window);
    if (infer) err << "info: inferred window " << window_flag(w) << '\n';
    return {w, std::move(table)};
}

// ---- fit ----

struct FitArgs {
    std::string pattern;
    std::string window;
    bool infer_window = false;
    std::string terms = "1";
    std::string grid = "10,10,10";
    std::vector<std::string> covariates;
    double idw_power = 2.0;
    std::string idw_grid = "64,64,64";
    std::string idw_scale;
    bool marked = false;
    bool interact_all = false;
    bool shared = false;
    double ridge_marks = 0.0;
    int max_iter = 100;
    double tol = 1e-10;
    std::string out;
    std::string scheme_out;
    bool verbose = false;
};

void print_table(std::ostream& out, const FittedModel& model) {
    const auto& fit = model.fit();
    const auto se = fit.standard_errors();
    std::vector<std::optional<std::size_t>> blocks{std::nullopt};
    for (std::size_t m = 0; m < model.levels().size(); ++m) blocks.push_back(m);
    for (const auto& block : blocks) {
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < model.columns().size(); ++j)
            if (model.columns()[j].level == block) cols.push_back(j);
        if (cols.empty()) continue;
        if (model.is_marked())
            out << (block ? "[mark " + model.levels()[*block].label + "]" : std::string("[all levels]")) << '\n';
        char line[256];
        std::snprintf(line, sizeof line, "%-28s %24s %24s\n", "term", "estimate", "std_error");
        out << line;
        for (auto j : cols) {
            const auto jj = static_cast<Eigen::Index>(j);
            std::snprintf(line, sizeof line, "%-28s %24s %24s\n", model.columns()[j].name.c_str(),
                          text::format_double(fit.coefficients[jj]).c_str(), text::format_double(se[jj]).c_str());
            out << line;
        }
    }
    out << "deviance " << text::format_double(fit.deviance) << ", log-likelihood "
        << text::format_double(fit.log_likelihood_approx) << ", AIC " << text::format_double(model.aic()) << ", "
        << fit.iterations << " iteration(s), " << (fit.converged ? "converged" : "NOT converged") << '\n';
}

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    if (a.interact_all && a.shared) throw ParseError("--interact-all and --shared are mutually exclusive");
    if (!a.marked && (a.interact_all || a.shared || a.ridge_marks != 0.0))
        throw ParseError("--interact-all, --shared and --ridge-marks need --marked");
    const auto res = GridResolution::parse(a.grid);
    const auto loaded = load_pattern(a.pattern, a.window, a.infer_window, err);

    ExternalCovariates externals;
    if (!a.covariates.empty()) {
        const auto fine = GridResolution::parse(a.idw_grid);
        IdwConfig idw = IdwConfig::for_window(loaded.window, a.idw_power);
        if (!a.idw_scale.empty()) {
            const auto s = text::parse_double_list(a.idw_scale, "IDW scale");
            if (s.size() != 3) throw ParseError("--idw-scale needs three factors sx,sy,st");
            idw.scaling = {s[0], s[1], s[2]};
        }
        try {
            idw.validate();
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what());
        }
        for (const auto& spec : a.covariates) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos || eq == 0) throw ParseError("--covariate expects NAME=PATH, got '" + spec + "'");
            const auto name = spec.substr(0, eq);
            if (name == "x" || name == "y" || name == "t" || name == "1")
                throw ParseError("covariate name '" + name + "' is reserved");
            const auto samples = io::read_covariate_samples_csv(fs::path(spec.substr(eq + 1)));
            auto grid = std::make_shared<const CovariateGrid>(smooth_to_grid(samples, loaded.window, fine, idw));
            externals.emplace(name, ExternalCovariate{std::move(grid), name});
        }
    }

    ModelSpec spec;
    spec.terms = parse_terms(a.terms, externals);
    IrlsConfig irls;
    irls.max_iterations = a.max_iter;
    irls.tolerance = a.tol;

    std::optional<FittedModel> model;
    if (a.marked) {
        if (!loaded.table.marks) throw ParseError("--marked needs a pattern CSV with a mark column");
        spec.multitype = MarkFixedEffects{!a.shared};
        spec.ridge_on_marks = a.ridge_marks;
        std::vector<SpaceTimePoint> pts = loaded.table.points;
        const auto pattern = MarkedPointPattern::from_labels(loaded.window, std::move(pts), *loaded.table.marks);
        if (!a.scheme_out.empty())
            write_text(a.scheme_out, render([&](std::ostream& os) {
                           write_scheme_csv(os, build_replicated_scheme(pattern, res));
                       }));
        model = fit_multitype(pattern, spec, res, irls);
    } else {
        const PointPattern pattern(loaded.window, loaded.table.points);
        if (!a.scheme_out.empty())
            write_text(a.scheme_out,
                       render([&](std::ostream& os) { write_scheme_csv(os, build_scheme(pattern, res)); }));
        model = fit_stpp(pattern, spec, res, irls);
    }

    for (const auto& w : model->warnings()) err << "warning: " << w << '\n';
    if (a.verbose)
        for (const auto& r : model->fit().trace)
            err << "iteration " << r.iteration << ": deviance " << text::format_double(r.deviance) << ", halvings "
                << r.halvings << ", max step " << text::format_double(r.max_step) << '\n';
    save_model(*model, a.out);
    print_table(out, *model);
    if (!model->fit().converged) throw NotConverged{};
    return kSuccess;
}

// ---- predict-grid ----

struct PredictArgs {
    std::string model;
    std::string grid;
    std::string out;
    bool marginal = false;
    std::string mark;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
    const auto model = load_model(a.model);
    const auto res = GridResolution::parse(a.grid);
    if (a.marginal && !model.is_marked()) throw ParseError("--marginal needs a marked model");
    if (!a.mark.empty() && !model.is_marked()) throw ParseError("--mark needs a marked model");
    if (!a.mark.empty() && a.marginal) throw ParseError("--mark and --marginal are mutually exclusive");

    const auto centers = generate_dummy_grid(model.window(), res);
    auto point_prefix = [](std::ostream& os, const SpaceTimePoint& p) {
        os << text::format_double(p.x) << ',' << text::format_double(p.y) << ',' << text::format_double(p.t) << ',';
    };
    const auto csv = render([&](std::ostream& os) {
        if (!model.is_marked() || a.marginal) {
            os << "x,y,t,intensity\n";
            for (const auto& p : centers) {
                point_prefix(os, p);
                os << text::format_double(a.marginal ? marginal_intensity(model, p) : predict_intensity(model, p))
                   << '\n';
            }
            return;
        }
        os << "x,y,t,intensity,mark\n";
        for (std::size_t m = 0; m < model.levels().size(); ++m) {
            const auto& label = model.levels()[m].label;
            if (!a.mark.empty() && label != a.mark) continue;
            for (const auto& p : centers) {
                point_prefix(os, p);
                os << text::format_double(predict_intensity_at_level(model, p, m)) << ',' << label << '\n';
            }
        }
    });
    if (!a.mark.empty()) model.level_position(a.mark);
    write_text(a.out, csv);
    out << "wrote " << centers.size() << " cell(s) -> " << a.out << '\n';
    return kSuccess;
}

// ---- convergence-study ----

struct StudyArgs {
    std::string window = "0,1,0,1,0,1";
    std::string log_intensity;
    double lambda_max = 0.0;
    std::string seeds;
    std::string ladder;
    std::string out;
    std::string summary;
    std::string timing;
    unsigned threads = 0;
    int max_iter = 100;
    double tol = 1e-10;
};

int cmd_study(const StudyArgs& a, std::ostream& out) {
    StudyConfig cfg;
    cfg.window = parse_window(a.window);
    cfg.truth = LogLinearIntensity::parse(a.log_intensity);
    cfg.lambda_max = a.lambda_max;
    cfg.seeds = parse_seeds(a.seeds);
    if (cfg.seeds.empty()) throw ParseError("--seeds must list at least one seed");
    for (const auto& tok : text::split(a.ladder, ',')) {
        const auto n = text::parse_int(tok, "ladder resolution");
        if (n < 1) throw ParseError("ladder resolutions must be >= 1");
        cfg.ladder.push_back(static_cast<std::size_t>(n));
    }
    if (!(cfg.lambda_max > 0.0)) throw ParseError("--lambda-max must be positive");
    cfg.irls.max_iterations = a.max_iter;
    cfg.irls.tolerance = a.tol;
    cfg.threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());

    const auto report = run_convergence_study(cfg);
    const fs::path summary_path =
        a.summary.empty() ? fs::path(a.out).replace_extension(".summary.csv") : fs::path(a.summary);
    write_text(a.out, render([&](std::ostream& os) { write_study_csv(os, report); }));
    write_text(summary_path, render([&](std::ostream& os) { write_study_summary_csv(os, report); }));
    if (!a.timing.empty()) write_text(a.timing, render([&](std::ostream& os) { write_study_timing_csv(os, report); }));

    std::size_t failed = 0;
    for (const auto& c : report.cells) failed += c.ok() ? 0 : 1;
    out << "study: " << report.cells.size() << " cell(s), " << failed << " failed -> " << a.out << ", "
        << summary_path.string() << '\n';
    return kSuccess;
}

// ---- scheme / smooth ----

struct SchemeArgs {
    std::string pattern;
    std::string window;
    bool infer_window = false;
    std::string grid = "10,10,10";
    bool marked = false;
    std::string out;
};

int cmd_scheme(const SchemeArgs& a, std::ostream& out, std::ostream& err) {
    const auto res = GridResolution::parse(a.grid);
    const auto loaded = load_pattern(a.pattern, a.window, a.infer_window, err);
    std::string csv;
    std::vector<std::string> warnings;
    if (a.marked) {
        if (!loaded.table.marks) throw ParseError("--marked needs a pattern CSV with a mark column");
        std::vector<SpaceTimePoint> pts = loaded.table.points;
        const auto pattern = MarkedPointPattern::from_labels(loaded.window, std::move(pts), *loaded.table.marks);
        const auto scheme = build_replicated_scheme(pattern, res);
        warnings = scheme.warnings();
        csv = render([&](std::ostream& os) { write_scheme_csv(os, scheme); });
    } else {
        const auto scheme = build_scheme(PointPattern(loaded.window, loaded.table.points), res);
        warnings = scheme.warnings();
        csv = render([&](std::ostream& os) { write_scheme_csv(os, scheme); });
    }
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    write_text(a.out, csv);
    out << "wrote cubature scheme -> " << a.out << '\n';
    return kSuccess;
}

struct SmoothArgs {
    std::string samples;
    std::string window;
    std::string grid = "64,64,64";
    double power = 2.0;
    std::string scale;
    std::string name = "covariate";
    std::string out;
};

int cmd_smooth(const SmoothArgs& a, std::ostream& out) {
    const auto window = parse_window(a.window);
    const auto res = GridResolution::parse(a.grid);
    IdwConfig idw = IdwConfig::for_window(window, a.power);
    if (!a.scale.empty()) {
        const auto s = text::parse_double_list(a.scale, "IDW scale");
        if (s.size() != 3) throw ParseError("--idw-scale needs three factors sx,sy,st");
        idw.scaling = {s[0], s[1], s[2]};
    }
    try {
        idw.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
    const auto samples = io::read_covariate_samples_csv(fs::path(a.samples));
    const auto grid = smooth_to_grid(samples, window, res, idw);
    fs::path csv_path(a.out);
    csv_path += ".csv";
    write_text(csv_path, render([&](std::ostream& os) { io::write_grid_csv(os, grid); }));
    const auto header = io::save_grid(grid, a.out, a.name);
    out << "wrote " << grid.values().size() << " cell(s) -> " << csv_path.string() << ", " << header.string() << '\n';
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cubature-based fitting of spatio-temporal Poisson point processes", "stpp"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a Poisson pattern by thinning");
    simulate->add_option("--window", sim.window, "x0,x1,y0,y1,t0,t1")->required();
    simulate->add_option("--log-intensity", sim.log_intensity, "Log-intensity, e.g. \"4 + 1.2*x - 0.8*t\"");
    simulate->add_option("--rate", sim.rate, "Constant intensity (homogeneous process)");
    simulate->add_option("--lambda-max", sim.lambda_max, "Dominating rate for thinning");
    simulate->add_option("--seed", sim.seed, "Random seed")->required();
    simulate->add_option("--marks", sim.marks, "Independent marks, e.g. \"A=0.3,B=0.7\"");
    simulate->add_option("--out", sim.out, "Pattern CSV (default: standard output)");
    simulate->add_option("--meta", sim.meta, "Metadata JSON (default <out>.meta.json)");

    FitArgs fit;
    auto* fitc = app.add_subcommand("fit", "Fit a log-linear intensity");
    fitc->add_option("--pattern", fit.pattern, "Pattern CSV")->required();
    fitc->add_option("--window", fit.window, "x0,x1,y0,y1,t0,t1");
    fitc->add_flag("--infer-window", fit.infer_window, "Use the bounding box of the points");
    fitc->add_option("--terms", fit.terms, "Comma-separated terms, e.g. \"1,x,y,t,x*t\"");
    fitc->add_option("--grid", fit.grid, "Cubature grid nx,ny,nt");
    fitc->add_option("--covariate", fit.covariates, "NAME=PATH of x,y,t,value samples")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    fitc->add_option("--idw-power", fit.idw_power, "IDW power");
    fitc->add_option("--idw-grid", fit.idw_grid, "Covariate smoothing grid nx,ny,nt");
    fitc->add_option("--idw-scale", fit.idw_scale, "Per-axis distance scales sx,sy,st (default: window lengths)");
    fitc->add_flag("--marked", fit.marked, "Multitype fit over the mark column");
    fitc->add_flag("--interact-all", fit.interact_all, "One coefficient set per mark level (default)");
    fitc->add_flag("--shared", fit.shared, "Shared terms plus mark intercept contrasts");
    fitc->add_option("--ridge-marks", fit.ridge_marks, "Ridge penalty on mark-specific coefficients");
    fitc->add_option("--max-iter", fit.max_iter, "IRLS iteration limit");
    fitc->add_option("--tol", fit.tol, "Relative deviance tolerance");
    fitc->add_option("--out", fit.out, "Model JSON")->required();
    fitc->add_option("--scheme-out", fit.scheme_out, "Also write the cubature scheme CSV");
    fitc->add_flag("--verbose", fit.verbose, "Print the IRLS iteration trace");

    PredictArgs pred;
    auto* predict = app.add_subcommand("predict-grid", "Evaluate a fitted intensity at grid cell centers");
    predict->add_option("--model", pred.model, "Model JSON")->required();
    predict->add_option("--grid", pred.grid, "Output grid nx,ny,nt")->required();
    predict->add_option("--out", pred.out, "Surface CSV")->required();
    predict->add_flag("--marginal", pred.marginal, "Sum over mark levels");
    predict->add_option("--mark", pred.mark, "Only this mark level");

    StudyArgs st;
    auto* study = app.add_subcommand("convergence-study", "Estimation error against the number of dummy points");
    study->add_option("--window", st.window, "x0,x1,y0,y1,t0,t1");
    study->add_option("--log-intensity", st.log_intensity, "True log-intensity")->required();
    study->add_option("--lambda-max", st.lambda_max, "Dominating rate for thinning")->required();
    study->add_option("--seeds", st.seeds, "Comma-separated seeds")->required();
    study->add_option("--ladder", st.ladder, "Cells per axis, e.g. \"4,8,16\"")->required();
    study->add_option("--out", st.out, "Per-fit report CSV")->required();
    study->add_option("--summary", st.summary, "Summary CSV (default <out>.summary.csv)");
    study->add_option("--timing", st.timing, "Wall-time CSV");
    study->add_option("--threads", st.threads, "Worker threads (default: hardware)");
    study->add_option("--max-iter", st.max_iter, "IRLS iteration limit");
    study->add_option("--tol", st.tol, "Relative deviance tolerance");

    SchemeArgs sch;
    auto* scheme = app.add_subcommand("scheme", "Write the cubature scheme of a pattern");
    scheme->add_option("--pattern", sch.pattern, "Pattern CSV")->required();
    scheme->add_option("--window", sch.window, "x0,x1,y0,y1,t0,t1");
    scheme->add_flag("--infer-window", sch.infer_window, "Use the bounding box of the points");
    scheme->add_option("--grid", sch.grid, "Cubature grid nx,ny,nt");
    scheme->add_flag("--marked", sch.marked, "Replicated scheme over the mark column");
    scheme->add_option("--out", sch.out, "Scheme CSV")->required();

    SmoothArgs sm;
    auto* smooth = app.add_subcommand("smooth", "IDW-smooth covariate samples onto a grid");
    smooth->add_option("--samples", sm.samples, "x,y,t,value CSV")->required();
    smooth->add_option("--window", sm.window, "x0,x1,y0,y1,t0,t1")->required();
    smooth->add_option("--grid", sm.grid, "Grid nx,ny,nt");
    smooth->add_option("--idw-power", sm.power, "IDW power");
    smooth->add_option("--idw-scale", sm.scale, "Per-axis distance scales sx,sy,st");
    smooth->add_option("--name", sm.name, "Covariate name stored in the header");
    smooth->add_option("--out", sm.out, "Output stem: writes <stem>.csv, <stem>.json, <stem>.bin")->required();

    try {
        auto args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }

    try {
        if (*simulate) return cmd_simulate(sim, out, err);
        if (*fitc) return cmd_fit(fit, out, err);
        if (*predict) return cmd_predict(pred, out);
        if (*study) return cmd_study(st, out);
        if (*scheme) return cmd_scheme(sch, out, err);
        if (*smooth) return cmd_smooth(sm, out);
    } catch (const NotConverged&) {
        err << "error: IRLS did not converge within the iteration limit; partial results written\n";
        return kNotConverged;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

}  // namespace stpp::cli
