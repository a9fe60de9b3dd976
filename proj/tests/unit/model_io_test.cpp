#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "stpp/error.hpp"
#include "stpp/io.hpp"
#include "stpp/model_io.hpp"
#include "stpp/simulate.hpp"
#include "stpp/terms.hpp"
#include "temp_dir.hpp"

using namespace stpp;

namespace {

void expect_same_predictions(const FittedModel& a, const FittedModel& b) {
    oracle::Sampler s(3);
    for (int i = 0; i < 50; ++i) {
        const auto p = s.point(a.window());
        if (a.is_marked()) {
            for (std::size_t m = 0; m < a.levels().size(); ++m)
                EXPECT_EQ(predict_intensity_at_level(a, p, m), predict_intensity_at_level(b, p, m));
        } else {
            EXPECT_EQ(predict_intensity(a, p), predict_intensity(b, p));
        }
    }
}

}  // namespace

TEST(ModelIo, UnmarkedRoundTrip) {
    const auto dir = testing_support::scratch_dir("model_io_unmarked");
    const auto pattern =
        simulate_inhomogeneous(Window::unit(), LogLinearIntensity::parse("4 + 1.2*x - 0.8*t"), {3, std::exp(5.2)});
    const auto model = fit_stpp(pattern, ModelSpec{parse_terms("1,x,t,x*t"), std::nullopt, 0.0}, {7, 7, 7});
    save_model(model, dir / "m.json");
    const auto back = load_model(dir / "m.json");
    EXPECT_EQ(back.fit().coefficients, model.fit().coefficients);
    EXPECT_EQ(back.fit().covariance, model.fit().covariance);
    EXPECT_EQ(back.fit().deviance, model.fit().deviance);
    EXPECT_EQ(back.scheme().n_dummy, 343u);
    expect_same_predictions(model, back);

    // Saving the reloaded model reproduces the file byte for byte.
    save_model(back, dir / "m2.json");
    EXPECT_EQ(io::read_file(dir / "m.json"), io::read_file(dir / "m2.json"));

    const auto doc = nlohmann::json::parse(io::read_file(dir / "m.json"));
    EXPECT_EQ(doc["schema_version"], kModelSchemaVersion);
    EXPECT_EQ(doc["coefficients"][3]["name"], "x*t");
    EXPECT_TRUE(doc["coefficients"][0].contains("std_error"));
    EXPECT_TRUE(doc["convergence"]["converged"].get<bool>());
}

TEST(ModelIo, MarkedWithExternalCovariate) {
    const auto dir = testing_support::scratch_dir("model_io_marked");
    oracle::Sampler s(5);
    std::vector<double> values(27);
    for (auto& v : values) v = s.uniform(-1, 1);
    auto grid = std::make_shared<const CovariateGrid>(Window::unit(), GridResolution(3, 3, 3), values);
    std::vector<std::string> labels;
    const auto pts = s.points(Window::unit(), 80);
    for (std::size_t i = 0; i < pts.size(); ++i) labels.push_back(i % 3 ? "oak" : "pine");
    const auto pattern = MarkedPointPattern::from_labels(Window::unit(), pts, labels);
    ModelSpec spec{{Intercept{}, ExternalCovariate{grid, "soil"}}, MarkFixedEffects{false}, 0.5};
    const auto model = fit_multitype(pattern, spec, {4, 4, 4});
    save_model(model, dir / "m.json");
    const auto back = load_model(dir / "m.json");
    EXPECT_EQ(back.levels(), model.levels());
    EXPECT_EQ(back.fit().coefficients, model.fit().coefficients);
    EXPECT_EQ(back.spec().ridge_on_marks, 0.5);
    expect_same_predictions(model, back);
    EXPECT_TRUE(std::filesystem::exists(dir / "m.soil.grid.bin"));
}

TEST(ModelIo, SchemaMismatchRejected) {
    const auto dir = testing_support::scratch_dir("model_io_schema");
    io::write_file(dir / "bad.json", R"({"schema": "stpp-fitted-model", "schema_version": 99})");
    EXPECT_THROW(load_model(dir / "bad.json"), ParseError);
    io::write_file(dir / "junk.json", "not json");
    EXPECT_THROW(load_model(dir / "junk.json"), ParseError);
    EXPECT_THROW(load_model(dir / "missing.json"), IoError);
}
