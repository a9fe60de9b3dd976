#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stpp/glm.hpp"
#include "stpp/terms.hpp"

namespace stpp {

// Dummy-count convergence study: simulate one pattern per seed from a
// log-linear truth, refit it on a ladder of grid resolutions (n cells per
// axis) with the model terms of the truth, and record estimation and
// integration errors.
struct StudyConfig {
    Window window = Window::unit();
    LogLinearIntensity truth;
    double lambda_max = 1.0;
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> ladder;
    IrlsConfig irls;
    unsigned threads = 1;
};

struct StudyCell {
    std::uint64_t seed = 0;
    std::size_t per_axis = 0;
    std::size_t dummies = 0;
    std::string status = "ok";  // "ok" or the error message
    std::size_t n_points = 0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> estimates;
    std::vector<double> errors;          // estimate - truth
    std::vector<double> discretization;  // estimate - same-seed estimate at the finest rung
    double integral_rel_error = 0.0;     // cubature vs reference integral of the truth
    double wall_ms = 0.0;

    bool ok() const { return status == "ok"; }
};

struct StudySummaryRow {
    std::size_t per_axis = 0;
    std::size_t fits = 0;
    std::size_t failed = 0;
    std::vector<double> bias;
    std::vector<double> rmse;
    double rmse_all = 0.0;
    double disc_rmse = 0.0;
    double integral_rel_error = 0.0;
};

struct StudyReport {
    std::vector<std::string> coefficient_names;
    std::vector<double> truth;
    double reference_integral = 0.0;
    std::vector<StudyCell> cells;  // sorted by (seed, per_axis)
    std::vector<StudySummaryRow> summary;  // sorted by per_axis
};

// Throws InvalidArgument for an empty seed list or ladder. Failures of
// individual cells are recorded in their status.
StudyReport run_convergence_study(const StudyConfig& cfg);

void write_study_csv(std::ostream& os, const StudyReport& report);
void write_study_summary_csv(std::ostream& os, const StudyReport& report);
void write_study_timing_csv(std::ostream& os, const StudyReport& report);

}  // namespace stpp
