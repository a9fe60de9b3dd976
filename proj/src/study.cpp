#include "stpp/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

#include "stpp/error.hpp"
#include "stpp/model.hpp"
#include "stpp/simulate.hpp"
#include "stpp/text.hpp"

namespace stpp {

namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers.
template <class Job>
void parallel_for(std::size_t n, unsigned threads, Job job) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) job(i);
        });
    for (auto& t : pool) t.join();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

StudyReport run_convergence_study(const StudyConfig& cfg) {
    if (cfg.seeds.empty()) throw InvalidArgument("convergence study needs at least one seed");
    if (cfg.ladder.empty()) throw InvalidArgument("convergence study needs at least one resolution");
    for (auto n : cfg.ladder)
        if (n == 0) throw InvalidArgument("resolution ladder entries must be >= 1");

    auto seeds = cfg.seeds;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    auto ladder = cfg.ladder;
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

    ModelSpec spec{cfg.truth.model_terms(), std::nullopt, 0.0};
    spec.validate();

    StudyReport report;
    for (const auto& c : unmarked_columns(spec)) report.coefficient_names.push_back(c.name);
    report.truth = cfg.truth.model_coefficients();
    const PointFunction truth = [&](const SpaceTimePoint& p) { return cfg.truth(p); };
    report.reference_integral = reference_integral(cfg.window, truth);

    std::vector<std::optional<PointPattern>> patterns(seeds.size());
    std::vector<std::string> sim_errors(seeds.size());
    parallel_for(seeds.size(), cfg.threads, [&](std::size_t s) {
        try {
            patterns[s] = simulate_inhomogeneous(cfg.window, truth, {seeds[s], cfg.lambda_max});
        } catch (const std::exception& e) {
            sim_errors[s] = std::string("simulation failed: ") + e.what();
        }
    });

    std::vector<double> integral_error(ladder.size());
    for (std::size_t r = 0; r < ladder.size(); ++r) {
        const GridResolution res(ladder[r], ladder[r], ladder[r]);
        const double approx = approximate_integral(build_dummy_scheme(cfg.window, res), truth);
        integral_error[r] = std::abs(approx - report.reference_integral) / report.reference_integral;
    }

    const std::size_t p = report.truth.size();
    report.cells.resize(seeds.size() * ladder.size());
    parallel_for(report.cells.size(), cfg.threads, [&](std::size_t i) {
        const std::size_t s = i / ladder.size();
        const std::size_t r = i % ladder.size();
        auto& cell = report.cells[i];
        cell.seed = seeds[s];
        cell.per_axis = ladder[r];
        cell.dummies = ladder[r] * ladder[r] * ladder[r];
        cell.integral_rel_error = integral_error[r];
        cell.estimates.assign(p, kNaN);
        cell.errors.assign(p, kNaN);
        cell.discretization.assign(p, kNaN);
        if (!patterns[s]) {
            cell.status = sim_errors[s];
            return;
        }
        cell.n_points = patterns[s]->size();
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto model =
                fit_stpp(*patterns[s], spec, GridResolution(ladder[r], ladder[r], ladder[r]), cfg.irls);
            cell.converged = model.fit().converged;
            cell.iterations = model.fit().iterations;
            for (std::size_t j = 0; j < p; ++j) {
                cell.estimates[j] = model.fit().coefficients[static_cast<Eigen::Index>(j)];
                cell.errors[j] = cell.estimates[j] - report.truth[j];
            }
            if (!cell.converged) cell.status = "not converged";
        } catch (const std::exception& e) {
            cell.status = e.what();
        }
        cell.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    });

    for (std::size_t s = 0; s < seeds.size(); ++s) {
        const auto& finest = report.cells[s * ladder.size() + ladder.size() - 1];
        if (!finest.ok()) continue;
        for (std::size_t r = 0; r < ladder.size(); ++r) {
            auto& cell = report.cells[s * ladder.size() + r];
            if (!cell.ok()) continue;
            for (std::size_t j = 0; j < p; ++j) cell.discretization[j] = cell.estimates[j] - finest.estimates[j];
        }
    }

    for (std::size_t r = 0; r < ladder.size(); ++r) {
        StudySummaryRow row;
        row.per_axis = ladder[r];
        row.integral_rel_error = integral_error[r];
        row.bias.assign(p, 0.0);
        row.rmse.assign(p, 0.0);
        double sq_all = 0.0, sq_disc = 0.0;
        std::size_t n_disc = 0;
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            const auto& cell = report.cells[s * ladder.size() + r];
            if (!cell.ok()) {
                ++row.failed;
                continue;
            }
            ++row.fits;
            for (std::size_t j = 0; j < p; ++j) {
                row.bias[j] += cell.errors[j];
                row.rmse[j] += cell.errors[j] * cell.errors[j];
                sq_all += cell.errors[j] * cell.errors[j];
                if (std::isfinite(cell.discretization[j])) {
                    sq_disc += cell.discretization[j] * cell.discretization[j];
                    ++n_disc;
                }
            }
        }
        if (row.fits == 0) {
            std::fill(row.bias.begin(), row.bias.end(), kNaN);
            std::fill(row.rmse.begin(), row.rmse.end(), kNaN);
            row.rmse_all = kNaN;
        } else {
            const auto n = static_cast<double>(row.fits);
            for (std::size_t j = 0; j < p; ++j) {
                row.bias[j] /= n;
                row.rmse[j] = std::sqrt(row.rmse[j] / n);
            }
            row.rmse_all = std::sqrt(sq_all / (n * static_cast<double>(p)));
        }
        row.disc_rmse = n_disc ? std::sqrt(sq_disc / static_cast<double>(n_disc)) : kNaN;
        report.summary.push_back(std::move(row));
    }
    return report;
}

namespace {

std::string csv_field(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

void write_values(std::ostream& os, const std::vector<double>& v) {
    for (double x : v) os << ',' << text::format_double(x);
}

void write_names(std::ostream& os, const std::string& prefix, const std::vector<std::string>& names) {
    for (const auto& n : names) os << ',' << prefix << n;
}

}  // namespace

void write_study_csv(std::ostream& os, const StudyReport& report) {
    os << "seed,n_per_axis,dummies,status,n_points,converged,iterations";
    write_names(os, "est_", report.coefficient_names);
    write_names(os, "err_", report.coefficient_names);
    write_names(os, "disc_", report.coefficient_names);
    os << ",max_abs_err,integral_rel_error\n";
    for (const auto& c : report.cells) {
        double max_abs = c.ok() ? 0.0 : kNaN;
        if (c.ok())
            for (double e : c.errors) max_abs = std::max(max_abs, std::abs(e));
        os << c.seed << ',' << c.per_axis << ',' << c.dummies << ',' << csv_field(c.status) << ',' << c.n_points << ','
           << (c.converged ? 1 : 0) << ',' << c.iterations;
        write_values(os, c.estimates);
        write_values(os, c.errors);
        write_values(os, c.discretization);
        os << ',' << text::format_double(max_abs) << ',' << text::format_double(c.integral_rel_error) << '\n';
    }
}

void write_study_summary_csv(std::ostream& os, const StudyReport& report) {
    os << "n_per_axis,dummies,fits,failed";
    write_names(os, "bias_", report.coefficient_names);
    write_names(os, "rmse_", report.coefficient_names);
    os << ",rmse,disc_rmse,integral_rel_error\n";
    for (const auto& r : report.summary) {
        os << r.per_axis << ',' << r.per_axis * r.per_axis * r.per_axis << ',' << r.fits << ',' << r.failed;
        write_values(os, r.bias);
        write_values(os, r.rmse);
        os << ',' << text::format_double(r.rmse_all) << ',' << text::format_double(r.disc_rmse) << ','
           << text::format_double(r.integral_rel_error) << '\n';
    }
}

void write_study_timing_csv(std::ostream& os, const StudyReport& report) {
    os << "seed,n_per_axis,wall_ms\n";
    for (const auto& c : report.cells)
        os << c.seed << ',' << c.per_axis << ',' << text::format_double(c.wall_ms) << '\n';
}

}  // namespace stpp
