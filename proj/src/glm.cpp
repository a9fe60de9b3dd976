#include "stpp/glm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "stpp/error.hpp"
#include "stpp/text.hpp"

namespace stpp {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr int kMaxHalvings = 50;

void check_problem(const DesignMatrix& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
    X.validate();
    if (y.size() != X.rows() || w.size() != X.rows())
        throw InvalidArgument("design has " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) +
                              " responses and " + std::to_string(w.size()) + " weights");
    for (Eigen::Index k = 0; k < X.rows(); ++k) {
        if (!(w[k] > 0.0) || !std::isfinite(w[k]))
            throw InvalidArgument("weight " + std::to_string(k) + " is not positive and finite");
        if (!(y[k] >= 0.0) || !std::isfinite(y[k]))
            throw InvalidArgument("response " + std::to_string(k) + " is negative or non-finite");
    }
}

Eigen::VectorXd ridge_diagonal(const IrlsConfig& cfg, Eigen::Index p) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(p);
    if (cfg.ridge > 0.0)
        for (Eigen::Index j = 0; j < p && j < static_cast<Eigen::Index>(cfg.ridge_mask.size()); ++j)
            if (cfg.ridge_mask[j]) d[j] = cfg.ridge;
    return d;
}

double penalized_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& w, const Eigen::VectorXd& eta,
                          const Eigen::VectorXd& theta, const Eigen::VectorXd& ridge) {
    return poisson_deviance(y, w, eta.array().exp().matrix()) + (ridge.array() * theta.array().square()).sum();
}

void check_rank(const DesignMatrix& X) {
    Eigen::MatrixXd scaled = X.values;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
        const double norm = scaled.col(j).norm();
        if (norm == 0.0)
            throw RankDeficiencyError("design column '" + X.column_names[j] + "' is identically zero",
                                      X.column_names[j]);
        scaled.col(j) /= norm;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(kRankThreshold);
    const auto rank = qr.rank();
    if (rank < scaled.cols()) {
        const auto& name = X.column_names[qr.colsPermutation().indices()(rank)];
        throw RankDeficiencyError("design matrix is rank deficient (rank " + std::to_string(rank) + " of " +
                                      std::to_string(scaled.cols()) + "): column '" + name +
                                      "' is linearly dependent on the others",
                                  name);
    }
}

// A column equal to one in every row, if any.
Eigen::Index intercept_column(const DesignMatrix& X) {
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        if ((X.values.col(j).array() == 1.0).all()) return j;
    return -1;
}

std::string format_trace(const std::vector<IterationRecord>& trace) {
    std::ostringstream os;
    for (const auto& r : trace)
        os << "\n  iteration " << r.iteration << ": deviance " << text::format_double(r.deviance) << ", halvings "
           << r.halvings << ", max step " << text::format_double(r.max_step);
    return os.str();
}

}  // namespace

void DesignMatrix::validate() const {
    if (values.cols() < 1) throw InvalidArgument("design matrix needs at least one column");
    if (static_cast<Eigen::Index>(column_names.size()) != values.cols())
        throw InvalidArgument("design matrix has " + std::to_string(values.cols()) + " columns but " +
                              std::to_string(column_names.size()) + " names");
    std::set<std::string> seen;
    for (const auto& n : column_names)
        if (!seen.insert(n).second) throw InvalidArgument("duplicate design column name '" + n + "'");
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        for (Eigen::Index k = 0; k < values.rows(); ++k)
            if (!std::isfinite(values(k, j)))
                throw InvalidArgument("non-finite design entry at row " + std::to_string(k) + ", column '" +
                                      column_names[j] + "'");
}

void IrlsConfig::validate(Eigen::Index columns) const {
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
    if (!(tolerance > 0.0)) throw InvalidArgument("IRLS tolerance must be positive");
    if (!(step_tolerance > 0.0)) throw InvalidArgument("IRLS step tolerance must be positive");
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InvalidArgument("ridge penalty must be nonnegative");
    if (!ridge_mask.empty() && static_cast<Eigen::Index>(ridge_mask.size()) != columns)
        throw InvalidArgument("ridge mask length does not match the number of columns");
}

Eigen::VectorXd linear_predictor(const DesignMatrix& X, const Eigen::VectorXd& theta) {
    if (theta.size() != X.cols())
        throw InvalidArgument("coefficient vector has length " + std::to_string(theta.size()) + ", expected " +
                              std::to_string(X.cols()));
    Eigen::VectorXd eta = X.values * theta;
    for (Eigen::Index k = 0; k < eta.size(); ++k) {
        if (!(std::abs(eta[k]) <= kMaxLinearPredictor))
            throw OverflowError("linear predictor " + text::format_double(eta[k]) + " at row " + std::to_string(k) +
                                    " exceeds the admissible range +-700",
                                static_cast<std::size_t>(k), eta[k]);
    }
    return eta;
}

double weighted_poisson_loglik(const DesignMatrix& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                               const Eigen::VectorXd& theta) {
    check_problem(X, y, w);
    const Eigen::VectorXd eta = linear_predictor(X, theta);
    double ll = 0.0;
    for (Eigen::Index k = 0; k < eta.size(); ++k) {
        const double fit = y[k] == 0.0 ? 0.0 : y[k] * eta[k];
        ll += w[k] * (fit - std::exp(eta[k])) + w[k];
    }
    return ll;
}

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& w, const Eigen::VectorXd& mu) {
    double d = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        const double term = y[k] > 0.0 ? y[k] * std::log(y[k] / mu[k]) - (y[k] - mu[k]) : mu[k];
        d += w[k] * term;
    }
    return 2.0 * d;
}

ScoreAndFisher score_and_fisher(const DesignMatrix& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                                const Eigen::VectorXd& theta, const IrlsConfig& cfg) {
    check_problem(X, y, w);
    cfg.validate(X.cols());
    const Eigen::VectorXd mu = linear_predictor(X, theta).array().exp().matrix();
    const Eigen::VectorXd ridge = ridge_diagonal(cfg, X.cols());
    ScoreAndFisher out;
    out.gradient = X.values.transpose() * (w.array() * (y - mu).array()).matrix();
    out.gradient -= (ridge.array() * theta.array()).matrix();
    const Eigen::VectorXd wmu = (w.array() * mu.array()).matrix();
    out.fisher = X.values.transpose() * wmu.asDiagonal() * X.values;
    out.fisher.diagonal() += ridge;
    return out;
}

FitResult fit_irls(const DesignMatrix& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w, const IrlsConfig& cfg) {
    check_problem(X, y, w);
    cfg.validate(X.cols());
    check_rank(X);

    const double wy = (w.array() * y.array()).sum();
    if (!(wy > 0.0))
        throw FitError("empty pattern: every response is zero, so the maximum likelihood estimate does not exist");

    const Eigen::Index p = X.cols();
    const Eigen::VectorXd ridge = ridge_diagonal(cfg, p);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
    if (const auto j0 = intercept_column(X); j0 >= 0) theta[j0] = std::log(wy / w.sum());

    FitResult result;
    double dev = penalized_deviance(y, w, linear_predictor(X, theta), theta, ridge);
    if (!std::isfinite(dev)) throw FitError("non-finite deviance at the starting point");

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        const auto sf = score_and_fisher(X, y, w, theta, cfg);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(sf.fisher);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            throw FitError("Fisher information is not positive definite at iteration " + std::to_string(iter) +
                           format_trace(result.trace));
        const Eigen::VectorXd delta = ldlt.solve(sf.gradient);
        if (!delta.allFinite())
            throw FitError("non-finite IRLS step at iteration " + std::to_string(iter) + format_trace(result.trace));

        const double slack = 1e-12 * std::max(1.0, std::abs(dev));
        double scale = 1.0;
        int halvings = 0;
        bool accepted = false;
        Eigen::VectorXd trial;
        double trial_dev = 0.0;
        for (; halvings <= kMaxHalvings; ++halvings, scale *= 0.5) {
            trial = theta + scale * delta;
            try {
                trial_dev = penalized_deviance(y, w, linear_predictor(X, trial), trial, ridge);
            } catch (const OverflowError&) {
                continue;
            }
            if (std::isfinite(trial_dev) && trial_dev <= dev + slack) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No step improves on the current point: it is a numerical optimum
            // unless the Newton step itself is still large.
            result.iterations = iter;
            result.converged = delta.cwiseAbs().maxCoeff() <= cfg.step_tolerance;
            if (!result.converged && !std::isfinite(dev))
                throw FitError("deviance diverged" + format_trace(result.trace));
            break;
        }

        const double max_step = (scale * delta).cwiseAbs().maxCoeff();
        const double rel = std::abs(dev - trial_dev) / (std::abs(trial_dev) + 0.1);
        theta = trial;
        dev = trial_dev;
        result.trace.push_back({iter, dev, halvings, max_step});
        result.iterations = iter;
        if (!std::isfinite(dev)) throw FitError("deviance diverged" + format_trace(result.trace));
        if (rel < cfg.tolerance && max_step < cfg.step_tolerance) {
            result.converged = true;
            break;
        }
    }

    const auto sf = score_and_fisher(X, y, w, theta, cfg);
    result.coefficients = theta;
    result.fisher = sf.fisher;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sf.fisher);
    result.covariance = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
    result.covariance = 0.5 * (result.covariance + result.covariance.transpose()).eval();
    const Eigen::VectorXd eta = linear_predictor(X, theta);
    result.deviance = poisson_deviance(y, w, eta.array().exp().matrix());
    result.log_likelihood_approx = weighted_poisson_loglik(X, y, w, theta);
    return result;
}

}  // namespace stpp
