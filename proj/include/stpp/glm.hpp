#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Weighted Poisson regression with log link, fitted by iteratively
// reweighted least squares (Fisher scoring) with optional ridge penalty.
//
// Maximizes  l(theta) = sum_k w_k (y_k eta_k - exp(eta_k)) + sum_k w_k
//                       - ridge/2 * sum_{j masked} theta_j^2,
// eta = X theta. With cubature weights and responses y_k = e_k / w_k this is
// the cubature approximation of the point-process log-likelihood.
namespace stpp {

struct DesignMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> column_names;

    Eigen::Index rows() const noexcept { return values.rows(); }
    Eigen::Index cols() const noexcept { return values.cols(); }
    // Throws InvalidArgument: non-finite entries, no columns, name mismatch
    // or duplicate names.
    void validate() const;
};

struct IrlsConfig {
    int max_iterations = 100;
    // Relative change of the (penalized) deviance between iterations.
    double tolerance = 1e-10;
    // Converged steps must also move every coefficient by less than this.
    double step_tolerance = 1e-6;
    double ridge = 0.0;
    // One flag per column; empty means no column is penalized.
    std::vector<std::uint8_t> ridge_mask;

    void validate(Eigen::Index columns) const;
};

struct IterationRecord {
    int iteration = 0;
    double deviance = 0.0;            // penalized deviance after the step
    int halvings = 0;
    double max_step = 0.0;
};

struct FitResult {
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd fisher;      // penalized Fisher information at the estimate
    Eigen::MatrixXd covariance;  // fisher^-1
    double deviance = 0.0;
    double log_likelihood_approx = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> trace;

    Eigen::VectorXd standard_errors() const { return covariance.diagonal().cwiseSqrt(); }
};

// Largest admissible |eta| before exp() is deemed to overflow.
inline constexpr double kMaxLinearPredictor = 700.0;

// Throws OverflowError naming the first row with |eta| > 700.
Eigen::VectorXd linear_predictor(const DesignMatrix& X, const Eigen::VectorXd& theta);

double weighted_poisson_loglik(const DesignMatrix& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                               const Eigen::VectorXd& theta);

// Unpenalized weighted Poisson deviance 2 sum w (y log(y/mu) - (y - mu)).
double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& w, const Eigen::VectorXd& mu);

struct ScoreAndFisher {
    Eigen::VectorXd gradient;
    Eigen::MatrixXd fisher;
};

ScoreAndFisher score_and_fisher(const DesignMatrix& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                                const Eigen::VectorXd& theta, const IrlsConfig& cfg);

// Throws RankDeficiencyError (pivoted QR, relative threshold 1e-10) naming
// a dependent column, FitError for all-zero responses or a non-finite
// deviance. Returns converged = false when max_iterations is exhausted.
FitResult fit_irls(const DesignMatrix& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                   const IrlsConfig& cfg = {});

}  // namespace stpp
