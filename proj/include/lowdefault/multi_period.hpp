#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>

#include "lowdefault/one_period.hpp"
#include "lowdefault/time_series.hpp"

namespace lowdefault {

/// Asset correlation rho and time correlation theta of the multi-period
/// one-factor model.
struct CorrelationParams {
    double rho;
    double theta;

    /// Throws DomainError unless 0 <= rho < 1 and 0 <= theta < 1.
    CorrelationParams(double rho, double theta);
};

using FactorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n_iter joint draws of the systemic factors (S_1, ..., S_T), one per row.
struct SystemicFactorSample {
    FactorMatrix draws;
    double theta;
    std::uint64_t seed;

    int iterations() const { return static_cast<int>(draws.rows()); }
    int periods() const { return static_cast<int>(draws.cols()); }
    std::span<const double> row(int i) const
    {
        return {draws.data() + static_cast<std::ptrdiff_t>(i) * draws.cols(),
                static_cast<std::size_t>(draws.cols())};
    }
};

/// Monte-Carlo and grid sizes of one estimation run.
struct GridConfig {
    int m;         ///< outer grid steps; grid points u_i = (i/m) u
    double u;      ///< grid endpoint
    int n_iter;    ///< factor draws per run
    int runs;      ///< independent replications
    std::uint64_t seed;

    /// Throws ValidationError unless m >= 10, 0 < u <= 1, n_iter >= 100, runs >= 1.
    GridConfig(int m, double u, int n_iter, int runs, std::uint64_t seed);
};

struct MLEResult {
    double lambda_hat;
    double rho_hat;
    double theta_hat;
    double log_likelihood;
    bool converged;
};

/// T x T matrix with entries theta^|t - tau|.
Eigen::MatrixXd build_sigma(double theta, int periods);

/// n_iter x T independent standard normals, a pure function of the seed.
FactorMatrix standard_normal_draws(int periods, int n_iter, std::uint64_t seed);

/// Rows of z mapped to N(0, Sigma_theta) through the Cholesky factor.
/// Reusing z across theta gives common random numbers.
SystemicFactorSample correlate_factors(const FactorMatrix& z, double theta, std::uint64_t seed = 0);

SystemicFactorSample sample_systemic_factors(double theta, int periods, int n_iter,
                                             std::uint64_t seed);

/// log P[X_1 = k_1, ..., X_T = k_T | S = factors].
double log_conditional_likelihood(double lambda, double rho, std::span<const double> factors,
                                  const DefaultTimeSeries& data);
double conditional_likelihood(double lambda, double rho, std::span<const double> factors,
                              const DefaultTimeSeries& data);

/// Log of the Monte-Carlo average of the conditional likelihood over the
/// sample rows. Throws ValidationError if the sample's T or theta differ
/// from the data and parameters.
double log_marginal_likelihood(double lambda, const CorrelationParams& params,
                               const DefaultTimeSeries& data, const SystemicFactorSample& sample);
double marginal_likelihood(double lambda, const CorrelationParams& params,
                           const DefaultTimeSeries& data, const SystemicFactorSample& sample);

/// Joint maximum likelihood for (lambda, rho, theta) on fixed draws z.
/// Nelder-Mead on logit coordinates from three starts, compared with the
/// rho = 0 boundary solution. All-zero defaults give lambda_hat = 0.
MLEResult mle_fit(const DefaultTimeSeries& data, const FactorMatrix& z);
/// Draws n_iter rows from config.seed.
MLEResult mle_fit(const DefaultTimeSeries& data, const GridConfig& config);

/// Maximum likelihood for lambda with rho and theta held fixed.
MLEResult mle_fit_lambda(const DefaultTimeSeries& data, const CorrelationParams& params,
                         const SystemicFactorSample& sample);
MLEResult mle_fit_lambda(const DefaultTimeSeries& data, const CorrelationParams& params,
                         const GridConfig& config);

/// Solves 1 - gamma = mean over draws of P[Poisson(I) <= k],
/// I = sum_t n_t G(lambda, rho, s_t), k = total defaults.
/// Throws EstimationError if the root cannot be bracketed.
double ucb_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                 ConfidenceLevel level, const SystemicFactorSample& sample);
double ucb_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                 ConfidenceLevel level, const GridConfig& config);

struct BayesGridEstimates {
    double neutral;       ///< uniform prior, grid i = 0..m
    double conservative;  ///< weight 1/(1-u_i), grid i = 0..m-1
};

/// Both grid-ratio posterior means on u_i = (i/m) u from one pass over the
/// grid. Throws EstimationError if every grid likelihood underflows.
BayesGridEstimates bayes_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                               double u, int m, const SystemicFactorSample& sample);

double conservative_bayes_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                                const GridConfig& grid);
double neutral_bayes_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                           const GridConfig& grid);

}  // namespace lowdefault
