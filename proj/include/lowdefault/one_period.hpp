#pragma once

namespace lowdefault {

/// Pool size at the start of one observation period and the number of
/// defaults observed by its end.
struct PortfolioObservation {
    int n;
    int k;

    /// Throws ValidationError unless n > 0 and 0 <= k < n.
    PortfolioObservation(int n, int k);
};

/// Confidence level gamma of an upper confidence bound; alpha = 1 - gamma.
struct ConfidenceLevel {
    double gamma;

    /// Throws DomainError unless 0 < gamma < 1.
    explicit ConfidenceLevel(double gamma);
    double alpha() const { return 1.0 - gamma; }
};

/// Upper end u of the support (0, u) of a uniform prior for the PD.
struct PriorConstraint {
    double u;

    /// Throws DomainError unless 0 < u <= 1.
    explicit PriorConstraint(double u);
};

/// A one-period observation together with the asset correlation of the
/// one-factor model.
struct CorrelatedObservation {
    PortfolioObservation obs;
    double rho;

    /// Throws ValidationError unless n > 1, DomainError unless 0 <= rho < 1.
    CorrelatedObservation(PortfolioObservation obs, double rho);
};

// Independent defaults.

double naive_estimate(const PortfolioObservation& obs);

/// Least lambda0 with P_lambda0[X <= k] > 1 - gamma, i.e. the
/// gamma-quantile of Beta(k+1, n-k).
double ucb_independent(const PortfolioObservation& obs, ConfidenceLevel level);

/// Posterior mean under the prior with density 1/(1-lambda): (k+1)/(n+1).
double conservative_bayes_independent(const PortfolioObservation& obs);

/// Posterior mean under the uniform prior on (0, u):
/// (k+1) I_u(k+2, n-k+1) / ((n+2) I_u(k+1, n-k+1)). Equals (k+1)/(n+2) at u = 1.
double neutral_bayes_independent(const PortfolioObservation& obs, PriorConstraint constraint);

/// Posterior distribution function of the PD under the conservative prior,
/// i.e. the Beta(k+1, n-k) distribution function.
double posterior_cdf_conservative(const PortfolioObservation& obs, double lambda);

/// Posterior density under the uniform prior on (0, u): the Beta(k+1, n-k+1)
/// density truncated to (0, u) and renormalised.
double posterior_density_uniform(const PortfolioObservation& obs, PriorConstraint constraint,
                                 double lambda);

// One-factor correlated defaults.

/// Solves corr_binomial_cdf(n, lambda, rho, k) = 1 - gamma for lambda.
/// Throws EstimationError if the root cannot be bracketed.
double ucb_correlated(const CorrelatedObservation& cobs, ConfidenceLevel level);

/// Posterior mean under the conservative prior:
/// int lambda P_lambda[X=k]/(1-lambda) / int P_lambda[X=k]/(1-lambda) over (0,1).
double conservative_bayes_correlated(const CorrelatedObservation& cobs);

/// Posterior mean under the uniform prior on (0, u):
/// int_0^u lambda P_lambda[X=k] / int_0^u P_lambda[X=k].
double neutral_bayes_correlated(const CorrelatedObservation& cobs, PriorConstraint constraint);

}  // namespace lowdefault
