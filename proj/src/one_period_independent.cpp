#include <cmath>

#include "lowdefault/distributions.hpp"
#include "lowdefault/errors.hpp"
#include "lowdefault/one_period.hpp"

namespace lowdefault {

PortfolioObservation::PortfolioObservation(int n_, int k_) : n(n_), k(k_)
{
    if (n <= 0)
        throw ValidationError("pool size must be positive");
    if (k < 0 || k >= n)
        throw ValidationError("defaults must satisfy 0 <= k < n");
}

ConfidenceLevel::ConfidenceLevel(double gamma_) : gamma(gamma_)
{
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError("confidence level must lie in (0,1)");
}

PriorConstraint::PriorConstraint(double u_) : u(u_)
{
    if (!(u > 0.0 && u <= 1.0))
        throw DomainError("prior constraint u must lie in (0,1]");
}

double naive_estimate(const PortfolioObservation& obs)
{
    return static_cast<double>(obs.k) / obs.n;
}

double ucb_independent(const PortfolioObservation& obs, ConfidenceLevel level)
{
    return beta_quantile(BetaParams(obs.k + 1.0, obs.n - obs.k), level.gamma);
}

double conservative_bayes_independent(const PortfolioObservation& obs)
{
    return (obs.k + 1.0) / (obs.n + 1.0);
}

double neutral_bayes_independent(const PortfolioObservation& obs, PriorConstraint constraint)
{
    const double k = obs.k;
    const double n = obs.n;
    if (constraint.u == 1.0)
        return (k + 1.0) / (n + 2.0);
    const double numerator = beta_cdf(BetaParams(k + 2.0, n - k + 1.0), constraint.u);
    const double denominator = beta_cdf(BetaParams(k + 1.0, n - k + 1.0), constraint.u);
    return (k + 1.0) * numerator / ((n + 2.0) * denominator);
}

double posterior_cdf_conservative(const PortfolioObservation& obs, double lambda)
{
    return beta_cdf(BetaParams(obs.k + 1.0, obs.n - obs.k), lambda);
}

double posterior_density_uniform(const PortfolioObservation& obs, PriorConstraint constraint,
                                 double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw DomainError("posterior density: lambda must lie in [0,1]");
    if (lambda > constraint.u)
        return 0.0;
    const BetaParams posterior(obs.k + 1.0, obs.n - obs.k + 1.0);
    return beta_pdf(posterior, lambda) / beta_cdf(posterior, constraint.u);
}

}  // namespace lowdefault
