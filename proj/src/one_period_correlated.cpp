#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <array>
#include <vector>

#include "lowdefault/distributions.hpp"
#include "lowdefault/errors.hpp"
#include "lowdefault/one_period.hpp"
#include "lowdefault/quadrature.hpp"

namespace lowdefault {
namespace {

constexpr double kRootLower = 1e-10;
constexpr double kRootUpper = 1.0 - 1e-10;

// Panel boundaries for integration over (0, u): geometric toward 0 where the
// likelihood of a low default count is concentrated, and geometric toward 1
// when u = 1 so the 1/(1-lambda) weight is resolved.
std::vector<double> outer_breakpoints(double u)
{
    std::vector<double> points{0.0};
    for (int exponent = -9; exponent <= -1; ++exponent)
        points.push_back(u * std::pow(10.0, exponent));
    if (u < 1.0) {
        points.push_back(u);
        return points;
    }
    points.push_back(0.5);
    for (int exponent = 1; exponent <= 12; ++exponent)
        points.push_back(1.0 - std::pow(10.0, -exponent));
    points.push_back(1.0);
    return points;
}

// Posterior mean of lambda for a prior density `prior` on (0, u) and the
// correlated binomial likelihood of the observation.
template <class Prior>
double posterior_mean(const CorrelatedObservation& cobs, double u, Prior prior)
{
    const int n = cobs.obs.n;
    const int k = cobs.obs.k;
    const std::vector<double> points = outer_breakpoints(u);

    // One rule for the whole outer integral keeps the integrand smooth in
    // lambda; pick the finest level any panel boundary needs.
    int level = 0;
    for (double lambda : points) {
        if (lambda > 0.0 && lambda < 1.0) {
            level = std::max(level, converged_hermite_level([&](double y) {
                return binomial_pmf(n, g_conditional_pd(lambda, cobs.rho, y), k);
            }));
        }
    }
    const QuadratureRule& rule = gauss_hermite_normal(level);

    const auto [numerator, denominator] = integrate_adaptive<2>(
        [&](double lambda) -> std::array<double, 2> {
            const double weighted =
                corr_binomial_pmf(CorrBinomialParams(n, lambda, cobs.rho), k, rule) * prior(lambda);
            return {lambda * weighted, weighted};
        },
        points, 1e-9);
    if (!(denominator > 0.0))
        throw EstimationError("posterior normalising integral vanished");
    return numerator / denominator;
}

}  // namespace

CorrelatedObservation::CorrelatedObservation(PortfolioObservation obs_, double rho_)
    : obs(obs_), rho(rho_)
{
    if (obs.n <= 1)
        throw ValidationError("correlated model requires more than one borrower");
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("asset correlation must lie in [0,1)");
}

double ucb_correlated(const CorrelatedObservation& cobs, ConfidenceLevel level)
{
    const double target = level.alpha();
    auto residual = [&](double lambda) {
        return corr_binomial_cdf(CorrBinomialParams(cobs.obs.n, lambda, cobs.rho), cobs.obs.k)
               - target;
    };
    const double f_lo = residual(kRootLower);
    const double f_hi = residual(kRootUpper);
    if (f_lo * f_hi > 0.0)
        throw EstimationError("upper confidence bound: root not bracketed");

    std::uintmax_t max_iter = 200;
    boost::math::tools::eps_tolerance<double> tolerance(50);
    const auto [lo, hi] = boost::math::tools::toms748_solve(residual, kRootLower, kRootUpper, f_lo,
                                                           f_hi, tolerance, max_iter);
    return 0.5 * (lo + hi);
}

double conservative_bayes_correlated(const CorrelatedObservation& cobs)
{
    return posterior_mean(cobs, 1.0, [](double lambda) { return 1.0 / (1.0 - lambda); });
}

double neutral_bayes_correlated(const CorrelatedObservation& cobs, PriorConstraint constraint)
{
    return posterior_mean(cobs, constraint.u, [](double) { return 1.0; });
}

}  // namespace lowdefault
