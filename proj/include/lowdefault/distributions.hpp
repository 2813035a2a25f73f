#pragma once

#include <vector>

namespace lowdefault {

struct QuadratureRule;

/// Shape parameters of a Beta distribution.
struct BetaParams {
    double alpha;
    double beta;

    /// Throws DomainError unless both shapes are strictly positive.
    BetaParams(double alpha, double beta);
};

/// Size, unconditional PD and asset correlation of a one-factor
/// (Vasicek) correlated binomial distribution.
struct CorrBinomialParams {
    int n;
    double lambda;
    double rho;

    /// Throws DomainError unless n >= 1, 0 < lambda < 1 and 0 <= rho < 1.
    CorrBinomialParams(int n, double lambda, double rho);
};

struct MeanVariance {
    double mean;
    double variance;
};

// Standard normal.
double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// Inverse of std_normal_cdf. Throws DomainError for p outside (0,1).
double std_normal_quantile(double p);

/// P[X <= x, Y <= y] for standard normal marginals with correlation rho.
/// Drezner-Wesolowsky integral with Genz's transformation for |rho| near 1.
/// Throws DomainError for |rho| >= 1.
double bivariate_normal_cdf(double x, double y, double rho);

/// Regularized incomplete beta ratio I_x(alpha, beta).
double beta_cdf(const BetaParams& params, double x);
double beta_pdf(const BetaParams& params, double x);
/// Smallest y with beta_cdf(params, y) >= p, by safeguarded Newton/bisection.
double beta_quantile(const BetaParams& params, double p);

double log_binomial_coefficient(int n, int k);
/// P[X = k] for X ~ Binomial(n, p), p in [0,1]. Zero outside 0..n.
double binomial_pmf(int n, double p, int k);
/// P[X <= k] for X ~ Binomial(n, p). k < 0 gives 0, k >= n gives 1.
/// Direct summation for n <= 100, incomplete beta identity above.
double binomial_cdf(int n, double p, int k);

/// Point-in-time PD given systemic factor realisation y:
/// Phi((Phi^-1(lambda) - sqrt(rho) y) / sqrt(1 - rho)).
double g_conditional_pd(double lambda, double rho, double y);

/// Log of the conditional PD and of its complement, evaluated without
/// cancellation in either tail.
struct ConditionalPdLogs {
    double log_pd;
    double log_survival;
};

/// g_conditional_pd with lambda and rho fixed, for evaluation over many
/// factor values. lambda = 0 is allowed and yields a PD of exactly zero.
class ConditionalPdCurve {
public:
    ConditionalPdCurve(double lambda, double rho);

    double pd(double y) const;
    ConditionalPdLogs logs(double y) const;
    /// logs(y).log_survival alone.
    double log_survival(double y) const;

private:
    bool zero_;
    double threshold_;
    double loading_;
    double scale_;
};

/// P[X <= k] for the correlated binomial distribution, integrating the
/// conditional binomial law over the standard normal systemic factor.
/// Throws DomainError for k outside [0, n].
double corr_binomial_cdf(const CorrBinomialParams& params, int k);
/// P[X = k]; zero outside [0, n].
double corr_binomial_pmf(const CorrBinomialParams& params, int k);
/// P[X = k] on a fixed quadrature rule, so the result is smooth in lambda.
double corr_binomial_pmf(const CorrBinomialParams& params, int k, const QuadratureRule& rule);
/// Full probability mass function over k = 0..n.
std::vector<double> corr_binomial_distribution(const CorrBinomialParams& params);
MeanVariance corr_binomial_mean_var(const CorrBinomialParams& params);

}  // namespace lowdefault
