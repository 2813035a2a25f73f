#include "lowdefault/distributions.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lowdefault/errors.hpp"
#include "lowdefault/quadrature.hpp"

namespace lowdefault {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log Phi(x) for x <= 0, switching to the asymptotic Mills-ratio expansion
// where Phi(x) is no longer representable.
double log_normal_lower_tail(double x)
{
    if (x > -30.0)
        return std::log(std_normal_cdf(x));
    const double x2 = x * x;
    const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

// Probability that X > dh and Y > dk for a standard bivariate normal with
// correlation r (Genz 2004, "Numerical computation of rectangular bivariate
// and trivariate normal and t probabilities").
double bivariate_upper(double dh, double dk, double r)
{
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& abscissa = Rule::abscissa();
    const auto& weights = Rule::weights();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    double h = dh;
    double k = dk;
    double hk = h * k;
    double bvn = 0.0;

    if (std::abs(r) < 0.925) {
        const double hs = 0.5 * (h * h + k * k);
        const double asr = 0.5 * std::asin(r);
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            for (double x : {1.0 - abscissa[i], 1.0 + abscissa[i]}) {
                const double sn = std::sin(asr * x);
                bvn += weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        return bvn * asr / two_pi + std_normal_cdf(-h) * std_normal_cdf(-k);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (std::abs(r) < 1.0) {
        const double as = 1.0 - r * r;
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 80.0;
        double asr = -0.5 * (bs / as + hk);
        if (asr > -100.0)
            bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
        if (hk > -100.0) {
            const double b = std::sqrt(bs);
            const double sp = std::sqrt(two_pi) * std_normal_cdf(-b / a);
            bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a *= 0.5;
        double sum = 0.0;
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            for (double x : {1.0 - abscissa[i], 1.0 + abscissa[i]}) {
                const double xs = (a * x) * (a * x);
                asr = -0.5 * (bs / xs + hk);
                if (asr <= -100.0)
                    continue;
                const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                const double rs = std::sqrt(1.0 - xs);
                const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
                sum += weights[i] * std::exp(asr) * (sp - ep);
            }
        }
        bvn = (a * sum - bvn) / two_pi;
    }
    if (r > 0.0)
        return bvn + std_normal_cdf(-std::max(h, k));
    if (h >= k)
        return -bvn;
    const double lower = h < 0.0 ? std_normal_cdf(k) - std_normal_cdf(h)
                                 : std_normal_cdf(-h) - std_normal_cdf(-k);
    return lower - bvn;
}

double log_binomial_term(int n, int k, double log_p, double log_q)
{
    double value = log_binomial_coefficient(n, k);
    if (k > 0)
        value += k * log_p;
    if (n - k > 0)
        value += (n - k) * log_q;
    return value;
}

}  // namespace

BetaParams::BetaParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_)
{
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw DomainError("Beta shape parameters must be positive and finite");
}

CorrBinomialParams::CorrBinomialParams(int n_, double lambda_, double rho_)
    : n(n_), lambda(lambda_), rho(rho_)
{
    if (n < 1)
        throw DomainError("correlated binomial: n must be at least 1");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw DomainError("correlated binomial: lambda must lie in (0,1)");
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("correlated binomial: rho must lie in [0,1)");
}

double std_normal_pdf(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("std_normal_quantile: p must lie in (0,1)");
    if (p < 0.5)
        return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
}

double bivariate_normal_cdf(double x, double y, double rho)
{
    if (!(std::abs(rho) < 1.0))
        throw DomainError("bivariate_normal_cdf: |rho| must be below 1");
    if (rho == 0.0)
        return std_normal_cdf(x) * std_normal_cdf(y);
    return std::clamp(bivariate_upper(-x, -y, rho), 0.0, 1.0);
}

double beta_cdf(const BetaParams& params, double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("beta_cdf: x must lie in [0,1]");
    return boost::math::ibeta(params.alpha, params.beta, x);
}

double beta_pdf(const BetaParams& params, double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("beta_pdf: x must lie in [0,1]");
    return boost::math::ibeta_derivative(params.alpha, params.beta, x);
}

double beta_quantile(const BetaParams& params, double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("beta_quantile: p must lie in (0,1)");

    double lo = 0.0;
    double hi = 1.0;
    double x = params.alpha / (params.alpha + params.beta);
    for (int iter = 0; iter < 400; ++iter) {
        const double f = beta_cdf(params, x) - p;
        if (f == 0.0)
            return x;
        if (f < 0.0)
            lo = x;
        else
            hi = x;
        const double density = beta_pdf(params, x);
        double next = density > 0.0 ? x - f / density : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x
            || hi - lo <= std::numeric_limits<double>::min())
            return next;
        x = next;
    }
    return x;
}

double log_binomial_coefficient(int n, int k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(int n, double p, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    if (p <= 0.0)
        return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0)
        return k == n ? 1.0 : 0.0;
    return std::exp(log_binomial_term(n, k, std::log(p), std::log1p(-p)));
}

double binomial_cdf(int n, double p, int k)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("binomial_cdf: p must lie in [0,1]");
    if (k < 0)
        return 0.0;
    if (k >= n)
        return 1.0;
    if (p == 0.0)
        return 1.0;
    if (p == 1.0)
        return 0.0;
    if (n <= 100) {
        const double log_p = std::log(p);
        const double log_q = std::log1p(-p);
        double sum = 0.0;
        for (int i = 0; i <= k; ++i)
            sum += std::exp(log_binomial_term(n, i, log_p, log_q));
        return std::min(sum, 1.0);
    }
    return boost::math::ibetac(k + 1.0, static_cast<double>(n - k), p);
}

double g_conditional_pd(double lambda, double rho, double y)
{
    return ConditionalPdCurve(lambda, rho).pd(y);
}

ConditionalPdCurve::ConditionalPdCurve(double lambda, double rho)
{
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw DomainError("conditional PD: lambda must lie in [0,1)");
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("conditional PD: rho must lie in [0,1)");
    zero_ = lambda == 0.0;
    threshold_ = zero_ ? -kInf : std_normal_quantile(lambda);
    loading_ = std::sqrt(rho);
    scale_ = 1.0 / std::sqrt(1.0 - rho);
}

double ConditionalPdCurve::pd(double y) const
{
    if (zero_)
        return 0.0;
    return std_normal_cdf((threshold_ - loading_ * y) * scale_);
}

ConditionalPdLogs ConditionalPdCurve::logs(double y) const
{
    if (zero_)
        return {-kInf, 0.0};
    const double x = (threshold_ - loading_ * y) * scale_;
    if (x <= 0.0)
        return {log_normal_lower_tail(x), std::log1p(-std_normal_cdf(x))};
    return {std::log1p(-std_normal_cdf(-x)), log_normal_lower_tail(-x)};
}

double ConditionalPdCurve::log_survival(double y) const
{
    if (zero_)
        return 0.0;
    const double x = (threshold_ - loading_ * y) * scale_;
    if (x <= 0.0)
        return std::log1p(-std_normal_cdf(x));
    return log_normal_lower_tail(-x);
}

double corr_binomial_cdf(const CorrBinomialParams& params, int k)
{
    if (k < 0 || k > params.n)
        throw DomainError("corr_binomial_cdf: k must lie in [0, n]");
    if (k == params.n)
        return 1.0;
    if (params.rho == 0.0)
        return binomial_cdf(params.n, params.lambda, k);
    const ConditionalPdCurve curve(params.lambda, params.rho);
    const double value = normal_expectation(
        [&](double y) { return binomial_cdf(params.n, curve.pd(y), k); });
    return std::clamp(value, 0.0, 1.0);
}

namespace {

// Conditional binomial probability of k defaults given the systemic factor.
auto conditional_pmf(const CorrBinomialParams& params, int k)
{
    return [curve = ConditionalPdCurve(params.lambda, params.rho),
            log_choose = log_binomial_coefficient(params.n, k), n = params.n, k](double y) {
        const ConditionalPdLogs g = curve.logs(y);
        double log_term = log_choose;
        if (k > 0)
            log_term += k * g.log_pd;
        if (n - k > 0)
            log_term += (n - k) * g.log_survival;
        return std::exp(log_term);
    };
}

}  // namespace

double corr_binomial_pmf(const CorrBinomialParams& params, int k)
{
    if (k < 0 || k > params.n)
        return 0.0;
    if (params.rho == 0.0)
        return binomial_pmf(params.n, params.lambda, k);
    return normal_expectation(conditional_pmf(params, k));
}

double corr_binomial_pmf(const CorrBinomialParams& params, int k, const QuadratureRule& rule)
{
    if (k < 0 || k > params.n)
        return 0.0;
    if (params.rho == 0.0)
        return binomial_pmf(params.n, params.lambda, k);
    return normal_expectation(rule, conditional_pmf(params, k));
}

std::vector<double> corr_binomial_distribution(const CorrBinomialParams& params)
{
    const int n = params.n;
    std::vector<double> log_choose(n + 1);
    for (int k = 0; k <= n; ++k)
        log_choose[k] = log_binomial_coefficient(n, k);

    const ConditionalPdCurve curve(params.lambda, params.rho);
    auto pmf_at = [&](const QuadratureRule& rule) {
        std::vector<double> pmf(n + 1, 0.0);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            if (rule.weights[i] == 0.0)
                continue;
            const ConditionalPdLogs g = curve.logs(rule.nodes[i]);
            for (int k = 0; k <= n; ++k) {
                double log_term = log_choose[k];
                if (k > 0)
                    log_term += k * g.log_pd;
                if (n - k > 0)
                    log_term += (n - k) * g.log_survival;
                pmf[k] += rule.weights[i] * std::exp(log_term);
            }
        }
        return pmf;
    };

    if (params.rho == 0.0) {
        std::vector<double> pmf(n + 1);
        for (int k = 0; k <= n; ++k)
            pmf[k] = binomial_pmf(n, params.lambda, k);
        return pmf;
    }

    std::vector<double> previous = pmf_at(gauss_hermite_normal(0));
    for (int level = 1; level <= kHermiteMaxLevel; ++level) {
        std::vector<double> current = pmf_at(gauss_hermite_normal(level));
        double max_diff = 0.0;
        for (int k = 0; k <= n; ++k)
            max_diff = std::max(max_diff, std::abs(current[k] - previous[k]));
        previous = std::move(current);
        if (max_diff < 1e-10)
            break;
    }
    return previous;
}

MeanVariance corr_binomial_mean_var(const CorrBinomialParams& params)
{
    const double n = params.n;
    const double lambda = params.lambda;
    const double z = std_normal_quantile(lambda);
    const double joint = bivariate_normal_cdf(z, z, params.rho);
    return {n * lambda, n * (lambda - lambda * lambda) + n * (n - 1.0) * (joint - lambda * lambda)};
}

}  // namespace lowdefault
