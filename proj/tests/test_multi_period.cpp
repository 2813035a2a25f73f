#include <doctest.h>

#include <Eigen/Cholesky>

#include <cmath>
#include <vector>

#include "lowdefault/distributions.hpp"
#include "lowdefault/errors.hpp"
#include "lowdefault/multi_period.hpp"
#include "oracles.hpp"

using namespace lowdefault;

namespace {

DefaultTimeSeries series(std::vector<std::pair<int, int>> rows)
{
    std::vector<YearRecord> records;
    int year = 2000;
    for (auto [n, k] : rows)
        records.push_back({year++, n, k});
    return DefaultTimeSeries(std::move(records));
}

DefaultTimeSeries fictitious()
{
    return series({{125, 0}, {125, 0}, {125, 0}, {125, 0}, {125, 0}, {125, 0}, {125, 0}, {125, 1}});
}

double independent_log_likelihood(double lambda, const DefaultTimeSeries& data)
{
    double total = 0.0;
    for (const YearRecord& r : data.rows())
        total += std::log(oracle::binomial_pmf(r.pool_size, lambda, r.defaults));
    return total;
}

// P[sum_t Binomial(n_t, p_t) <= k] by direct convolution.
double convolution_cdf(const std::vector<int>& pools, const std::vector<double>& pds, int k)
{
    std::vector<double> pmf(k + 1, 0.0);
    pmf[0] = 1.0;
    for (std::size_t t = 0; t < pools.size(); ++t) {
        std::vector<double> next(k + 1, 0.0);
        for (int j = 0; j <= k; ++j)
            for (int d = 0; d <= j && d <= pools[t]; ++d)
                next[j] += pmf[j - d] * oracle::binomial_pmf(pools[t], pds[t], d);
        pmf = next;
    }
    double total = 0.0;
    for (double p : pmf)
        total += p;
    return total;
}

double convolution_ucb(const DefaultTimeSeries& data, double rho, const SystemicFactorSample& sample,
                       double gamma)
{
    std::vector<int> pools;
    for (const YearRecord& r : data.rows())
        pools.push_back(r.pool_size);
    const int k = static_cast<int>(data.total_defaults());
    const auto mean_cdf = [&](double lambda) {
        const double threshold = std_normal_quantile(lambda);
        double total = 0.0;
        std::vector<double> pds(pools.size());
        for (int i = 0; i < sample.iterations(); ++i) {
            const auto row = sample.row(i);
            for (std::size_t t = 0; t < pools.size(); ++t)
                pds[t] = oracle::conditional_pd(threshold, rho, row[t]);
            total += convolution_cdf(pools, pds, k);
        }
        return total / sample.iterations();
    };
    double lo = 1e-8;
    double hi = 0.2;
    for (int i = 0; i < 60; ++i) {
        const double mid = std::sqrt(lo * hi);
        (mean_cdf(mid) > 1.0 - gamma ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(CorrelationParams(-0.1, 0.3), DomainError);
    CHECK_THROWS_AS(CorrelationParams(0.2, 1.0), DomainError);
    CHECK_NOTHROW(CorrelationParams(0.0, 0.0));
    CHECK_THROWS_AS(GridConfig(9, 0.1, 1000, 1, 1), ValidationError);
    CHECK_THROWS_AS(GridConfig(100, 0.0, 1000, 1, 1), ValidationError);
    CHECK_THROWS_AS(GridConfig(100, 0.1, 99, 1, 1), ValidationError);
    CHECK_THROWS_AS(GridConfig(100, 0.1, 1000, 0, 1), ValidationError);

    const DefaultTimeSeries data = fictitious();
    const SystemicFactorSample wrong_length = sample_systemic_factors(0.3, 7, 200, 1);
    const SystemicFactorSample wrong_theta = sample_systemic_factors(0.5, 8, 200, 1);
    CHECK_THROWS_AS(log_marginal_likelihood(0.01, CorrelationParams(0.1, 0.3), data, wrong_length),
                    ValidationError);
    CHECK_THROWS_AS(log_marginal_likelihood(0.01, CorrelationParams(0.1, 0.3), data, wrong_theta),
                    ValidationError);
}

TEST_CASE("time correlation matrix")
{
    const Eigen::MatrixXd sigma = build_sigma(0.5, 3);
    Eigen::MatrixXd expected(3, 3);
    expected << 1.0, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 1.0;
    CHECK((sigma - expected).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(build_sigma(0.0, 4).isIdentity(0.0));
    CHECK(build_sigma(0.7, 1)(0, 0) == 1.0);

    const Eigen::MatrixXd strong = build_sigma(0.99, 21);
    Eigen::LLT<Eigen::MatrixXd> llt(strong);
    CHECK(llt.info() == Eigen::Success);
    const Eigen::MatrixXd l = llt.matrixL();
    CHECK((l * l.transpose() - strong).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("factor draws follow the Cholesky factor")
{
    const FactorMatrix z = standard_normal_draws(21, 50, 3);
    CHECK(z == standard_normal_draws(21, 50, 3));
    CHECK(z != standard_normal_draws(21, 50, 4));
    for (double theta : {0.0, 0.4, 0.99}) {
        const SystemicFactorSample sample = correlate_factors(z, theta, 3);
        const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(build_sigma(theta, 21)).matrixL();
        const Eigen::MatrixXd expected = z * l.transpose();
        CHECK((sample.draws - expected).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(sample.theta == theta);
    }
}

TEST_CASE("factor sample moments")
{
    const double theta = 0.6;
    const int periods = 4;
    const int n = 200000;
    const SystemicFactorSample sample = sample_systemic_factors(theta, periods, n, 11);
    const Eigen::MatrixXd centered = sample.draws.rowwise() - sample.draws.colwise().mean();
    const Eigen::MatrixXd covariance = centered.transpose() * centered / (n - 1.0);
    const Eigen::MatrixXd sigma = build_sigma(theta, periods);
    // Standard error of a sample covariance is at most sqrt(2/n).
    CHECK((covariance - sigma).cwiseAbs().maxCoeff() <= 4.0 * std::sqrt(2.0 / n));
    CHECK(sample.draws.colwise().mean().cwiseAbs().maxCoeff() <= 4.0 / std::sqrt(n));
}

TEST_CASE("conditional likelihood is a product of binomial probabilities")
{
    const DefaultTimeSeries data = series({{3, 1}, {3, 0}});
    const std::vector<double> factors{-0.7, 1.2};
    const double lambda = 0.08;
    const double rho = 0.2;
    const double threshold = std_normal_quantile(lambda);
    const double expected = oracle::binomial_pmf(3, oracle::conditional_pd(threshold, rho, -0.7), 1)
                            * oracle::binomial_pmf(3, oracle::conditional_pd(threshold, rho, 1.2), 0);
    CHECK(conditional_likelihood(lambda, rho, factors, data) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(log_conditional_likelihood(lambda, rho, factors, data)
          == doctest::Approx(std::log(expected)).epsilon(1e-13));
}

TEST_CASE("likelihood over all outcomes of a small portfolio")
{
    const CorrelationParams params(0.25, 0.5);
    const SystemicFactorSample sample = sample_systemic_factors(0.5, 2, 2000, 5);
    double total = 0.0;
    for (int k1 = 0; k1 < 3; ++k1)
        for (int k2 = 0; k2 < 3; ++k2)
            total += marginal_likelihood(0.1, params, series({{3, k1}, {3, k2}}), sample);
    // Outcomes with 3 defaults are excluded by validation; add their mass by
    // enumeration of the conditional law.
    for (int i = 0; i < sample.iterations(); ++i) {
        const auto row = sample.row(i);
        const double threshold = std_normal_quantile(0.1);
        const double p1 = oracle::conditional_pd(threshold, 0.25, row[0]);
        const double p2 = oracle::conditional_pd(threshold, 0.25, row[1]);
        const double q1 = p1 * p1 * p1;
        const double q2 = p2 * p2 * p2;
        total += (q1 + q2 - q1 * q2) / sample.iterations();
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Monte-Carlo likelihood against two-dimensional quadrature")
{
    const DefaultTimeSeries data = series({{3, 1}, {3, 0}});
    const double lambda = 0.1;
    const double rho = 0.3;
    const double theta = 0.6;
    const double threshold = std_normal_quantile(lambda);
    const double c = std::sqrt(1.0 - theta * theta);
    const double exact = oracle::trapezoid(
        [&](double s1) {
            const double inner = oracle::trapezoid(
                [&](double z) {
                    const double s2 = theta * s1 + c * z;
                    return oracle::normal_pdf(z)
                           * oracle::binomial_pmf(3, oracle::conditional_pd(threshold, rho, s2), 0);
                },
                -8.0, 8.0, 400);
            return oracle::normal_pdf(s1) * oracle::binomial_pmf(3, oracle::conditional_pd(threshold, rho, s1), 1)
                   * inner;
        },
        -8.0, 8.0, 400);
    const SystemicFactorSample sample = sample_systemic_factors(theta, 2, 400000, 9);
    const double estimate = marginal_likelihood(lambda, CorrelationParams(rho, theta), data, sample);
    CHECK(estimate == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("independent reductions at rho = 0")
{
    const DefaultTimeSeries data = series({{400, 1}, {500, 0}, {450, 3}, {300, 0}});
    const CorrelationParams params(0.0, 0.4);
    const SystemicFactorSample sample = sample_systemic_factors(0.4, 4, 500, 2);
    for (double lambda : {1e-4, 0.003, 0.05})
        CHECK(log_marginal_likelihood(lambda, params, data, sample)
              == doctest::Approx(independent_log_likelihood(lambda, data)).epsilon(1e-10));

    const MLEResult lambda_only = mle_fit_lambda(data, params, sample);
    CHECK(lambda_only.lambda_hat == doctest::Approx(data.naive_pd()).epsilon(1e-6));

    // Poisson bound with intensity lambda * obligor_years.
    const double years = static_cast<double>(data.obligor_years());
    for (double gamma : {0.5, 0.9, 0.99}) {
        double lo = 0.0;
        double hi = 20.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            double cdf = 0.0;
            double term = std::exp(-mid);
            for (int j = 0; j <= 4; ++j) {
                cdf += term;
                term *= mid / (j + 1);
            }
            (cdf > 1.0 - gamma ? lo : hi) = mid;
        }
        CHECK(ucb_multi(data, params, ConfidenceLevel(gamma), sample)
              == doctest::Approx(0.5 * (lo + hi) / years).epsilon(1e-6));
    }

    const int m = 200;
    const double u = 0.05;
    double num = 0.0;
    double den = 0.0;
    double cnum = 0.0;
    double cden = 0.0;
    const double top = independent_log_likelihood(data.naive_pd(), data);
    for (int i = 1; i <= m; ++i) {
        const double x = u * i / m;
        const double w = std::exp(independent_log_likelihood(x, data) - top);
        num += x * w;
        den += w;
        if (i < m) {
            cnum += x * w / (1.0 - x);
            cden += w / (1.0 - x);
        }
    }
    const BayesGridEstimates bayes = bayes_multi(data, params, u, m, sample);
    CHECK(bayes.neutral == doctest::Approx(num / den).epsilon(1e-9));
    CHECK(bayes.conservative == doctest::Approx(cnum / cden).epsilon(1e-9));
}

TEST_CASE("Poisson bound against exact convolution")
{
    const DefaultTimeSeries data = fictitious();
    const double rho = 0.18;
    const CorrelationParams params(rho, 0.3);
    const SystemicFactorSample sample = sample_systemic_factors(0.3, 8, 2000, 4);
    for (double gamma : {0.25, 0.5, 0.75}) {
        const double bound = ucb_multi(data, params, ConfidenceLevel(gamma), sample);
        REQUIRE(bound * data.obligor_years() <= 5.0);
        CHECK(bound == doctest::Approx(convolution_ucb(data, rho, sample, gamma)).epsilon(0.02));
    }
}

TEST_CASE("no defaults")
{
    const DefaultTimeSeries data = series({{100, 0}, {120, 0}, {90, 0}});
    const MLEResult fit = mle_fit(data, standard_normal_draws(3, 500, 1));
    CHECK(fit.lambda_hat == 0.0);
    CHECK(fit.converged);
    const SystemicFactorSample sample = sample_systemic_factors(0.3, 3, 500, 1);
    const CorrelationParams params(0.2, 0.3);
    CHECK(ucb_multi(data, params, ConfidenceLevel(0.9), sample) > 0.0);
    const BayesGridEstimates bayes = bayes_multi(data, params, 0.1, 100, sample);
    CHECK(bayes.neutral > 0.0);
    CHECK(bayes.neutral < bayes.conservative);
}

TEST_CASE("joint fit recovers the independent solution without correlation in the data")
{
    const DefaultTimeSeries data = series({{1000, 2}, {1000, 2}, {1000, 2}, {1000, 2}, {1000, 2}});
    const MLEResult fit = mle_fit(data, standard_normal_draws(5, 2000, 8));
    CHECK(fit.converged);
    CHECK(fit.lambda_hat == doctest::Approx(0.002).epsilon(0.05));
    CHECK(fit.log_likelihood >= independent_log_likelihood(0.002, data) - 1e-9);
}

TEST_CASE("fixed-sample estimators are monotone")
{
    const DefaultTimeSeries data = fictitious();
    const SystemicFactorSample sample = sample_systemic_factors(0.3, 8, 1000, 12);
    double previous = 0.0;
    for (double u : {0.002, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0}) {
        const double neutral = bayes_multi(data, CorrelationParams(0.18, 0.3), u, 400, sample).neutral;
        CHECK(neutral >= previous);
        previous = neutral;
    }
    double previous_gamma = 0.0;
    for (double gamma : {0.5, 0.75, 0.9, 0.95, 0.99, 0.999}) {
        const double bound = ucb_multi(data, CorrelationParams(0.18, 0.3), ConfidenceLevel(gamma), sample);
        CHECK(bound > previous_gamma);
        previous_gamma = bound;
    }
}
