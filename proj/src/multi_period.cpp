#include "lowdefault/multi_period.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "lowdefault/distributions.hpp"
#include "lowdefault/errors.hpp"

namespace lowdefault {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Likelihood evaluation with the per-lambda constants hoisted out of the
// loop over factor draws.
class LikelihoodKernel {
public:
    LikelihoodKernel(double lambda, double rho, const DefaultTimeSeries& data)
        : data_(data), impossible_(!(lambda < 1.0)), curve_(impossible_ ? 0.0 : lambda, rho)
    {
        for (const YearRecord& row : data.rows())
            log_choose_ += log_binomial_coefficient(row.pool_size, row.defaults);
        if (lambda == 0.0 && data.total_defaults() > 0)
            impossible_ = true;
    }

    double operator()(std::span<const double> factors) const
    {
        if (impossible_)
            return -kInf;
        double total = log_choose_;
        const auto& rows = data_.rows();
        for (std::size_t t = 0; t < rows.size(); ++t) {
            const int k = rows[t].defaults;
            const int survivors = rows[t].pool_size - k;
            if (k == 0) {
                total += survivors * curve_.log_survival(factors[t]);
            } else {
                const ConditionalPdLogs g = curve_.logs(factors[t]);
                total += k * g.log_pd + survivors * g.log_survival;
            }
        }
        return total;
    }

private:
    const DefaultTimeSeries& data_;
    bool impossible_;
    ConditionalPdCurve curve_;
    double log_choose_ = 0.0;
};

double log_mean_exp(const std::vector<double>& values)
{
    const double top = *std::max_element(values.begin(), values.end());
    if (top == -kInf)
        return -kInf;
    double sum = 0.0;
    for (double v : values)
        sum += std::exp(v - top);
    return top + std::log(sum / static_cast<double>(values.size()));
}

double log_marginal(double lambda, double rho, const DefaultTimeSeries& data,
                    const SystemicFactorSample& sample, std::vector<double>& scratch)
{
    const LikelihoodKernel kernel(lambda, rho, data);
    scratch.resize(sample.iterations());
    for (int i = 0; i < sample.iterations(); ++i)
        scratch[i] = kernel(sample.row(i));
    return log_mean_exp(scratch);
}

void check_sample(const DefaultTimeSeries& data, const SystemicFactorSample& sample)
{
    if (sample.periods() != data.periods())
        throw ValidationError("factor sample has " + std::to_string(sample.periods())
                              + " periods, data has " + std::to_string(data.periods()));
    if (sample.iterations() < 1)
        throw ValidationError("factor sample is empty");
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Log-likelihood of independent binomial years, which is exact at rho = 0.
double independent_log_likelihood(double lambda, const DefaultTimeSeries& data)
{
    double total = 0.0;
    for (const YearRecord& row : data.rows())
        total += std::log(binomial_pmf(row.pool_size, lambda, row.defaults));
    return total;
}

struct SimplexResult {
    std::array<double, 3> x;
    double value;
    bool converged;
};

template <class F>
SimplexResult nelder_mead(F&& f, std::array<double, 3> start, double step, int max_evaluations)
{
    using Point = std::array<double, 3>;
    constexpr int kDim = 3;
    std::array<Point, kDim + 1> vertices;
    std::array<double, kDim + 1> values;
    int evaluations = 0;
    auto eval = [&](const Point& p) {
        ++evaluations;
        const double v = f(p);
        return std::isnan(v) ? kInf : v;
    };
    vertices[0] = start;
    values[0] = eval(start);
    for (int i = 0; i < kDim; ++i) {
        vertices[i + 1] = start;
        vertices[i + 1][i] += step;
        values[i + 1] = eval(vertices[i + 1]);
    }

    bool converged = false;
    while (evaluations < max_evaluations) {
        std::array<int, kDim + 1> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
        const int best = order[0];
        const int second_worst = order[kDim - 1];
        const int worst = order[kDim];

        double size = 0.0;
        for (int i = 0; i <= kDim; ++i) {
            for (int d = 0; d < kDim; ++d)
                size = std::max(size, std::abs(vertices[i][d] - vertices[best][d]));
        }
        if (std::abs(values[worst] - values[best]) <= 1e-10 * (std::abs(values[best]) + 1e-10)
            && size < 1e-6) {
            converged = true;
            break;
        }

        Point centroid{};
        for (int i = 0; i <= kDim; ++i) {
            if (i == worst)
                continue;
            for (int d = 0; d < kDim; ++d)
                centroid[d] += vertices[i][d] / kDim;
        }
        auto along = [&](double coefficient) {
            Point p;
            for (int d = 0; d < kDim; ++d)
                p[d] = centroid[d] + coefficient * (vertices[worst][d] - centroid[d]);
            return p;
        };

        const Point reflected = along(-1.0);
        const double f_reflected = eval(reflected);
        if (f_reflected < values[best]) {
            const Point expanded = along(-2.0);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                vertices[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                vertices[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            vertices[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        const bool outside = f_reflected < values[worst];
        const Point contracted = along(outside ? -0.5 : 0.5);
        const double f_contracted = eval(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            vertices[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }
        for (int i = 0; i <= kDim; ++i) {
            if (i == best)
                continue;
            for (int d = 0; d < kDim; ++d)
                vertices[i][d] = vertices[best][d] + 0.5 * (vertices[i][d] - vertices[best][d]);
            values[i] = eval(vertices[i]);
        }
    }
    const auto best = std::min_element(values.begin(), values.end()) - values.begin();
    return {vertices[best], values[best], converged};
}

constexpr double kParamCeiling = 1.0 - 1e-9;
constexpr int kSimplexBudget = 1500;

}  // namespace

CorrelationParams::CorrelationParams(double rho_, double theta_) : rho(rho_), theta(theta_)
{
    if (!(rho >= 0.0 && rho < 1.0))
        throw DomainError("asset correlation must lie in [0,1)");
    if (!(theta >= 0.0 && theta < 1.0))
        throw DomainError("time correlation must lie in [0,1)");
}

GridConfig::GridConfig(int m_, double u_, int n_iter_, int runs_, std::uint64_t seed_)
    : m(m_), u(u_), n_iter(n_iter_), runs(runs_), seed(seed_)
{
    if (m < 10)
        throw ValidationError("grid steps must be at least 10");
    if (!(u > 0.0 && u <= 1.0))
        throw ValidationError("grid endpoint must lie in (0,1]");
    if (n_iter < 100)
        throw ValidationError("simulation iterations must be at least 100");
    if (runs < 1)
        throw ValidationError("runs must be at least 1");
}

Eigen::MatrixXd build_sigma(double theta, int periods)
{
    if (periods < 1)
        throw DomainError("number of periods must be positive");
    Eigen::MatrixXd sigma(periods, periods);
    for (int t = 0; t < periods; ++t) {
        for (int tau = 0; tau < periods; ++tau)
            sigma(t, tau) = std::pow(theta, std::abs(t - tau));
    }
    return sigma;
}

FactorMatrix standard_normal_draws(int periods, int n_iter, std::uint64_t seed)
{
    if (periods < 1 || n_iter < 1)
        throw DomainError("draw dimensions must be positive");
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal;
    FactorMatrix z(n_iter, periods);
    for (int i = 0; i < n_iter; ++i) {
        for (int t = 0; t < periods; ++t)
            z(i, t) = normal(engine);
    }
    return z;
}

// The Cholesky factor of Sigma_theta is the AR(1) recursion
// S_1 = Z_1, S_t = theta S_{t-1} + sqrt(1 - theta^2) Z_t.
SystemicFactorSample correlate_factors(const FactorMatrix& z, double theta, std::uint64_t seed)
{
    if (!(theta >= 0.0 && theta < 1.0))
        throw DomainError("time correlation must lie in [0,1)");
    const double innovation = std::sqrt(1.0 - theta * theta);
    SystemicFactorSample sample{FactorMatrix(z.rows(), z.cols()), theta, seed};
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        double previous = z(i, 0);
        sample.draws(i, 0) = previous;
        for (Eigen::Index t = 1; t < z.cols(); ++t) {
            previous = theta * previous + innovation * z(i, t);
            sample.draws(i, t) = previous;
        }
    }
    return sample;
}

SystemicFactorSample sample_systemic_factors(double theta, int periods, int n_iter,
                                             std::uint64_t seed)
{
    return correlate_factors(standard_normal_draws(periods, n_iter, seed), theta, seed);
}

double log_conditional_likelihood(double lambda, double rho, std::span<const double> factors,
                                  const DefaultTimeSeries& data)
{
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw DomainError("PD must lie in [0,1]");
    if (factors.size() != static_cast<std::size_t>(data.periods()))
        throw ValidationError("factor vector length differs from number of periods");
    return LikelihoodKernel(lambda, rho, data)(factors);
}

double conditional_likelihood(double lambda, double rho, std::span<const double> factors,
                              const DefaultTimeSeries& data)
{
    return std::exp(log_conditional_likelihood(lambda, rho, factors, data));
}

double log_marginal_likelihood(double lambda, const CorrelationParams& params,
                               const DefaultTimeSeries& data, const SystemicFactorSample& sample)
{
    check_sample(data, sample);
    if (sample.theta != params.theta)
        throw ValidationError("factor sample was drawn for a different time correlation");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw DomainError("PD must lie in [0,1]");
    std::vector<double> scratch;
    return log_marginal(lambda, params.rho, data, sample, scratch);
}

double marginal_likelihood(double lambda, const CorrelationParams& params,
                           const DefaultTimeSeries& data, const SystemicFactorSample& sample)
{
    return std::exp(log_marginal_likelihood(lambda, params, data, sample));
}

MLEResult mle_fit(const DefaultTimeSeries& data, const FactorMatrix& z)
{
    if (z.cols() != data.periods())
        throw ValidationError("draw matrix has the wrong number of periods");
    if (data.total_defaults() == 0)
        return {0.0, 0.0, 0.0, 0.0, true};

    const double naive = data.naive_pd();
    MLEResult best{naive, 0.0, 0.0, independent_log_likelihood(naive, data), true};

    std::vector<double> scratch;
    auto objective = [&](const std::array<double, 3>& x) {
        const double lambda = std::min(logistic(x[0]), kParamCeiling);
        const double rho = std::min(logistic(x[1]), kParamCeiling);
        const double theta = std::min(logistic(x[2]), kParamCeiling);
        if (!(lambda > 0.0))
            return kInf;
        const SystemicFactorSample sample = correlate_factors(z, theta);
        return -log_marginal(lambda, rho, data, sample, scratch);
    };

    const std::array<std::array<double, 2>, 3> starts{{{0.05, 0.3}, {0.15, 0.5}, {0.3, 0.7}}};
    const double lambda_start = logit(std::clamp(2.0 * naive, 1e-6, 0.5));
    for (const auto& [rho, theta] : starts) {
        const SimplexResult result =
            nelder_mead(objective, {lambda_start, logit(rho), logit(theta)}, 0.5, kSimplexBudget);
        if (-result.value > best.log_likelihood) {
            best = {std::min(logistic(result.x[0]), kParamCeiling),
                    std::min(logistic(result.x[1]), kParamCeiling),
                    std::min(logistic(result.x[2]), kParamCeiling), -result.value,
                    result.converged};
        }
    }
    return best;
}

MLEResult mle_fit(const DefaultTimeSeries& data, const GridConfig& config)
{
    return mle_fit(data, standard_normal_draws(data.periods(), config.n_iter, config.seed));
}

MLEResult mle_fit_lambda(const DefaultTimeSeries& data, const CorrelationParams& params,
                         const SystemicFactorSample& sample)
{
    check_sample(data, sample);
    if (sample.theta != params.theta)
        throw ValidationError("factor sample was drawn for a different time correlation");
    if (data.total_defaults() == 0)
        return {0.0, params.rho, params.theta, 0.0, true};

    std::vector<double> scratch;
    auto objective = [&](double x) {
        return -log_marginal(logistic(x), params.rho, data, sample, scratch);
    };
    std::uintmax_t max_iter = 500;
    const auto [x, value] =
        boost::math::tools::brent_find_minima(objective, logit(1e-9), logit(0.5), 40, max_iter);
    return {logistic(x), params.rho, params.theta, -value, max_iter < 500};
}

MLEResult mle_fit_lambda(const DefaultTimeSeries& data, const CorrelationParams& params,
                         const GridConfig& config)
{
    return mle_fit_lambda(
        data, params,
        sample_systemic_factors(params.theta, data.periods(), config.n_iter, config.seed));
}

double ucb_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                 ConfidenceLevel level, const SystemicFactorSample& sample)
{
    check_sample(data, sample);
    const double k = static_cast<double>(data.total_defaults());
    const auto& rows = data.rows();
    auto residual = [&](double log_lambda) {
        const ConditionalPdCurve curve(std::exp(log_lambda), params.rho);
        double sum = 0.0;
        for (int i = 0; i < sample.iterations(); ++i) {
            const std::span<const double> s = sample.row(i);
            double intensity = 0.0;
            for (std::size_t t = 0; t < rows.size(); ++t)
                intensity += rows[t].pool_size * curve.pd(s[t]);
            sum += intensity > 0.0 ? boost::math::gamma_q(k + 1.0, intensity) : 1.0;
        }
        return sum / sample.iterations() - level.alpha();
    };

    const double lo = std::log(1e-12);
    const double hi = std::log1p(-1e-12);
    const double f_lo = residual(lo);
    const double f_hi = residual(hi);
    if (f_lo * f_hi > 0.0)
        throw EstimationError("multi-period upper confidence bound: root not bracketed");
    std::uintmax_t max_iter = 200;
    boost::math::tools::eps_tolerance<double> tolerance(45);
    const auto [a, b] =
        boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi, tolerance, max_iter);
    return std::exp(0.5 * (a + b));
}

double ucb_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                 ConfidenceLevel level, const GridConfig& config)
{
    return ucb_multi(
        data, params, level,
        sample_systemic_factors(params.theta, data.periods(), config.n_iter, config.seed));
}

BayesGridEstimates bayes_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                               double u, int m, const SystemicFactorSample& sample)
{
    check_sample(data, sample);
    if (!(u > 0.0 && u <= 1.0))
        throw DomainError("grid endpoint must lie in (0,1]");
    if (m < 1)
        throw DomainError("grid steps must be positive");

    std::vector<double> grid(m + 1);
    std::vector<double> log_lik(m + 1);
    std::vector<double> scratch;
    for (int i = 0; i <= m; ++i) {
        grid[i] = u * static_cast<double>(i) / static_cast<double>(m);
        // u_0 = 0: the limit lambda -> 0 is 1 without defaults and 0 otherwise.
        if (i == 0)
            log_lik[i] = data.total_defaults() == 0 ? 0.0 : -kInf;
        else if (grid[i] >= 1.0)
            log_lik[i] = -kInf;
        else
            log_lik[i] = log_marginal(grid[i], params.rho, data, sample, scratch);
    }
    const double top = *std::max_element(log_lik.begin(), log_lik.end());
    if (top == -kInf)
        throw EstimationError("Bayesian grid: every likelihood value underflowed");

    double neutral_num = 0.0;
    double neutral_den = 0.0;
    double conservative_num = 0.0;
    double conservative_den = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double weight = std::exp(log_lik[i] - top);
        neutral_num += grid[i] * weight;
        neutral_den += weight;
        if (i < m) {
            const double tilted = weight / (1.0 - grid[i]);
            conservative_num += grid[i] * tilted;
            conservative_den += tilted;
        }
    }
    if (!(conservative_den > 0.0))
        throw EstimationError("Bayesian grid: conservative weights vanished");
    return {neutral_num / neutral_den, conservative_num / conservative_den};
}

double conservative_bayes_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                                const GridConfig& grid)
{
    const SystemicFactorSample sample =
        sample_systemic_factors(params.theta, data.periods(), grid.n_iter, grid.seed);
    return bayes_multi(data, params, grid.u, grid.m, sample).conservative;
}

double neutral_bayes_multi(const DefaultTimeSeries& data, const CorrelationParams& params,
                           const GridConfig& grid)
{
    const SystemicFactorSample sample =
        sample_systemic_factors(params.theta, data.periods(), grid.n_iter, grid.seed);
    return bayes_multi(data, params, grid.u, grid.m, sample).neutral;
}

}  // namespace lowdefault
