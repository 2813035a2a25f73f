#include "lowdefault/multi_run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "lowdefault/errors.hpp"

namespace lowdefault {
namespace {

enum Stream : std::uint64_t { kStreamMl = 1, kStreamMlLambda = 2, kStreamUcb = 3, kStreamBayes = 4 };

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Each index writes only its own slot, so the outcome is independent of
// scheduling.
template <class F>
void parallel_for(int count, int threads, F&& body)
{
    if (threads <= 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& thread : pool)
        thread.join();
    for (const std::exception_ptr& error : errors) {
        if (error)
            std::rethrow_exception(error);
    }
}

// Per-run outcome of one estimator.
struct Sample {
    double value = 0.0;
    std::string error;
};

template <class F>
Sample attempt(F&& f)
{
    try {
        return {f(), {}};
    } catch (const std::exception& e) {
        return {0.0, e.what()};
    }
}

RunStatistic summarize(const std::vector<Sample>& samples)
{
    RunStatistic stat;
    for (const Sample& s : samples) {
        if (!s.error.empty()) {
            stat.ok = false;
            stat.error = s.error;
            return stat;
        }
    }
    const double runs = static_cast<double>(samples.size());
    for (const Sample& s : samples)
        stat.mean += s.value;
    stat.mean /= runs;
    if (samples.size() > 1) {
        double squares = 0.0;
        for (const Sample& s : samples)
            squares += (s.value - stat.mean) * (s.value - stat.mean);
        stat.std_dev = std::sqrt(squares / (runs - 1.0)) / std::sqrt(runs);
    }
    return stat;
}

RunStatistic failed(const std::string& reason)
{
    RunStatistic stat;
    stat.ok = false;
    stat.error = reason;
    return stat;
}

}  // namespace

void MultiRunConfig::validate() const
{
    if (ml_iterations < 100 || ucb_iterations < 100 || bayes_iterations < 100)
        throw ValidationError("simulation iterations must be at least 100");
    if (grid_steps < 10)
        throw ValidationError("grid steps must be at least 10");
    if (runs < 1)
        throw ValidationError("runs must be at least 1");
    if (levels.empty())
        throw ValidationError("at least one confidence level is required");
    for (double level : levels)
        ConfidenceLevel{level};
    ConfidenceLevel{constraint_level};
    if (!(proxy_u > 0.0 && proxy_u <= 1.0))
        throw ValidationError("proxy grid endpoint must lie in (0,1]");
    if (threads < 0)
        throw ValidationError("threads must be non-negative");
}

bool ModeBlock::ok() const
{
    auto good = [](const RunStatistic& s) { return s.ok; };
    return ml_lambda.ok && (!ml_rho || ml_rho->ok) && (!ml_theta || ml_theta->ok)
           && std::all_of(ucb.begin(), ucb.end(), good) && bayes_neutral.ok
           && bayes_constrained.ok && bayes_conservative.ok;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t run)
{
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ run);
}

ModeBlock multi_run_report(const DefaultTimeSeries& data, CorrelationMode mode,
                           const std::optional<CorrelationParams>& predefined,
                           const MultiRunConfig& config)
{
    config.validate();
    if ((mode == CorrelationMode::predefined) != predefined.has_value())
        throw ValidationError("pre-defined correlations are required in pre-defined mode only");

    const int runs = config.runs;
    const int periods = data.periods();
    ModeBlock block;
    block.mode = mode;
    block.levels = config.levels;
    block.proxy_u = config.proxy_u;

    // Maximum likelihood.
    std::vector<Sample> lambdas(runs);
    std::vector<Sample> rhos(runs);
    std::vector<Sample> thetas(runs);
    parallel_for(runs, config.threads, [&](int r) {
        try {
            MLEResult fit{};
            if (mode == CorrelationMode::estimated) {
                fit = mle_fit(data, standard_normal_draws(
                                        periods, config.ml_iterations,
                                        derive_seed(config.seed, kStreamMl, r)));
            } else {
                fit = mle_fit_lambda(
                    data, *predefined,
                    sample_systemic_factors(predefined->theta, periods, config.ml_iterations,
                                            derive_seed(config.seed, kStreamMlLambda, r)));
            }
            lambdas[r].value = fit.lambda_hat;
            rhos[r].value = fit.rho_hat;
            thetas[r].value = fit.theta_hat;
        } catch (const std::exception& e) {
            lambdas[r].error = rhos[r].error = thetas[r].error = e.what();
        }
    });
    block.ml_lambda = summarize(lambdas);
    if (mode == CorrelationMode::estimated) {
        block.ml_rho = summarize(rhos);
        block.ml_theta = summarize(thetas);
        if (!block.ml_lambda.ok) {
            const std::string reason = "maximum likelihood failed: " + block.ml_lambda.error;
            block.ucb.assign(config.levels.size(), failed(reason));
            block.bayes_neutral = block.bayes_constrained = block.bayes_conservative = failed(reason);
            return block;
        }
        block.rho = block.ml_rho->mean;
        block.theta = block.ml_theta->mean;
    } else {
        block.rho = predefined->rho;
        block.theta = predefined->theta;
    }
    const CorrelationParams deployed(block.rho, block.theta);

    // Upper confidence bounds, plus the constraint level if it is not listed.
    std::vector<double> levels = config.levels;
    const auto listed = std::find(levels.begin(), levels.end(), config.constraint_level);
    const std::size_t constraint_index = listed - levels.begin();
    if (listed == levels.end())
        levels.push_back(config.constraint_level);
    std::vector<std::vector<Sample>> bounds(levels.size(), std::vector<Sample>(runs));
    parallel_for(runs, config.threads, [&](int r) {
        const SystemicFactorSample sample = sample_systemic_factors(
            deployed.theta, periods, config.ucb_iterations, derive_seed(config.seed, kStreamUcb, r));
        for (std::size_t j = 0; j < levels.size(); ++j) {
            bounds[j][r] = attempt(
                [&] { return ucb_multi(data, deployed, ConfidenceLevel(levels[j]), sample); });
        }
    });
    for (std::size_t j = 0; j < config.levels.size(); ++j)
        block.ucb.push_back(summarize(bounds[j]));
    const RunStatistic constraint = summarize(bounds[constraint_index]);

    // Bayesian grid estimators.
    block.constraint_u = constraint.ok ? std::clamp(constraint.mean, 0.0, 1.0) : 0.0;
    std::vector<Sample> neutral(runs);
    std::vector<Sample> conservative(runs);
    std::vector<Sample> constrained(runs);
    parallel_for(runs, config.threads, [&](int r) {
        const SystemicFactorSample sample =
            sample_systemic_factors(deployed.theta, periods, config.bayes_iterations,
                                    derive_seed(config.seed, kStreamBayes, r));
        try {
            const BayesGridEstimates proxy =
                bayes_multi(data, deployed, config.proxy_u, config.grid_steps, sample);
            neutral[r].value = proxy.neutral;
            conservative[r].value = proxy.conservative;
        } catch (const std::exception& e) {
            neutral[r].error = conservative[r].error = e.what();
        }
        if (constraint.ok) {
            constrained[r] = attempt([&] {
                return bayes_multi(data, deployed, block.constraint_u, config.grid_steps, sample)
                    .neutral;
            });
        }
    });
    block.bayes_neutral = summarize(neutral);
    block.bayes_conservative = summarize(conservative);
    block.bayes_constrained = constraint.ok
                                  ? summarize(constrained)
                                  : failed("constraint bound failed: " + constraint.error);
    return block;
}

}  // namespace lowdefault
