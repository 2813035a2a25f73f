#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lowdefault/multi_period.hpp"

namespace lowdefault {

enum class CorrelationMode { estimated, predefined };

/// Mean of an estimator over independent runs and the standard deviation of
/// that mean (sample standard deviation / sqrt(runs); 0 for a single run).
struct RunStatistic {
    double mean = 0.0;
    double std_dev = 0.0;
    bool ok = true;
    std::string error;
};

struct MultiRunConfig {
    std::uint64_t seed = 36;
    int ml_iterations = 10000;
    int ucb_iterations = 10000;
    int bayes_iterations = 1000;
    int grid_steps = 2500;
    int runs = 16;
    std::vector<double> levels{0.5, 0.75, 0.9, 0.95, 0.99, 0.999};
    /// Grid endpoint standing in for u = 1 in the neutral and conservative estimators.
    double proxy_u = 0.1;
    /// Level of the upper bound used as the constraint of the constrained neutral estimator.
    double constraint_level = 0.99;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    int threads = 0;

    /// Throws ValidationError for out-of-range sizes, levels or proxy_u.
    void validate() const;
};

/// One "Estimates with ... correlations" block.
struct ModeBlock {
    CorrelationMode mode = CorrelationMode::estimated;
    RunStatistic ml_lambda;
    std::optional<RunStatistic> ml_rho;    ///< estimated mode only
    std::optional<RunStatistic> ml_theta;  ///< estimated mode only
    /// Correlations used for bounds and Bayesian estimates: the pre-defined
    /// values, or the run means of the ML estimates.
    double rho = 0.0;
    double theta = 0.0;
    std::vector<double> levels;
    std::vector<RunStatistic> ucb;
    double proxy_u = 0.1;
    double constraint_u = 0.0;
    RunStatistic bayes_neutral;
    RunStatistic bayes_constrained;
    RunStatistic bayes_conservative;

    bool ok() const;
};

/// Deterministic sub-seed for (stream, run), mixed by SplitMix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t run);

/// Runs ML, upper-bound and Bayesian phases `runs` times on independent
/// factor samples and aggregates them. predefined must be set iff mode is
/// predefined. Per-estimator failures are recorded in the block, not thrown.
ModeBlock multi_run_report(const DefaultTimeSeries& data, CorrelationMode mode,
                           const std::optional<CorrelationParams>& predefined,
                           const MultiRunConfig& config);

}  // namespace lowdefault
