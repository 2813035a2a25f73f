#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lowdefault/multi_run.hpp"

namespace lowdefault {

/// Estimates for a single observation period (pooled or T = 1).
struct OnePeriodBlock {
    bool correlated = false;
    int pool_size = 0;
    int defaults = 0;
    double rho = 0.0;
    std::vector<double> levels;
    std::vector<double> ucb;
    std::vector<double> constraints;
    std::vector<double> neutral;  ///< one per constraint
    double conservative = 0.0;
};

struct EstimateReport {
    std::optional<std::string> timestamp;
    std::string title;
    std::string dataset;
    std::string mode;  ///< one-period-independent | one-period-correlated | multi-period
    std::optional<MultiRunConfig> config;
    int periods = 0;
    std::int64_t obligor_years = 0;
    std::int64_t defaults = 0;
    double naive_pd = 0.0;
    std::optional<OnePeriodBlock> one_period;
    std::vector<ModeBlock> blocks;

    bool ok() const;
};

enum class EstimateMode { one_period_independent, one_period_correlated, multi_period };

std::string to_string(EstimateMode mode);

struct RunConfig {
    EstimateMode mode = EstimateMode::multi_period;
    std::string dataset;  ///< built-in name or file path, echoed in the report
    std::string title;
    /// One-period modes need T = 1 unless the years are pooled into one period.
    bool pool = false;
    /// Correlated one-period mode: rho (theta ignored). Multi-period mode:
    /// values for the pre-defined block.
    std::optional<CorrelationParams> correlations;
    bool estimated_block = true;
    bool predefined_block = false;
    /// Uniform-prior endpoints for the one-period neutral estimators.
    std::vector<double> constraints;
    MultiRunConfig multi;
    std::optional<std::string> timestamp;
};

/// Runs the estimators selected by config on data. Configuration errors throw
/// ValidationError; multi-period estimator failures are recorded in the report.
EstimateReport cmd_estimate(const RunConfig& config, const DefaultTimeSeries& data);

/// Plain-text report: probabilities in basis points with one decimal,
/// correlations and levels in percent.
std::string format_text(const EstimateReport& report);

/// Structured document with the same numbers at full precision (probabilities,
/// not basis points).
nlohmann::json to_json(const EstimateReport& report);
std::string format_structured(const EstimateReport& report);

/// Side-by-side pmf of Binomial(n, lambda) and the correlated binomial with
/// the same n and lambda, for k = 0, 1, ... until both cumulative sums reach
/// 1 - 1e-9.
struct DistributionComparison {
    int n = 0;
    double lambda = 0.0;
    double rho = 0.0;
    std::vector<double> binomial;
    std::vector<double> correlated;
};

DistributionComparison compare_distributions(int n, double lambda, double rho);
std::string format_text(const DistributionComparison& table);
nlohmann::json to_json(const DistributionComparison& table);

}  // namespace lowdefault
