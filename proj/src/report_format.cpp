#include "lowdefault/report.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lowdefault/distributions.hpp"
#include "lowdefault/errors.hpp"
#include "lowdefault/one_period.hpp"

namespace lowdefault {
namespace {

using nlohmann::json;

std::string fixed(double value, int decimals)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    std::string text(buffer);
    if (text == "-0.0" || text == "-0")
        text.erase(0, 1);
    return text;
}

std::string bps(double probability) { return fixed(probability * 1e4, 1); }

// 10.0 -> "10", 10.07 -> "10.1".
std::string compact_bps(double probability)
{
    std::string text = bps(probability);
    if (text.size() > 2 && text.ends_with(".0"))
        text.resize(text.size() - 2);
    return text;
}

std::string percent_label(double fraction)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%g", fraction * 100.0);
    return buffer;
}

// heading is the full first label, e.g. "ML estimate for PD (bps)".
void statistic_lines(std::ostream& out, const std::string& heading, const std::string& unit,
                     const RunStatistic& stat, double scale, int decimals)
{
    if (!stat.ok) {
        out << heading << ": failed (" << stat.error << ")\n";
        return;
    }
    out << heading << ": " << fixed(stat.mean * scale, decimals) << '\n';
    out << "Standard deviation (" << unit << "): " << fixed(stat.std_dev * scale, decimals)
        << '\n';
}

std::string row(const std::string& label, const std::vector<std::string>& cells)
{
    std::string line = label;
    for (const std::string& cell : cells)
        line += " & " + cell;
    return line;
}

void block_text(std::ostream& out, const ModeBlock& block)
{
    if (block.mode == CorrelationMode::estimated) {
        out << "Estimates with estimated correlations:\n";
        statistic_lines(out, "ML estimate for PD (bps)", "bps", block.ml_lambda, 1e4, 1);
        if (block.ml_rho)
            statistic_lines(out, "ML estimate for rho (%)", "%", *block.ml_rho, 100.0, 1);
        if (block.ml_theta)
            statistic_lines(out, "ML estimate for theta (%)", "%", *block.ml_theta, 100.0, 1);
    } else {
        out << "Estimates with pre-defined correlations:\n";
        out << "Asset correlation (%): " << fixed(block.rho * 100.0, 1) << '\n';
        out << "Time correlation deployed (%): " << fixed(block.theta * 100.0, 1) << '\n';
        statistic_lines(out, "ML estimate for PD (bps) only", "bps", block.ml_lambda, 1e4, 1);
    }
    out << '\n';

    std::vector<std::string> levels;
    std::vector<std::string> bounds;
    std::vector<std::string> deviations;
    for (std::size_t j = 0; j < block.levels.size(); ++j) {
        levels.push_back(percent_label(block.levels[j]));
        const RunStatistic& stat = block.ucb[j];
        bounds.push_back(stat.ok ? bps(stat.mean) : "failed");
        deviations.push_back(stat.ok ? bps(stat.std_dev) : "-");
    }
    out << row("Conf. level (%)", levels) << '\n';
    out << row("Upper bound (bps)", bounds) << '\n';
    out << row("Std. dev. (bps)", deviations) << '\n';
    for (std::size_t j = 0; j < block.levels.size(); ++j) {
        if (!block.ucb[j].ok)
            out << "Upper bound at " << levels[j] << "% failed: " << block.ucb[j].error << '\n';
    }
    out << '\n';

    statistic_lines(out, "Bayesian neutral estimate for PD (bps)", "bps", block.bayes_neutral, 1e4, 1);
    statistic_lines(out, "Bayesian constrained estimate for PD (bps)", "bps", block.bayes_constrained,
                    1e4, 1);
    statistic_lines(out, "Bayesian conservative estimate for PD (bps)", "bps", block.bayes_conservative,
                    1e4, 1);
}

json statistic_json(const RunStatistic& stat)
{
    if (!stat.ok)
        return {{"ok", false}, {"error", stat.error}};
    return {{"ok", true}, {"mean", stat.mean}, {"std_dev", stat.std_dev}};
}

json block_json(const ModeBlock& block)
{
    json out;
    out["mode"] = block.mode == CorrelationMode::estimated ? "estimated" : "predefined";
    out["rho"] = block.rho;
    out["theta"] = block.theta;
    out["ml_lambda"] = statistic_json(block.ml_lambda);
    if (block.ml_rho)
        out["ml_rho"] = statistic_json(*block.ml_rho);
    if (block.ml_theta)
        out["ml_theta"] = statistic_json(*block.ml_theta);
    json bounds = json::array();
    for (std::size_t j = 0; j < block.levels.size(); ++j) {
        json entry = statistic_json(block.ucb[j]);
        entry["level"] = block.levels[j];
        bounds.push_back(entry);
    }
    out["upper_bounds"] = bounds;
    out["proxy_u"] = block.proxy_u;
    out["constraint_u"] = block.constraint_u;
    out["bayes_neutral"] = statistic_json(block.bayes_neutral);
    out["bayes_constrained"] = statistic_json(block.bayes_constrained);
    out["bayes_conservative"] = statistic_json(block.bayes_conservative);
    return out;
}

}  // namespace

std::string to_string(EstimateMode mode)
{
    switch (mode) {
    case EstimateMode::one_period_independent:
        return "one-period-independent";
    case EstimateMode::one_period_correlated:
        return "one-period-correlated";
    case EstimateMode::multi_period:
        return "multi-period";
    }
    return "unknown";
}

bool EstimateReport::ok() const
{
    return std::all_of(blocks.begin(), blocks.end(), [](const ModeBlock& b) { return b.ok(); });
}

EstimateReport cmd_estimate(const RunConfig& config, const DefaultTimeSeries& data)
{
    EstimateReport report;
    report.timestamp = config.timestamp;
    report.title = config.title;
    report.dataset = config.dataset;
    report.mode = to_string(config.mode);
    report.periods = data.periods();
    report.obligor_years = data.obligor_years();
    report.defaults = data.total_defaults();
    report.naive_pd = data.naive_pd();

    if (config.mode == EstimateMode::multi_period) {
        if (!config.estimated_block && !config.predefined_block)
            throw ValidationError("no correlation mode selected");
        if (config.predefined_block && !config.correlations)
            throw ValidationError("pre-defined correlations require rho and theta");
        config.multi.validate();
        report.config = config.multi;
        if (config.estimated_block) {
            report.blocks.push_back(
                multi_run_report(data, CorrelationMode::estimated, std::nullopt, config.multi));
        }
        if (config.predefined_block) {
            report.blocks.push_back(multi_run_report(data, CorrelationMode::predefined,
                                                     config.correlations, config.multi));
        }
        return report;
    }

    if (data.periods() != 1 && !config.pool)
        throw ValidationError("one-period modes need a single period or pooling of the years");
    if (report.obligor_years > std::numeric_limits<int>::max())
        throw ValidationError("pooled portfolio too large");
    const PortfolioObservation obs(static_cast<int>(report.obligor_years),
                                   static_cast<int>(report.defaults));
    OnePeriodBlock block;
    block.pool_size = obs.n;
    block.defaults = obs.k;
    block.levels = config.multi.levels;
    block.constraints = config.constraints;
    if (config.mode == EstimateMode::one_period_independent) {
        for (double level : block.levels)
            block.ucb.push_back(ucb_independent(obs, ConfidenceLevel(level)));
        for (double u : block.constraints)
            block.neutral.push_back(neutral_bayes_independent(obs, PriorConstraint(u)));
        block.conservative = conservative_bayes_independent(obs);
    } else {
        if (!config.correlations)
            throw ValidationError("one-period correlated mode requires rho");
        block.correlated = true;
        block.rho = config.correlations->rho;
        const CorrelatedObservation cobs(obs, block.rho);
        for (double level : block.levels)
            block.ucb.push_back(ucb_correlated(cobs, ConfidenceLevel(level)));
        for (double u : block.constraints)
            block.neutral.push_back(neutral_bayes_correlated(cobs, PriorConstraint(u)));
        block.conservative = conservative_bayes_correlated(cobs);
    }
    report.one_period = block;
    return report;
}

std::string format_text(const EstimateReport& report)
{
    std::ostringstream out;
    if (report.timestamp)
        out << *report.timestamp << '\n';
    if (report.one_period) {
        const OnePeriodBlock& block = *report.one_period;
        out << "One-period low default estimation ("
            << (block.correlated ? "correlated" : "independent") << " defaults)\n";
        out << report.title << "\n\n";
        out << "Pool size: " << block.pool_size << '\n';
        out << "Observed number of defaults: " << block.defaults << '\n';
        if (block.correlated)
            out << "Asset correlation (%): " << fixed(block.rho * 100.0, 1) << '\n';
        out << "Naive PD estimate (bps): " << compact_bps(report.naive_pd) << "\n\n";
        std::vector<std::string> levels;
        std::vector<std::string> bounds;
        for (std::size_t j = 0; j < block.levels.size(); ++j) {
            levels.push_back(percent_label(block.levels[j]));
            bounds.push_back(bps(block.ucb[j]));
        }
        out << row("Conf. level (%)", levels) << '\n';
        out << row("Upper bound (bps)", bounds) << "\n\n";
        for (std::size_t j = 0; j < block.constraints.size(); ++j) {
            out << "Bayesian neutral estimate on (0, " << percent_label(block.constraints[j])
                << "%) (bps): " << bps(block.neutral[j]) << '\n';
        }
        out << "Bayesian conservative estimate for PD (bps): " << bps(block.conservative) << '\n';
        return out.str();
    }

    out << "Multiperiod low default estimation\n";
    out << report.title << "\n\n";
    if (report.config) {
        const MultiRunConfig& c = *report.config;
        out << "Random seed: " << c.seed << '\n';
        out << "Number of ML simulation iterations: " << c.ml_iterations << '\n';
        out << "Number of ML simulation runs: " << c.runs << '\n';
        out << "Number of confidence bounds simulation iterations: " << c.ucb_iterations << '\n';
        out << "Number of confidence bounds simulation runs: " << c.runs << '\n';
        out << "Number of inner Bayesian simulation iterations: " << c.bayes_iterations << '\n';
        out << "Number of outer Bayesian steps: " << c.grid_steps << '\n';
        out << "Number of Bayesian simulation runs: " << c.runs << '\n';
    }
    out << "Length of time period: " << report.periods << '\n';
    out << "Total number of obligor-years: " << report.obligor_years << '\n';
    out << "Total observed number of defaults: " << report.defaults << '\n';
    out << "Naive PD estimate (bps): " << compact_bps(report.naive_pd) << '\n';
    for (const ModeBlock& block : report.blocks) {
        out << '\n';
        block_text(out, block);
    }
    return out.str();
}

json to_json(const EstimateReport& report)
{
    json out;
    out["timestamp"] = report.timestamp ? json(*report.timestamp) : json(nullptr);
    out["title"] = report.title;
    out["dataset"] = report.dataset;
    out["mode"] = report.mode;
    if (report.config) {
        const MultiRunConfig& c = *report.config;
        out["config"] = {{"seed", c.seed},
                         {"ml_iterations", c.ml_iterations},
                         {"ucb_iterations", c.ucb_iterations},
                         {"bayes_iterations", c.bayes_iterations},
                         {"grid_steps", c.grid_steps},
                         {"runs", c.runs},
                         {"levels", c.levels},
                         {"proxy_u", c.proxy_u},
                         {"constraint_level", c.constraint_level}};
    }
    out["summary"] = {{"periods", report.periods},
                      {"obligor_years", report.obligor_years},
                      {"defaults", report.defaults},
                      {"naive_pd", report.naive_pd}};
    if (report.one_period) {
        const OnePeriodBlock& b = *report.one_period;
        json bounds = json::array();
        for (std::size_t j = 0; j < b.levels.size(); ++j)
            bounds.push_back({{"level", b.levels[j]}, {"value", b.ucb[j]}});
        json neutral = json::array();
        for (std::size_t j = 0; j < b.constraints.size(); ++j)
            neutral.push_back({{"u", b.constraints[j]}, {"value", b.neutral[j]}});
        out["one_period"] = {{"correlated", b.correlated},
                             {"pool_size", b.pool_size},
                             {"defaults", b.defaults},
                             {"rho", b.rho},
                             {"upper_bounds", bounds},
                             {"bayes_neutral", neutral},
                             {"bayes_conservative", b.conservative}};
    }
    json blocks = json::array();
    for (const ModeBlock& block : report.blocks)
        blocks.push_back(block_json(block));
    out["blocks"] = blocks;
    out["ok"] = report.ok();
    return out;
}

std::string format_structured(const EstimateReport& report) { return to_json(report).dump(2) + "\n"; }

DistributionComparison compare_distributions(int n, double lambda, double rho)
{
    const CorrBinomialParams params(n, lambda, rho);
    DistributionComparison table;
    table.n = n;
    table.lambda = lambda;
    table.rho = rho;
    const std::vector<double> correlated = corr_binomial_distribution(params);
    double binomial_total = 0.0;
    double correlated_total = 0.0;
    for (int k = 0; k <= n; ++k) {
        table.binomial.push_back(binomial_pmf(n, lambda, k));
        table.correlated.push_back(correlated[k]);
        binomial_total += table.binomial.back();
        correlated_total += table.correlated.back();
        if (binomial_total >= 1.0 - 1e-9 && correlated_total >= 1.0 - 1e-9)
            break;
    }
    return table;
}

std::string format_text(const DistributionComparison& table)
{
    std::ostringstream out;
    out << "Binomial and correlated binomial distributions\n";
    out << "n = " << table.n << ", PD = " << percent_label(table.lambda)
        << "%, asset correlation = " << percent_label(table.rho) << "%\n\n";
    out << "k,binomial,correlated_binomial\n";
    char buffer[96];
    for (std::size_t k = 0; k < table.binomial.size(); ++k) {
        std::snprintf(buffer, sizeof buffer, "%zu,%.10e,%.10e\n", k, table.binomial[k],
                      table.correlated[k]);
        out << buffer;
    }
    return out.str();
}

json to_json(const DistributionComparison& table)
{
    return {{"n", table.n},
            {"lambda", table.lambda},
            {"rho", table.rho},
            {"binomial", table.binomial},
            {"correlated_binomial", table.correlated}};
}

}  // namespace lowdefault
