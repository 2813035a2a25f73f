#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "lowdefault/data_io.hpp"
#include "lowdefault/errors.hpp"
#include "lowdefault/report.hpp"

using namespace lowdefault;

namespace {

MultiRunConfig small_config(int runs)
{
    MultiRunConfig config;
    config.ml_iterations = 300;
    config.ucb_iterations = 500;
    config.bayes_iterations = 200;
    config.grid_steps = 100;
    config.runs = runs;
    config.threads = 1;
    return config;
}

RunConfig multi_period_run(int runs)
{
    RunConfig run;
    run.mode = EstimateMode::multi_period;
    run.title = "Fictitious default data";
    run.dataset = "fictitious";
    run.multi = small_config(runs);
    run.correlations = CorrelationParams(0.18, 0.3);
    run.predefined_block = true;
    return run;
}

std::string one_decimal(double value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.1f", value);
    return buffer;
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("multi-period text report")
{
    const DefaultTimeSeries data = builtin_dataset("fictitious").series;
    const EstimateReport report = cmd_estimate(multi_period_run(2), data);
    REQUIRE(report.ok());
    REQUIRE(report.blocks.size() == 2);
    const std::string text = format_text(report);
    CHECK(contains(text, "Multiperiod low default estimation\nFictitious default data\n"));
    CHECK(contains(text, "Random seed: 36\n"));
    CHECK(contains(text, "Length of time period: 8\n"));
    CHECK(contains(text, "Total number of obligor-years: 1000\n"));
    CHECK(contains(text, "Total observed number of defaults: 1\n"));
    CHECK(contains(text, "Naive PD estimate (bps): 10\n"));
    CHECK(contains(text, "Estimates with estimated correlations:\n"));
    CHECK(contains(text, "Estimates with pre-defined correlations:\n"));
    CHECK(contains(text, "Asset correlation (%): 18.0\n"));
    CHECK(contains(text, "Conf. level (%) & 50 & 75 & 90 & 95 & 99 & 99.9\n"));
    CHECK(!contains(text, "failed"));
}

TEST_CASE("investment grade naive estimate")
{
    RunConfig run = multi_period_run(1);
    run.correlations.reset();
    run.predefined_block = false;
    const EstimateReport report = cmd_estimate(run, builtin_dataset("moodys_investment_grade").series);
    CHECK(contains(format_text(report), "Naive PD estimate (bps): 10.1\n"));
}

TEST_CASE("text and structured reports agree")
{
    const DefaultTimeSeries data = builtin_dataset("fictitious").series;
    const EstimateReport report = cmd_estimate(multi_period_run(2), data);
    const std::string text = format_text(report);
    const nlohmann::json json = nlohmann::json::parse(format_structured(report));
    CHECK(json["summary"]["obligor_years"] == 1000);
    CHECK(json["summary"]["defaults"] == 1);
    CHECK(json["ok"] == true);
    REQUIRE(json["blocks"].size() == 2);
    const auto& estimated = json["blocks"][0];
    CHECK(estimated["mode"] == "estimated");
    CHECK(contains(text, "ML estimate for PD (bps): " + one_decimal(1e4 * estimated["ml_lambda"]["mean"].get<double>())));
    CHECK(contains(text, "Bayesian neutral estimate for PD (bps): "
                             + one_decimal(1e4 * estimated["bayes_neutral"]["mean"].get<double>())));
    const auto& predefined = json["blocks"][1];
    CHECK(predefined["mode"] == "predefined");
    CHECK(predefined["rho"] == doctest::Approx(0.18));
    std::string row = "Upper bound (bps)";
    for (const auto& bound : predefined["upper_bounds"])
        row += " & " + one_decimal(1e4 * bound["mean"].get<double>());
    CHECK(contains(text, row + "\n"));
}

TEST_CASE("single run has zero standard deviation")
{
    const EstimateReport report = cmd_estimate(multi_period_run(1), builtin_dataset("fictitious").series);
    for (const ModeBlock& block : report.blocks) {
        CHECK(block.ml_lambda.std_dev == 0.0);
        CHECK(block.bayes_neutral.std_dev == 0.0);
        for (const RunStatistic& stat : block.ucb)
            CHECK(stat.std_dev == 0.0);
    }
}

TEST_CASE("reports are reproducible across thread counts")
{
    const DefaultTimeSeries data = builtin_dataset("fictitious").series;
    RunConfig serial = multi_period_run(3);
    RunConfig parallel = serial;
    parallel.multi.threads = 3;
    CHECK(format_text(cmd_estimate(serial, data)) == format_text(cmd_estimate(parallel, data)));
    CHECK(format_structured(cmd_estimate(serial, data)) == format_structured(cmd_estimate(parallel, data)));
}

TEST_CASE("one-period report")
{
    RunConfig run;
    run.mode = EstimateMode::one_period_independent;
    run.title = "Single year";
    run.multi.levels = {0.5, 0.75, 0.9};
    run.constraints = {0.025, 1.0};
    const DefaultTimeSeries data({{2010, 1000, 1}});
    const EstimateReport report = cmd_estimate(run, data);
    REQUIRE(report.one_period);
    CHECK(report.one_period->conservative == doctest::Approx(2.0 / 1001.0));
    const std::string text = format_text(report);
    CHECK(contains(text, "Pool size: 1000\n"));
    CHECK(contains(text, "Naive PD estimate (bps): 10\n"));
    CHECK(contains(text, "Upper bound (bps) & 16.8 & 26.9 & 38.8\n"));
    CHECK(contains(text, "Bayesian conservative estimate for PD (bps): 20.0\n"));

    CHECK_THROWS_AS(cmd_estimate(run, builtin_dataset("fictitious").series), ValidationError);
    run.pool = true;
    CHECK(cmd_estimate(run, builtin_dataset("fictitious").series).one_period->pool_size == 1000);
    run.mode = EstimateMode::one_period_correlated;
    CHECK_THROWS_AS(cmd_estimate(run, data), ValidationError);
    run.correlations = CorrelationParams(0.0, 0.0);
    const EstimateReport correlated = cmd_estimate(run, data);
    CHECK(correlated.one_period->ucb[1] == doctest::Approx(report.one_period->ucb[1]).epsilon(1e-6));
}

TEST_CASE("distribution comparison")
{
    const DistributionComparison table = compare_distributions(100, 0.01, 0.18);
    double binomial = 0.0;
    double correlated = 0.0;
    for (std::size_t k = 0; k < table.binomial.size(); ++k) {
        binomial += table.binomial[k];
        correlated += table.correlated[k];
    }
    CHECK(binomial >= 1.0 - 1e-9);
    CHECK(correlated >= 1.0 - 1e-9);
    CHECK(binomial <= 1.0 + 1e-12);
    CHECK(correlated <= 1.0 + 1e-9);
    CHECK(table.correlated[0] > table.binomial[0]);
    const std::string text = format_text(table);
    CHECK(contains(text, "k,binomial,correlated_binomial\n0,"));
    const nlohmann::json json = to_json(table);
    CHECK(json["binomial"].size() == table.binomial.size());
    CHECK(json["n"] == 100);
}
