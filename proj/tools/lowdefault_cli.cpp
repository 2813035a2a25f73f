#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lowdefault/data_io.hpp"
#include "lowdefault/errors.hpp"
#include "lowdefault/report.hpp"

using namespace lowdefault;

namespace {

constexpr int kExitEstimationFailure = 1;
constexpr int kExitUsage = 2;

std::string now_string()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buffer[64];
    std::strftime(buffer, sizeof buffer, "%a %b %d %H:%M:%S %Y", std::localtime(&t));
    return buffer;
}

struct EstimateOptions {
    std::string mode = "multi-period";
    std::string data;
    std::string builtin;
    std::optional<int> pool_size;
    std::optional<int> defaults;
    bool pool = false;
    std::optional<double> rho;
    std::optional<double> theta;
    std::string correlation_mode = "auto";
    std::vector<double> levels;
    std::vector<double> constraints;
    MultiRunConfig multi;
    std::optional<int> iterations;
    std::string format = "text";
    bool timestamp = false;
};

int run_estimate(const EstimateOptions& options)
{
    RunConfig config;
    config.mode = options.mode == "one-period-independent" ? EstimateMode::one_period_independent
                  : options.mode == "one-period-correlated" ? EstimateMode::one_period_correlated
                                                            : EstimateMode::multi_period;

    std::optional<DefaultTimeSeries> data;
    if (!options.builtin.empty()) {
        const DatasetRecord record = builtin_dataset(options.builtin);
        config.dataset = record.name;
        config.title = record.description;
        data = record.series;
    } else if (!options.data.empty()) {
        config.dataset = options.data;
        config.title = options.data;
        data = read_csv_file(options.data);
    } else if (options.pool_size && options.defaults) {
        config.dataset = "single observation";
        config.title = "Single observation";
        data = DefaultTimeSeries({{0, *options.pool_size, *options.defaults}});
    } else {
        throw ValidationError("give --data, --builtin, or --pool-size with --defaults");
    }

    config.pool = options.pool;
    config.multi = options.multi;
    if (options.iterations) {
        config.multi.ml_iterations = *options.iterations;
        config.multi.ucb_iterations = *options.iterations;
    }
    if (!options.levels.empty())
        config.multi.levels = options.levels;
    else if (config.mode != EstimateMode::multi_period)
        config.multi.levels = {0.5, 0.75, 0.9};
    config.constraints = options.constraints;
    if (config.constraints.empty()) {
        config.constraints = config.mode == EstimateMode::one_period_correlated
                                 ? std::vector<double>{0.01, 0.1, 0.25, 1.0}
                                 : std::vector<double>{0.025, 0.05, 0.1, 1.0};
    }
    if (options.rho || options.theta)
        config.correlations = CorrelationParams(options.rho.value_or(0.0), options.theta.value_or(0.0));
    if (config.mode == EstimateMode::multi_period) {
        const std::string& m = options.correlation_mode;
        const bool have = config.correlations.has_value();
        config.estimated_block = m == "estimated" || m == "both" || m == "auto";
        config.predefined_block = m == "predefined" || m == "both" || (m == "auto" && have);
    }
    if (options.timestamp)
        config.timestamp = now_string();

    const EstimateReport report = cmd_estimate(config, *data);
    std::cout << (options.format == "structured" ? format_structured(report) : format_text(report));
    return report.ok() ? 0 : kExitEstimationFailure;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Probability of default estimation for low default portfolios"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML or INI file with option values; flags override it");

    EstimateOptions est;
    CLI::App* estimate = app.add_subcommand("estimate", "Run PD estimators on a default history");
    estimate->configurable();
    estimate->add_option("--mode", est.mode, "Estimation regime")
        ->check(CLI::IsMember({"one-period-independent", "one-period-correlated", "multi-period"}))
        ->capture_default_str();
    auto* data_opt = estimate->add_option("--data", est.data, "CSV file with year,pool_size,defaults");
    auto* builtin_opt = estimate->add_option("--builtin", est.builtin, "Built-in dataset name");
    data_opt->excludes(builtin_opt);
    estimate->add_option("--pool-size", est.pool_size, "Pool size of a single observation")
        ->excludes(data_opt)
        ->excludes(builtin_opt);
    estimate->add_option("--defaults", est.defaults, "Defaults of a single observation");
    estimate->add_flag("--pool", est.pool, "Pool all years into one period (one-period modes)");
    estimate->add_option("--rho", est.rho, "Asset correlation")->check(CLI::Range(0.0, 1.0));
    estimate->add_option("--theta", est.theta, "Time correlation")->check(CLI::Range(0.0, 1.0));
    estimate->add_option("--correlation-mode", est.correlation_mode,
                         "Multi-period blocks: auto adds the pre-defined block when --rho or --theta is given")
        ->check(CLI::IsMember({"auto", "estimated", "predefined", "both"}))
        ->capture_default_str();
    estimate->add_option("--levels", est.levels, "Confidence levels, e.g. 0.5 0.75 0.9")
        ->delimiter(',');
    estimate->add_option("--constraint-u", est.constraints,
                         "One-period uniform prior endpoints u")
        ->delimiter(',');
    estimate->add_option("--iterations", est.iterations,
                         "Simulation iterations per run for ML and upper bounds");
    estimate->add_option("--bayes-iterations", est.multi.bayes_iterations,
                         "Inner simulation iterations per run for Bayesian estimates")
        ->capture_default_str();
    estimate->add_option("--runs", est.multi.runs, "Independent simulation runs")->capture_default_str();
    estimate->add_option("--grid-steps", est.multi.grid_steps, "Outer Bayesian grid steps m")
        ->capture_default_str();
    estimate->add_option("--proxy-u", est.multi.proxy_u,
                         "Grid endpoint used in place of u = 1")
        ->capture_default_str();
    estimate->add_option("--seed", est.multi.seed, "Random seed")->capture_default_str();
    estimate->add_option("--threads", est.multi.threads, "Worker threads, 0 for all cores")
        ->capture_default_str();
    estimate->add_option("--format", est.format, "Output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
    estimate->add_flag("--timestamp", est.timestamp, "Print the current time first");

    int n = 0;
    double lambda = 0.0;
    double rho = 0.0;
    std::string compare_format = "text";
    CLI::App* compare =
        app.add_subcommand("compare-dist", "Binomial vs. correlated binomial probability mass");
    compare->add_option("--n", n, "Portfolio size")->required()->check(CLI::PositiveNumber);
    compare->add_option("--lambda", lambda, "PD")->required()->check(CLI::Range(0.0, 1.0));
    compare->add_option("--rho", rho, "Asset correlation")->required()->check(CLI::Range(0.0, 1.0));
    compare->add_option("--format", compare_format, "Output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();

    std::string datasets_format = "text";
    CLI::App* datasets = app.add_subcommand("datasets", "List built-in datasets");
    datasets->add_option("--format", datasets_format, "Output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*estimate)
            return run_estimate(est);
        if (*compare) {
            const DistributionComparison table = compare_distributions(n, lambda, rho);
            std::cout << (compare_format == "structured" ? to_json(table).dump(2) + "\n"
                                                         : format_text(table));
            return 0;
        }
        if (datasets_format == "structured") {
            nlohmann::json list = nlohmann::json::array();
            for (const std::string& name : builtin_dataset_names()) {
                const DatasetRecord record = builtin_dataset(name);
                list.push_back({{"name", record.name},
                                {"description", record.description},
                                {"periods", record.series.periods()},
                                {"obligor_years", record.series.obligor_years()},
                                {"defaults", record.series.total_defaults()},
                                {"source", record.source}});
            }
            std::cout << list.dump(2) << '\n';
        } else {
            for (const std::string& line : dataset_listing())
                std::cout << line << '\n';
        }
        return 0;
    } catch (const EstimationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEstimationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
