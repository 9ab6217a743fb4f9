// osim command-line front end: single runs, seed batches, paired policy
// comparisons and invariant checks over one config file.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "osim/config.hpp"
#include "osim/csv.hpp"
#include "osim/engine.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitProperty = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_warnings(const osim::LoadedConfig& loaded) {
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<std::uint64_t> resolve_seeds(const osim::LoadedConfig& loaded,
                                         const std::string& seeds_arg,
                                         std::uint64_t base_seed) {
    if (seeds_arg.empty()) {
        if (loaded.seeds.size() > 1) return loaded.seeds;
        return {base_seed};
    }
    std::vector<std::uint64_t> seeds;
    if (seeds_arg.find(',') != std::string::npos) {
        std::stringstream ss(seeds_arg);
        std::string tok;
        while (std::getline(ss, tok, ','))
            seeds.push_back(std::stoull(tok));
    } else {
        // A single integer is a count: base_seed, base_seed+1, ...
        const std::uint64_t count = std::stoull(seeds_arg);
        if (count == 0) throw osim::ConfigError("config error: --seeds count must be positive");
        for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(base_seed + i);
    }
    return seeds;
}

int cmd_run(const std::string& config_path, std::int64_t seed_override,
            const std::string& out_dir_override, int parallel_override, bool events_flag,
            const std::string& dump_scenario, const std::string& dump_edges,
            const std::string& dump_population) {
    osim::LoadedConfig loaded = osim::load_config_file(config_path);
    print_warnings(loaded);
    if (seed_override >= 0) loaded.config.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_dir_override.empty()) loaded.out_dir = out_dir_override;
    if (parallel_override > 0) loaded.parallel = parallel_override;
    if (events_flag) loaded.events = true;

    osim::ExecOptions opts;
    opts.workers = loaded.parallel;
    const osim::RunResult result = osim::run(loaded.config, opts);

    std::filesystem::create_directories(loaded.out_dir);
    const std::filesystem::path dir(loaded.out_dir);
    write_file(dir / "metrics.csv", osim::metrics_csv(result.frames));
    write_file(dir / "summary.json", osim::summary_json(result.summary));
    if (loaded.events) write_file(dir / "events.csv", osim::events_csv(result.events));

    if (!dump_scenario.empty())
        write_file(dump_scenario, osim::scenario_csv(osim::build_piecewise_scenario(loaded.config.scenario)));
    if (!dump_edges.empty() || !dump_population.empty()) {
        const osim::RngStreams streams(loaded.config.seed);
        if (!dump_edges.empty()) {
            auto rng = streams.sequential(osim::Stream::Network);
            const auto graph = osim::generate_watts_strogatz(
                loaded.config.population.n_customers, loaded.config.network.k,
                loaded.config.network.beta, rng);
            write_file(dump_edges, osim::edges_csv(graph));
        }
        if (!dump_population.empty()) {
            auto rng = streams.sequential(osim::Stream::Population);
            const auto pop = osim::sample_population(loaded.config.population, loaded.config.merchants,
                                                     loaded.config.substitution.adoption_prob, rng);
            write_file(dump_population, osim::population_csv(pop.customer_params));
        }
    }

    std::cout << osim::summary_json(result.summary);
    return kExitOk;
}

int cmd_batch(const std::string& config_path, const std::string& seeds_arg,
              std::int64_t seed_override, const std::string& out_dir_override,
              int parallel_override) {
    osim::LoadedConfig loaded = osim::load_config_file(config_path);
    print_warnings(loaded);
    if (seed_override >= 0) loaded.config.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_dir_override.empty()) loaded.out_dir = out_dir_override;
    if (parallel_override > 0) loaded.parallel = parallel_override;

    const auto seeds = resolve_seeds(loaded, seeds_arg, loaded.config.seed);
    osim::ExecOptions opts;
    opts.workers = loaded.parallel;
    const osim::BatchResult batch = osim::run_batch(loaded.config, seeds, opts);

    std::filesystem::create_directories(loaded.out_dir);
    const std::filesystem::path dir(loaded.out_dir);
    write_file(dir / "batch_summaries.csv", osim::batch_csv(batch.summaries));
    write_file(dir / "batch_stats.csv", osim::batch_stats_csv(batch));
    std::cout << osim::batch_stats_csv(batch);
    return kExitOk;
}

int cmd_paired(const std::string& config_path, const std::vector<std::string>& variant,
               const std::string& seeds_arg, std::int64_t seed_override,
               const std::string& out_dir_override, int parallel_override) {
    const std::string base_text = read_file(config_path);
    osim::LoadedConfig base = osim::parse_config_json(base_text);
    print_warnings(base);
    if (seed_override >= 0) base.config.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_dir_override.empty()) base.out_dir = out_dir_override;
    if (parallel_override > 0) base.parallel = parallel_override;

    const std::string variant_text = osim::apply_variant(base_text, variant);
    const osim::LoadedConfig var = osim::parse_config_json(variant_text);

    const auto seeds = resolve_seeds(base, seeds_arg, base.config.seed);
    osim::ExecOptions opts;
    opts.workers = base.parallel;
    const osim::PairedResult paired = osim::run_paired(base.config, var.config, seeds, opts);

    std::filesystem::create_directories(base.out_dir);
    const std::filesystem::path dir(base.out_dir);
    write_file(dir / "paired_deltas.csv", osim::paired_csv(paired));

    std::ostringstream medians;
    medians << "median_peak_avoidance_delta=" << osim::format_double(paired.median_peak_avoidance_delta)
            << "\nmedian_peak_outflow_delta=" << osim::format_double(paired.median_peak_outflow_delta)
            << "\nmedian_cumulative_outflow_delta="
            << osim::format_double(paired.median_cumulative_outflow_delta) << "\n";
    write_file(dir / "paired_medians.txt", medians.str());
    std::cout << medians.str();
    return kExitOk;
}

int cmd_check(const std::string& config_path, int parallel_override) {
    osim::LoadedConfig loaded = osim::load_config_file(config_path);
    print_warnings(loaded);
    if (parallel_override > 0) loaded.parallel = parallel_override;

    osim::ExecOptions opts;
    opts.workers = loaded.parallel;
    const osim::RunResult result = osim::run(loaded.config, opts);
    const osim::RunSummary& s = result.summary;

    int failures = 0;
    auto report = [&](const char* name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " — " << detail << "\n";
        if (!ok) ++failures;
    };

    report("state-ranges", s.audit.range_violations == 0,
           std::to_string(s.audit.range_violations) + " T/C/R range violations");
    report("mode-fraction-sum", s.audit.frame_sum_violations == 0,
           std::to_string(s.audit.frame_sum_violations) + " frames off unity");
    report("conservation", s.conservation_residual_rel <= 1e-9,
           "relative residual " + osim::format_double(s.conservation_residual_rel));
    report("eligibility-necessity", s.audit.eligibility_violations == 0,
           std::to_string(s.audit.eligibility_violations) + " ineligible withdrawals");
    report("balance-monotone", s.audit.balance_violations == 0,
           std::to_string(s.audit.balance_violations) + " balance violations");
    report("broadcast-lag", s.audit.broadcast_lag_violations == 0,
           std::to_string(s.audit.broadcast_lag_violations) +
               " merchants cleared broadcast before operations");

    bool cum_ok = true;
    double prev = 0.0;
    for (const auto& f : result.frames) {
        if (f.cumulative_outflow < prev - 1e-12) cum_ok = false;
        prev = f.cumulative_outflow;
    }
    report("cumulative-outflow-monotone", cum_ok, "per-frame running sum");

    double min_ps = 1.0;
    for (const auto& f : result.frames) min_ps = std::min(min_ps, f.p_success);
    if (min_ps >= 0.99) {
        report("no-outage-null", s.withdrawal_events == 0,
               std::to_string(s.withdrawal_events) + " withdrawal events under a calm scenario");
    } else {
        std::cout << "SKIP no-outage-null — scenario contains an outage (min p_success " +
                         osim::format_double(min_ps) + ")\n";
    }

    return failures == 0 ? kExitOk : kExitProperty;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"osim — agent-based simulator of payment outages, trust erosion and withdrawal pressure"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string seeds_arg;
    std::int64_t seed_override = -1;
    int parallel = 0;
    bool events = false;
    std::string dump_scenario, dump_edges, dump_population;
    std::vector<std::string> variant;

    auto add_common = [&](CLI::App* sub, bool with_seed) {
        sub->add_option("--config", config_path, "Config file (JSON)")->required();
        sub->add_option("--out", out_dir, "Output directory (default from config)");
        sub->add_option("--parallel", parallel, "Worker threads (outputs are independent of this)");
        if (with_seed) sub->add_option("--seed", seed_override, "Master seed override");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Execute a single run");
    add_common(run_cmd, true);
    run_cmd->add_flag("--events", events, "Also write the withdrawal event log");
    run_cmd->add_option("--dump-scenario", dump_scenario, "Write the scenario timeline CSV");
    run_cmd->add_option("--dump-edges", dump_edges, "Write the social graph edge list CSV");
    run_cmd->add_option("--dump-population", dump_population, "Write the sampled population CSV");

    CLI::App* batch_cmd = app.add_subcommand("batch", "Run a seed sweep");
    add_common(batch_cmd, true);
    batch_cmd->add_option("--seeds", seeds_arg, "Seed count (N) or explicit list (a,b,c)");

    CLI::App* paired_cmd = app.add_subcommand("paired", "Common-random-number policy comparison");
    add_common(paired_cmd, true);
    paired_cmd->add_option("--seeds", seeds_arg, "Seed count (N) or explicit list (a,b,c)");
    paired_cmd->add_option("--variant", variant, "Policy overrides, KEY=VALUE (substitution.*, merchants.comm_quality)");

    CLI::App* check_cmd = app.add_subcommand("check", "Run invariant audits on the configured scenario");
    add_common(check_cmd, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(config_path, seed_override, out_dir, parallel, events, dump_scenario,
                           dump_edges, dump_population);
        if (batch_cmd->parsed())
            return cmd_batch(config_path, seeds_arg, seed_override, out_dir, parallel);
        if (paired_cmd->parsed())
            return cmd_paired(config_path, variant, seeds_arg, seed_override, out_dir, parallel);
        if (check_cmd->parsed()) return cmd_check(config_path, parallel);
    } catch (const osim::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
