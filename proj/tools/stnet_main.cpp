// stnet - space-terrestrial uplink network simulator
// Copyright 2026 the stnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stnet/geometry.hpp"
#include "stnet/harness.hpp"
#include "stnet/power_control.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<stnet::SystemVariant> parse_variants(const std::vector<std::string>& tokens) {
    std::vector<stnet::SystemVariant> out;
    for (const auto& t : tokens) {
        out.push_back(stnet::variant_from_string(t));
    }
    return out;
}

std::vector<stnet::PowerStrategy> parse_strategies(const std::vector<std::string>& tokens) {
    std::vector<stnet::PowerStrategy> out;
    for (const auto& t : tokens) {
        out.push_back(stnet::strategy_from_string(t));
    }
    return out;
}

// Accepts either a results.csv path or the directory that contains it.
fs::path resolve_results(const std::string& input) {
    fs::path p(input);
    if (fs::is_directory(p)) {
        return p / "results.csv";
    }
    return p;
}

int cmd_run(const std::string& config_path, int slots, std::optional<std::uint64_t> seed,
            const std::vector<std::string>& variant_tokens,
            const std::vector<std::string>& strategy_tokens, long mc_trials, int threads,
            const std::string& out_dir) {
    stnet::ExperimentSpec spec;
    spec.scenario = stnet::ScenarioConfig::from_json_file(config_path);
    if (seed) {
        spec.scenario.rng_seed = *seed;
    }
    spec.n_slots = slots;
    if (!variant_tokens.empty()) {
        spec.variants = parse_variants(variant_tokens);
    }
    if (!strategy_tokens.empty()) {
        spec.strategies = parse_strategies(strategy_tokens);
    }
    spec.mc_trials_per_slot = mc_trials;
    spec.n_threads = threads;
    spec.output_dir = out_dir;

    const auto rows = stnet::run_experiment(spec);
    long failed = 0;
    for (const auto& r : rows) {
        if (r.failed) {
            ++failed;
            std::cerr << "slot " << r.slot << " " << stnet::to_string(r.variant) << "/"
                      << stnet::to_string(r.strategy) << " failed: " << r.error << "\n";
        }
    }
    std::cout << rows.size() << " rows written to " << out_dir << " (" << failed << " failed)\n";
    return failed == 0 ? 0 : 1;
}

int cmd_export_cdf(const std::string& input, const std::string& metric_token,
                   const std::string& output, const std::string& variant_token,
                   const std::string& strategy_token) {
    const fs::path results_path = resolve_results(input);
    auto rows = stnet::read_results_csv(results_path.string());
    const stnet::Metric metric = stnet::metric_from_string(metric_token);
    if (metric == stnet::Metric::Runtime) {
        stnet::merge_timings_csv((results_path.parent_path() / "timings.csv").string(), rows);
    }
    std::optional<stnet::SystemVariant> variant;
    if (!variant_token.empty()) {
        variant = stnet::variant_from_string(variant_token);
    }
    std::optional<stnet::PowerStrategy> strategy;
    if (!strategy_token.empty()) {
        strategy = stnet::strategy_from_string(strategy_token);
    }
    stnet::export_cdf(rows, metric, output, variant, strategy);
    std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_compare(const std::string& input, const std::string& output) {
    const fs::path results_path = resolve_results(input);
    auto rows = stnet::read_results_csv(results_path.string());
    const fs::path timings = results_path.parent_path() / "timings.csv";
    if (fs::exists(timings)) {
        stnet::merge_timings_csv(timings.string(), rows);
    }
    const auto table = stnet::compare_strategies(rows);
    if (output.empty()) {
        stnet::write_comparison(std::cout, table);
    } else {
        std::ofstream out(output);
        if (!out) {
            throw std::runtime_error("cannot open " + output);
        }
        stnet::write_comparison(out, table);
        std::cout << "wrote " << output << "\n";
    }
    return 0;
}

// Solves one slot's max-min allocation and prints the JSON report.
int cmd_solve(const std::string& config_path, const std::string& variant_token, int slot,
              const std::string& sinr_csv) {
    const auto cfg = stnet::ScenarioConfig::from_json_file(config_path);
    const auto variant = stnet::variant_from_string(variant_token);

    stnet::Rng ap_rng = stnet::make_stream(cfg.rng_seed, {stnet::kStreamApLayout});
    stnet::Geometry geom;
    geom.ap_positions_km = stnet::draw_ap_positions(cfg, ap_rng);
    stnet::Rng slot_rng =
        stnet::make_stream(cfg.rng_seed, {stnet::kStreamSlot, static_cast<std::uint64_t>(slot)});
    geom.user_positions_km = stnet::draw_user_positions(cfg, slot_rng);

    const auto stats = stnet::build_statistics(cfg, geom, slot_rng, /*with_sampling_cache=*/false);
    const auto est = stnet::estimate_stats(stats, cfg.pilot_power(), cfg);
    const auto model = stnet::build_sinr_model(stats, est, variant, cfg);

    const auto pmax_vec = cfg.max_power_vector();
    const Eigen::Map<const Eigen::VectorXd> pmax(pmax_vec.data(),
                                                 static_cast<Eigen::Index>(pmax_vec.size()));
    const auto sol = stnet::max_min_allocate(model, pmax, cfg.solver);
    std::cout << stnet::solution_report(sol).dump(2) << "\n";

    if (!sinr_csv.empty()) {
        std::vector<stnet::SinrBreakdown> breakdown;
        for (int k = 0; k < cfg.num_users; ++k) {
            breakdown.push_back(stnet::closed_form_sinr(k, sol.rho, model));
        }
        std::ofstream out(sinr_csv);
        if (!out) {
            throw std::runtime_error("cannot open " + sinr_csv);
        }
        stnet::write_sinr_csv(out, breakdown, variant);
    }
    return sol.status == stnet::MaxMinSolution::Status::Converged ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"space-terrestrial uplink network simulator"};
    app.require_subcommand(1);

    // run
    std::string run_config;
    int run_slots = 1000;
    std::optional<std::uint64_t> run_seed;
    std::vector<std::string> run_variants;
    std::vector<std::string> run_strategies;
    long run_mc_trials = 0;
    int run_threads = 0;
    std::string run_out;
    auto* run = app.add_subcommand("run", "run a batch of time slots");
    run->add_option("config", run_config, "scenario config (JSON)")->required();
    run->add_option("--slots", run_slots, "number of time slots");
    run->add_option("--seed", run_seed, "override the config RNG seed");
    run->add_option("--variants", run_variants,
                    "system variants (space_terrestrial,terrestrial_only,space_only)")
        ->delimiter(',');
    run->add_option("--strategies", run_strategies, "power strategies (full_power,max_min)")
        ->delimiter(',');
    run->add_option("--mc-trials", run_mc_trials,
                    "Monte Carlo trials per rate evaluation (0 = closed form)");
    run->add_option("--threads", run_threads, "worker threads (0 = hardware)");
    run->add_option("--out", run_out, "output directory")->required();

    // export-cdf
    std::string cdf_input, cdf_metric, cdf_output, cdf_variant, cdf_strategy;
    auto* cdf = app.add_subcommand("export-cdf", "export the empirical CDF of a metric");
    cdf->add_option("--input", cdf_input, "results directory or results.csv")->required();
    cdf->add_option("--metric", cdf_metric, "sum_rate, min_rate or runtime")->required();
    cdf->add_option("--output", cdf_output, "output CSV path")->required();
    cdf->add_option("--variant", cdf_variant, "restrict to one system variant");
    cdf->add_option("--strategy", cdf_strategy, "restrict to one power strategy");

    // compare
    std::string cmp_input, cmp_output;
    auto* cmp = app.add_subcommand("compare", "compare power strategies per variant");
    cmp->add_option("--input", cmp_input, "results directory or results.csv")->required();
    cmp->add_option("--output", cmp_output, "output CSV path (default: stdout)");

    // solve
    std::string solve_config, solve_variant = "space_terrestrial", solve_sinr_csv;
    int solve_slot = 0;
    auto* solve = app.add_subcommand("solve", "solve one slot's max-min allocation");
    solve->add_option("config", solve_config, "scenario config (JSON)")->required();
    solve->add_option("--variant", solve_variant, "system variant");
    solve->add_option("--slot", solve_slot, "slot index (selects the user drop)");
    solve->add_option("--sinr-csv", solve_sinr_csv, "also write the per-user SINR breakdown");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(run_config, run_slots, run_seed, run_variants, run_strategies,
                           run_mc_trials, run_threads, run_out);
        }
        if (cdf->parsed()) {
            return cmd_export_cdf(cdf_input, cdf_metric, cdf_output, cdf_variant, cdf_strategy);
        }
        if (cmp->parsed()) {
            return cmd_compare(cmp_input, cmp_output);
        }
        if (solve->parsed()) {
            return cmd_solve(solve_config, solve_variant, solve_slot, solve_sinr_csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
