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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stnet/config.hpp"
#include "stnet/power_control.hpp"
#include "stnet/sinr.hpp"

namespace stnet {

enum class PowerStrategy { FullPower, MaxMinFairness };

const char* to_string(PowerStrategy s);
PowerStrategy strategy_from_string(const std::string& s);

// A batch experiment: n_slots independent time slots. Each slot redraws the
// user positions and shadow fading (AP and satellite placement stay fixed),
// rebuilds the statistics and evaluates every (variant, strategy) cell.
struct ExperimentSpec {
    ScenarioConfig scenario;
    int n_slots = 1000;
    std::vector<SystemVariant> variants{SystemVariant::SpaceTerrestrial,
                                        SystemVariant::TerrestrialOnly, SystemVariant::SpaceOnly};
    std::vector<PowerStrategy> strategies{PowerStrategy::FullPower,
                                          PowerStrategy::MaxMinFairness};
    long mc_trials_per_slot = 0; // 0 = closed-form rate evaluation
    std::string output_dir;     // empty = keep results in memory only
    int n_threads = 0;          // 0 = all hardware threads

    void validate() const;
};

struct SlotResult {
    int slot = 0;
    SystemVariant variant = SystemVariant::SpaceTerrestrial;
    PowerStrategy strategy = PowerStrategy::FullPower;
    std::vector<double> user_rates_mbps;
    double sum_rate_mbps = 0.0;
    double min_rate_mbps = 0.0;
    double solve_time_s = 0.0; // power-allocation solve only
    int outer_iterations = 0;
    long inner_iterations = 0;
    bool failed = false;
    std::string error;
};

// Runs the batch. Slots execute in parallel on independent RNG streams
// derived from (seed, slot); rows are streamed to output_dir in slot order
// as results.csv (deterministic) and timings.csv (wall-clock, rerun-
// dependent by nature), plus a summary.json with aggregate statistics.
std::vector<SlotResult> run_experiment(const ExperimentSpec& spec);

void write_results_csv(const std::string& path, const std::vector<SlotResult>& rows);
std::vector<SlotResult> read_results_csv(const std::string& path);
// Merges solve times from timings.csv into already-loaded rows.
void merge_timings_csv(const std::string& path, std::vector<SlotResult>& rows);

enum class Metric { SumRate, MinRate, Runtime };
const char* to_string(Metric m);
Metric metric_from_string(const std::string& s);

// Writes the empirical CDF of one metric as a (value, cdf) CSV, one row per
// slot, plus a <path with .summary.json extension> sidecar holding mean,
// median and the 5th/95th percentiles. The selection must resolve to one
// row per slot; use the filters when several variants or strategies are
// present in the results.
void export_cdf(const std::vector<SlotResult>& rows, Metric metric, const std::string& path,
                std::optional<SystemVariant> variant = std::nullopt,
                std::optional<PowerStrategy> strategy = std::nullopt);

struct StrategyComparison {
    SystemVariant variant;
    double mean_maxmin_min_rate_mbps = 0.0;
    double mean_fullpower_min_rate_mbps = 0.0;
    double min_rate_ratio = 0.0;
    double mean_maxmin_solve_time_s = 0.0;
    double mean_fullpower_solve_time_s = 0.0;
    int slots = 0;
};

// Per-variant comparison of the two power strategies over all slots.
std::vector<StrategyComparison> compare_strategies(const std::vector<SlotResult>& rows);
void write_comparison(std::ostream& out, const std::vector<StrategyComparison>& table);

} // namespace stnet
