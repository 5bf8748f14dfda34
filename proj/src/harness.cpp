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

#include "stnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "stnet/geometry.hpp"

namespace stnet {

namespace fs = std::filesystem;

const char* to_string(PowerStrategy s) {
    return s == PowerStrategy::FullPower ? "full_power" : "max_min";
}

PowerStrategy strategy_from_string(const std::string& s) {
    if (s == "full_power" || s == "full-power" || s == "full") {
        return PowerStrategy::FullPower;
    }
    if (s == "max_min" || s == "max-min" || s == "maxmin") {
        return PowerStrategy::MaxMinFairness;
    }
    throw std::invalid_argument("unknown power strategy: " + s);
}

const char* to_string(Metric m) {
    switch (m) {
    case Metric::SumRate: return "sum_rate";
    case Metric::MinRate: return "min_rate";
    case Metric::Runtime: return "runtime";
    }
    return "unknown";
}

Metric metric_from_string(const std::string& s) {
    if (s == "sum_rate") return Metric::SumRate;
    if (s == "min_rate") return Metric::MinRate;
    if (s == "runtime") return Metric::Runtime;
    throw std::invalid_argument("unknown metric: " + s);
}

void ExperimentSpec::validate() const {
    scenario.validate();
    if (n_slots < 1) {
        throw std::invalid_argument("experiment: n_slots must be >= 1");
    }
    if (variants.empty() || strategies.empty()) {
        throw std::invalid_argument("experiment: need at least one variant and one strategy");
    }
    if (mc_trials_per_slot < 0) {
        throw std::invalid_argument("experiment: mc_trials_per_slot must be >= 0");
    }
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_rates(const std::vector<double>& rates) {
    std::string out;
    for (size_t i = 0; i < rates.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += fmt_double(rates[i]);
    }
    return out;
}

constexpr const char* kResultsHeader =
    "slot,variant,strategy,failed,sum_rate_mbps,min_rate_mbps,outer_iterations,inner_iterations,"
    "user_rates_mbps";

void write_result_row(std::ostream& out, const SlotResult& r) {
    out << r.slot << ',' << to_string(r.variant) << ',' << to_string(r.strategy) << ','
        << (r.failed ? 1 : 0) << ',' << fmt_double(r.sum_rate_mbps) << ','
        << fmt_double(r.min_rate_mbps) << ',' << r.outer_iterations << ',' << r.inner_iterations
        << ',' << join_rates(r.user_rates_mbps) << '\n';
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

// One slot's work: rebuild statistics, then fill one row per (variant,
// strategy) cell. Only exceptions inside a cell mark that row failed.
std::vector<SlotResult> run_slot(int slot, const ExperimentSpec& spec,
                                 const std::vector<Eigen::Vector3d>& ap_positions,
                                 int mc_threads) {
    const ScenarioConfig& cfg = spec.scenario;
    Rng rng = make_stream(cfg.rng_seed, {kStreamSlot, static_cast<std::uint64_t>(slot)});

    std::vector<SlotResult> rows;
    rows.reserve(spec.variants.size() * spec.strategies.size());

    Geometry geom;
    geom.ap_positions_km = ap_positions;
    geom.user_positions_km = draw_user_positions(cfg, rng);

    const bool with_mc = spec.mc_trials_per_slot > 0;
    ChannelStatistics stats;
    EstimateStatistics est;
    bool stats_ok = true;
    std::string stats_error;
    try {
        stats = build_statistics(cfg, geom, rng, /*with_sampling_cache=*/with_mc);
        est = estimate_stats(stats, cfg.pilot_power(), cfg);
    } catch (const std::exception& e) {
        stats_ok = false;
        stats_error = e.what();
    }

    const std::vector<double> pmax_vec = cfg.max_power_vector();
    const Eigen::Map<const Eigen::VectorXd> pmax(pmax_vec.data(),
                                                 static_cast<Eigen::Index>(pmax_vec.size()));

    for (SystemVariant variant : spec.variants) {
        SinrModel model;
        bool model_ok = stats_ok;
        std::string model_error = stats_error;
        if (stats_ok) {
            try {
                model = build_sinr_model(stats, est, variant, cfg);
            } catch (const std::exception& e) {
                model_ok = false;
                model_error = e.what();
            }
        }

        for (PowerStrategy strategy : spec.strategies) {
            SlotResult row;
            row.slot = slot;
            row.variant = variant;
            row.strategy = strategy;
            if (!model_ok) {
                row.failed = true;
                row.error = model_error;
                rows.push_back(std::move(row));
                continue;
            }
            try {
                Eigen::VectorXd rho;
                if (strategy == PowerStrategy::FullPower) {
                    const auto t0 = std::chrono::steady_clock::now();
                    rho = pmax;
                    // Rate evaluation is the only cost of this strategy.
                    for (int k = 0; k < cfg.num_users; ++k) {
                        (void)closed_form_sinr(k, rho, model);
                    }
                    row.solve_time_s =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
                } else {
                    MaxMinSolution sol = max_min_allocate(model, pmax, cfg.solver);
                    rho = sol.rho;
                    row.solve_time_s = sol.solve_time_s;
                    row.outer_iterations = sol.outer_iterations;
                    row.inner_iterations = sol.inner_iterations;
                }

                row.user_rates_mbps.resize(static_cast<size_t>(cfg.num_users));
                for (int k = 0; k < cfg.num_users; ++k) {
                    double rate;
                    if (with_mc) {
                        rate = monte_carlo_sinr(k, rho, stats, est, mrc_combiner(),
                                                spec.mc_trials_per_slot, rng, variant, cfg,
                                                mc_threads)
                                   .rate_mbps;
                    } else {
                        rate = closed_form_sinr(k, rho, model).rate_mbps;
                    }
                    row.user_rates_mbps[static_cast<size_t>(k)] = rate;
                }
                row.sum_rate_mbps = 0.0;
                row.min_rate_mbps = std::numeric_limits<double>::infinity();
                for (double r : row.user_rates_mbps) {
                    row.sum_rate_mbps += r;
                    row.min_rate_mbps = std::min(row.min_rate_mbps, r);
                }
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
                row.user_rates_mbps.clear();
                row.sum_rate_mbps = 0.0;
                row.min_rate_mbps = 0.0;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

nlohmann::json experiment_summary(const ExperimentSpec& spec,
                                  const std::vector<SlotResult>& rows) {
    nlohmann::json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["config"] = spec.scenario.to_json();
    j["n_slots"] = spec.n_slots;
    j["mc_trials_per_slot"] = spec.mc_trials_per_slot;
    auto& variants = j["variants"] = nlohmann::json::array();
    for (auto v : spec.variants) {
        variants.push_back(to_string(v));
    }
    auto& strategies = j["strategies"] = nlohmann::json::array();
    for (auto s : spec.strategies) {
        strategies.push_back(to_string(s));
    }
    j["rows"] = rows.size();
    j["failed_rows"] = std::count_if(rows.begin(), rows.end(),
                                     [](const SlotResult& r) { return r.failed; });

    nlohmann::json cells = nlohmann::json::object();
    for (auto v : spec.variants) {
        for (auto s : spec.strategies) {
            double sum = 0.0;
            double min_sum = 0.0;
            long outer = 0;
            long inner = 0;
            int n = 0;
            for (const auto& r : rows) {
                if (r.variant == v && r.strategy == s && !r.failed) {
                    sum += r.sum_rate_mbps;
                    min_sum += r.min_rate_mbps;
                    outer += r.outer_iterations;
                    inner += r.inner_iterations;
                    ++n;
                }
            }
            nlohmann::json cell;
            cell["slots"] = n;
            cell["mean_sum_rate_mbps"] = n > 0 ? sum / n : 0.0;
            cell["mean_min_rate_mbps"] = n > 0 ? min_sum / n : 0.0;
            cell["mean_outer_iterations"] = n > 0 ? static_cast<double>(outer) / n : 0.0;
            cell["mean_inner_iterations"] = n > 0 ? static_cast<double>(inner) / n : 0.0;
            cells[std::string(to_string(v)) + "." + to_string(s)] = cell;
        }
    }
    j["aggregates"] = cells;
    return j;
}

} // namespace

std::vector<SlotResult> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const ScenarioConfig& cfg = spec.scenario;

    // Infrastructure is fixed for the whole batch.
    Rng ap_rng = make_stream(cfg.rng_seed, {kStreamApLayout});
    const std::vector<Eigen::Vector3d> ap_positions = draw_ap_positions(cfg, ap_rng);

    const bool writing = !spec.output_dir.empty();
    std::ofstream results_out;
    std::ofstream timings_out;
    if (writing) {
        fs::create_directories(spec.output_dir);
        results_out.open(fs::path(spec.output_dir) / "results.csv");
        timings_out.open(fs::path(spec.output_dir) / "timings.csv");
        if (!results_out || !timings_out) {
            throw std::runtime_error("cannot open output files in " + spec.output_dir);
        }
        results_out << kResultsHeader << '\n';
        timings_out << "slot,variant,strategy,solve_time_s\n";
    }

    // Monte Carlo evaluation parallelizes inside a slot, so slots then run
    // sequentially; closed-form batches parallelize across slots instead.
    const bool with_mc = spec.mc_trials_per_slot > 0;
    long slot_workers = with_mc ? 1
                                : (spec.n_threads > 0
                                       ? spec.n_threads
                                       : static_cast<long>(std::thread::hardware_concurrency()));
    slot_workers = std::clamp<long>(slot_workers, 1, spec.n_slots);
    const int mc_threads = with_mc ? spec.n_threads : 1;

    std::vector<std::vector<SlotResult>> per_slot(static_cast<size_t>(spec.n_slots));
    std::vector<char> done(static_cast<size_t>(spec.n_slots), 0);
    std::mutex flush_mutex;
    int next_flush = 0;

    auto flush_ready = [&]() {
        // Stream completed slots in order so output is reproducible.
        while (next_flush < spec.n_slots && done[static_cast<size_t>(next_flush)]) {
            if (writing) {
                for (const auto& row : per_slot[static_cast<size_t>(next_flush)]) {
                    write_result_row(results_out, row);
                    timings_out << row.slot << ',' << to_string(row.variant) << ','
                                << to_string(row.strategy) << ',' << fmt_double(row.solve_time_s)
                                << '\n';
                }
            }
            ++next_flush;
        }
    };

    std::atomic<int> next_slot{0};
    auto worker = [&] {
        for (;;) {
            const int slot = next_slot.fetch_add(1);
            if (slot >= spec.n_slots) {
                break;
            }
            auto rows = run_slot(slot, spec, ap_positions, mc_threads);
            std::lock_guard<std::mutex> lock(flush_mutex);
            per_slot[static_cast<size_t>(slot)] = std::move(rows);
            done[static_cast<size_t>(slot)] = 1;
            flush_ready();
        }
    };

    if (slot_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(slot_workers));
        for (long w = 0; w < slot_workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::vector<SlotResult> rows;
    rows.reserve(per_slot.size() * spec.variants.size() * spec.strategies.size());
    for (auto& slot_rows : per_slot) {
        for (auto& r : slot_rows) {
            rows.push_back(std::move(r));
        }
    }

    if (writing) {
        results_out.close();
        timings_out.close();
        std::ofstream summary(fs::path(spec.output_dir) / "summary.json");
        summary << experiment_summary(spec, rows).dump(2) << '\n';
    }
    return rows;
}

void write_results_csv(const std::string& path, const std::vector<SlotResult>& rows) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path);
    }
    out << kResultsHeader << '\n';
    for (const auto& r : rows) {
        write_result_row(out, r);
    }
}

std::vector<SlotResult> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != kResultsHeader) {
        throw std::runtime_error(path + ": unrecognized results header");
    }
    std::vector<SlotResult> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 9) {
            throw std::runtime_error(path + ": malformed row: " + line);
        }
        SlotResult r;
        r.slot = std::stoi(fields[0]);
        r.variant = variant_from_string(fields[1]);
        r.strategy = strategy_from_string(fields[2]);
        r.failed = fields[3] == "1";
        r.sum_rate_mbps = std::stod(fields[4]);
        r.min_rate_mbps = std::stod(fields[5]);
        r.outer_iterations = std::stoi(fields[6]);
        r.inner_iterations = std::stol(fields[7]);
        if (!fields[8].empty()) {
            for (const auto& v : split(fields[8], ';')) {
                r.user_rates_mbps.push_back(std::stod(v));
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void merge_timings_csv(const std::string& path, std::vector<SlotResult>& rows) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    std::getline(in, line); // header
    size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 4 || i >= rows.size()) {
            throw std::runtime_error(path + ": timings do not match results");
        }
        if (std::stoi(fields[0]) != rows[i].slot ||
            variant_from_string(fields[1]) != rows[i].variant ||
            strategy_from_string(fields[2]) != rows[i].strategy) {
            throw std::runtime_error(path + ": timings do not match results");
        }
        rows[i].solve_time_s = std::stod(fields[3]);
        ++i;
    }
}

void export_cdf(const std::vector<SlotResult>& rows, Metric metric, const std::string& path,
                std::optional<SystemVariant> variant, std::optional<PowerStrategy> strategy) {
    std::vector<const SlotResult*> selected;
    std::set<int> slots_seen;
    bool duplicate_slot = false;
    for (const auto& r : rows) {
        if (r.failed) {
            continue;
        }
        if (variant && r.variant != *variant) {
            continue;
        }
        if (strategy && r.strategy != *strategy) {
            continue;
        }
        if (!slots_seen.insert(r.slot).second) {
            duplicate_slot = true;
        }
        selected.push_back(&r);
    }
    if (selected.empty()) {
        throw std::invalid_argument("export_cdf: selection is empty");
    }
    if (duplicate_slot) {
        throw std::invalid_argument(
            "export_cdf: selection mixes several variants or strategies; add filters");
    }

    std::vector<double> values;
    values.reserve(selected.size());
    for (const auto* r : selected) {
        switch (metric) {
        case Metric::SumRate: values.push_back(r->sum_rate_mbps); break;
        case Metric::MinRate: values.push_back(r->min_rate_mbps); break;
        case Metric::Runtime: values.push_back(r->solve_time_s); break;
        }
    }
    std::sort(values.begin(), values.end());

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path);
    }
    out << "value,cdf\n";
    const double n = static_cast<double>(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        out << fmt_double(values[i]) << ',' << fmt_double(static_cast<double>(i + 1) / n) << '\n';
    }

    auto percentile = [&values](double q) {
        // Linear interpolation between order statistics.
        const double pos = q * (static_cast<double>(values.size()) - 1.0);
        const size_t lo = static_cast<size_t>(pos);
        const size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= n;

    nlohmann::json summary;
    summary["metric"] = to_string(metric);
    summary["count"] = values.size();
    summary["mean"] = mean;
    summary["median"] = percentile(0.5);
    summary["p5"] = percentile(0.05);
    summary["p95"] = percentile(0.95);
    fs::path sidecar(path);
    sidecar.replace_extension(".summary.json");
    std::ofstream sout(sidecar);
    sout << summary.dump(2) << '\n';
}

std::vector<StrategyComparison> compare_strategies(const std::vector<SlotResult>& rows) {
    std::vector<SystemVariant> variants;
    for (const auto& r : rows) {
        if (std::find(variants.begin(), variants.end(), r.variant) == variants.end()) {
            variants.push_back(r.variant);
        }
    }

    std::vector<StrategyComparison> table;
    for (SystemVariant v : variants) {
        StrategyComparison c;
        c.variant = v;
        double full_min = 0.0, maxmin_min = 0.0, full_time = 0.0, maxmin_time = 0.0;
        int n_full = 0, n_maxmin = 0;
        for (const auto& r : rows) {
            if (r.variant != v || r.failed) {
                continue;
            }
            if (r.strategy == PowerStrategy::FullPower) {
                full_min += r.min_rate_mbps;
                full_time += r.solve_time_s;
                ++n_full;
            } else {
                maxmin_min += r.min_rate_mbps;
                maxmin_time += r.solve_time_s;
                ++n_maxmin;
            }
        }
        if (n_full == 0 || n_maxmin == 0) {
            throw std::invalid_argument("compare_strategies: both strategies must be present for " +
                                        std::string(to_string(v)));
        }
        c.slots = n_full;
        c.mean_fullpower_min_rate_mbps = full_min / n_full;
        c.mean_maxmin_min_rate_mbps = maxmin_min / n_maxmin;
        c.min_rate_ratio = c.mean_fullpower_min_rate_mbps > 0.0
                               ? c.mean_maxmin_min_rate_mbps / c.mean_fullpower_min_rate_mbps
                               : 0.0;
        c.mean_fullpower_solve_time_s = full_time / n_full;
        c.mean_maxmin_solve_time_s = maxmin_time / n_maxmin;
        table.push_back(c);
    }
    return table;
}

void write_comparison(std::ostream& out, const std::vector<StrategyComparison>& table) {
    out << "variant,slots,mean_maxmin_min_rate_mbps,mean_fullpower_min_rate_mbps,min_rate_ratio,"
           "mean_maxmin_solve_time_s,mean_fullpower_solve_time_s\n";
    for (const auto& c : table) {
        out << to_string(c.variant) << ',' << c.slots << ','
            << fmt_double(c.mean_maxmin_min_rate_mbps) << ','
            << fmt_double(c.mean_fullpower_min_rate_mbps) << ',' << fmt_double(c.min_rate_ratio)
            << ',' << fmt_double(c.mean_maxmin_solve_time_s) << ','
            << fmt_double(c.mean_fullpower_solve_time_s) << '\n';
    }
    // Reference operating point for the default scenario, for orientation
    // when reading the table; not asserted anywhere.
    out << "# reference: mean full-power min-rate 1.3 Mbps, max-min gain 3.0x\n";
}

} // namespace stnet
