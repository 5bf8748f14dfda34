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

#include "doctest.h"

#include "stnet/harness.hpp"

using namespace stnet;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec(const std::string& out) {
    ExperimentSpec spec;
    spec.scenario.num_aps = 4;
    spec.scenario.num_users = 3;
    spec.scenario.sat_array_h = 2;
    spec.scenario.sat_array_v = 2;
    spec.scenario.rng_seed = 5;
    spec.n_slots = 3;
    spec.output_dir = out;
    return spec;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SlotResult make_row(int slot, SystemVariant v, PowerStrategy s, double min_rate, double sum_rate,
                    double time = 0.01) {
    SlotResult r;
    r.slot = slot;
    r.variant = v;
    r.strategy = s;
    r.user_rates_mbps = {min_rate, sum_rate - min_rate};
    r.min_rate_mbps = min_rate;
    r.sum_rate_mbps = sum_rate;
    r.solve_time_s = time;
    return r;
}

} // namespace

TEST_CASE("experiment produces one row per slot, variant and strategy") {
    const std::string out = "tmp_harness_rows";
    fs::remove_all(out);
    const auto rows = run_experiment(small_spec(out));
    CHECK(rows.size() == 3u * 3u * 2u);
    for (const auto& r : rows) {
        CHECK_FALSE(r.failed);
        REQUIRE(r.user_rates_mbps.size() == 3);
        double sum = 0.0;
        double mn = r.user_rates_mbps[0];
        for (double v : r.user_rates_mbps) {
            sum += v;
            mn = std::min(mn, v);
        }
        CHECK(r.sum_rate_mbps == doctest::Approx(sum).epsilon(1e-12));
        CHECK(r.min_rate_mbps == doctest::Approx(mn).epsilon(1e-12));
    }
    // Max-min rows record their iteration counts.
    for (const auto& r : rows) {
        if (r.strategy == PowerStrategy::MaxMinFairness && !r.failed) {
            CHECK(r.outer_iterations > 0);
        }
    }
    fs::remove_all(out);
}

TEST_CASE("rerunning an experiment reproduces results.csv byte for byte") {
    const std::string out_a = "tmp_harness_a";
    const std::string out_b = "tmp_harness_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);

    auto spec = small_spec(out_a);
    spec.n_slots = 2;
    run_experiment(spec);
    spec.output_dir = out_b;
    run_experiment(spec);

    CHECK(slurp(fs::path(out_a) / "results.csv") == slurp(fs::path(out_b) / "results.csv"));
    CHECK(slurp(fs::path(out_a) / "summary.json") == slurp(fs::path(out_b) / "summary.json"));
    fs::remove_all(out_a);
    fs::remove_all(out_b);
}

TEST_CASE("thread count does not change the results") {
    const std::string out_a = "tmp_harness_t1";
    const std::string out_b = "tmp_harness_t4";
    fs::remove_all(out_a);
    fs::remove_all(out_b);

    auto spec = small_spec(out_a);
    spec.n_slots = 5;
    spec.n_threads = 1;
    run_experiment(spec);
    spec.output_dir = out_b;
    spec.n_threads = 4;
    run_experiment(spec);

    CHECK(slurp(fs::path(out_a) / "results.csv") == slurp(fs::path(out_b) / "results.csv"));
    fs::remove_all(out_a);
    fs::remove_all(out_b);
}

TEST_CASE("Monte Carlo rate evaluation stays close to the closed form") {
    const std::string out_a = "tmp_harness_mc";
    const std::string out_b = "tmp_harness_mc2";
    fs::remove_all(out_a);
    fs::remove_all(out_b);

    auto spec = small_spec(out_a);
    spec.n_slots = 1;
    spec.variants = {SystemVariant::SpaceTerrestrial};
    spec.strategies = {PowerStrategy::FullPower};
    const auto closed = run_experiment(spec);

    spec.mc_trials_per_slot = 20000;
    spec.output_dir = out_b;
    const auto mc = run_experiment(spec);
    REQUIRE(mc.size() == closed.size());
    for (size_t i = 0; i < mc.size(); ++i) {
        CHECK(mc[i].sum_rate_mbps ==
              doctest::Approx(closed[i].sum_rate_mbps).epsilon(0.05));
    }

    // Deterministic under rerun as well.
    fs::remove_all(out_b);
    const auto mc2 = run_experiment(spec);
    CHECK(mc2[0].sum_rate_mbps == mc[0].sum_rate_mbps);
    fs::remove_all(out_a);
    fs::remove_all(out_b);
}

TEST_CASE("results CSV round trip") {
    const std::string out = "tmp_harness_rt";
    fs::remove_all(out);
    auto spec = small_spec(out);
    spec.n_slots = 2;
    const auto rows = run_experiment(spec);

    const auto loaded = read_results_csv((fs::path(out) / "results.csv").string());
    REQUIRE(loaded.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(loaded[i].slot == rows[i].slot);
        CHECK(loaded[i].variant == rows[i].variant);
        CHECK(loaded[i].strategy == rows[i].strategy);
        CHECK(loaded[i].sum_rate_mbps == rows[i].sum_rate_mbps);
        CHECK(loaded[i].user_rates_mbps == rows[i].user_rates_mbps);
    }

    auto timed = loaded;
    merge_timings_csv((fs::path(out) / "timings.csv").string(), timed);
    for (size_t i = 0; i < timed.size(); ++i) {
        CHECK(timed[i].solve_time_s == doctest::Approx(rows[i].solve_time_s).epsilon(1e-9));
    }
    fs::remove_all(out);
}

TEST_CASE("empirical CDF of four distinct values") {
    std::vector<SlotResult> rows;
    const double values[] = {3.0, 1.0, 4.0, 2.0};
    for (int i = 0; i < 4; ++i) {
        rows.push_back(make_row(i, SystemVariant::SpaceOnly, PowerStrategy::FullPower, values[i],
                                values[i]));
    }
    const std::string path = "tmp_cdf.csv";
    export_cdf(rows, Metric::MinRate, path);
    const std::string text = slurp(path);
    CHECK(text == "value,cdf\n1,0.25\n2,0.5\n3,0.75\n4,1\n");

    const std::string summary = slurp("tmp_cdf.summary.json");
    const auto j = nlohmann::json::parse(summary);
    CHECK(j.at("mean").get<double>() == doctest::Approx(2.5));
    CHECK(j.at("median").get<double>() == doctest::Approx(2.5));
    fs::remove("tmp_cdf.csv");
    fs::remove("tmp_cdf.summary.json");
}

TEST_CASE("constant metric gives a vertical CDF") {
    std::vector<SlotResult> rows;
    for (int i = 0; i < 3; ++i) {
        rows.push_back(make_row(i, SystemVariant::SpaceOnly, PowerStrategy::FullPower, 7.0, 7.0));
    }
    const std::string path = "tmp_cdf_const.csv";
    export_cdf(rows, Metric::SumRate, path);
    const std::string text = slurp(path);
    CHECK(text.find("7,0.33333333333333331\n") != std::string::npos);
    CHECK(text.rfind("7,1\n") != std::string::npos);
    fs::remove(path);
    fs::remove("tmp_cdf_const.summary.json");
}

TEST_CASE("CDF export errors") {
    std::vector<SlotResult> rows;
    SUBCASE("empty selection") {
        CHECK_THROWS_AS(export_cdf(rows, Metric::MinRate, "never_written.csv"),
                        std::invalid_argument);
    }
    SUBCASE("ambiguous selection requires filters") {
        rows.push_back(make_row(0, SystemVariant::SpaceOnly, PowerStrategy::FullPower, 1, 1));
        rows.push_back(
            make_row(0, SystemVariant::TerrestrialOnly, PowerStrategy::FullPower, 2, 2));
        CHECK_THROWS_AS(export_cdf(rows, Metric::MinRate, "never_written.csv"),
                        std::invalid_argument);
        // With a variant filter the export succeeds.
        export_cdf(rows, Metric::MinRate, "tmp_cdf_f.csv", SystemVariant::SpaceOnly);
        fs::remove("tmp_cdf_f.csv");
        fs::remove("tmp_cdf_f.summary.json");
    }
}

TEST_CASE("exported CDFs are non-decreasing and end at one") {
    const std::string out = "tmp_harness_cdfprop";
    fs::remove_all(out);
    auto spec = small_spec(out);
    spec.n_slots = 6;
    const auto rows = run_experiment(spec);
    const std::string path = "tmp_cdf_prop.csv";
    export_cdf(rows, Metric::SumRate, path, SystemVariant::SpaceTerrestrial,
               PowerStrategy::FullPower);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line); // header
    double prev_v = -1.0;
    double prev_c = 0.0;
    double last_c = 0.0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double v = std::stod(line.substr(0, comma));
        const double c = std::stod(line.substr(comma + 1));
        CHECK(v >= prev_v);
        CHECK(c > prev_c);
        prev_v = v;
        prev_c = c;
        last_c = c;
    }
    CHECK(last_c == 1.0);
    fs::remove(path);
    fs::remove("tmp_cdf_prop.summary.json");
    fs::remove_all(out);
}

TEST_CASE("strategy comparison") {
    std::vector<SlotResult> rows;
    for (int slot = 0; slot < 4; ++slot) {
        rows.push_back(make_row(slot, SystemVariant::SpaceTerrestrial, PowerStrategy::FullPower,
                                1.0, 10.0, 0.001));
        rows.push_back(make_row(slot, SystemVariant::SpaceTerrestrial,
                                PowerStrategy::MaxMinFairness, 3.0, 9.0, 0.004));
    }
    const auto table = compare_strategies(rows);
    REQUIRE(table.size() == 1);
    CHECK(table[0].variant == SystemVariant::SpaceTerrestrial);
    CHECK(table[0].mean_fullpower_min_rate_mbps == doctest::Approx(1.0));
    CHECK(table[0].mean_maxmin_min_rate_mbps == doctest::Approx(3.0));
    CHECK(table[0].min_rate_ratio == doctest::Approx(3.0));
    CHECK(table[0].mean_maxmin_solve_time_s == doctest::Approx(0.004));

    SUBCASE("identical strategies give ratio one") {
        std::vector<SlotResult> same;
        for (int slot = 0; slot < 2; ++slot) {
            same.push_back(
                make_row(slot, SystemVariant::SpaceOnly, PowerStrategy::FullPower, 2.0, 4.0));
            same.push_back(
                make_row(slot, SystemVariant::SpaceOnly, PowerStrategy::MaxMinFairness, 2.0, 4.0));
        }
        CHECK(compare_strategies(same)[0].min_rate_ratio == doctest::Approx(1.0));
    }
    SUBCASE("missing strategy is an error") {
        std::vector<SlotResult> only_full;
        only_full.push_back(
            make_row(0, SystemVariant::SpaceOnly, PowerStrategy::FullPower, 1.0, 1.0));
        CHECK_THROWS_AS(compare_strategies(only_full), std::invalid_argument);
    }
}
