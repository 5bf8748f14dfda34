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

#include "doctest.h"

#include "stnet/config.hpp"

using namespace stnet;

TEST_CASE("default config is the reference deployment and validates") {
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.num_aps == 40);
    CHECK(cfg.num_users == 20);
    CHECK(cfg.sat_antennas() == 100);
    CHECK(cfg.prelog() == doctest::Approx(0.996).epsilon(1e-12));
    CHECK(cfg.max_power(0) == doctest::Approx(3.16227766).epsilon(1e-8)); // 5 dBW
    CHECK(cfg.pilot_power() == doctest::Approx(0.01).epsilon(1e-12));

    // Setting the pilot field to zero falls back to the data power level.
    cfg.pilot_power_w = 0.0;
    CHECK(cfg.pilot_power() == doctest::Approx(cfg.max_power(0)).epsilon(1e-12));
}

TEST_CASE("noise power follows -174 dBm/Hz plus bandwidth and noise figure") {
    ScenarioConfig cfg; // B = 100 MHz, NF_ap = 7 dB, NF_sat = 1.2 dB
    CHECK(cfg.noise_ap_w() == doctest::Approx(dbm_to_watt(-87.0)).epsilon(1e-12));
    CHECK(cfg.noise_sat_w() == doctest::Approx(dbm_to_watt(-92.8)).epsilon(1e-12));
}

TEST_CASE("default aperture radius matches the boresight gain") {
    ScenarioConfig cfg;
    const double alpha = cfg.aperture_radius();
    const double gain = std::pow(2.0 * kPi * alpha / cfg.wavelength_m(), 2.0);
    CHECK(linear_to_db(gain) == doctest::Approx(cfg.sat_gain_dbi).epsilon(1e-10));
}

TEST_CASE("config invariants are enforced") {
    ScenarioConfig cfg;

    SUBCASE("coherence block must exceed the user count") {
        cfg.coherence_block = cfg.num_users;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("correlation coefficient below one") {
        cfg.correlation_coeff = 1.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("no negative powers") {
        cfg.max_power_w = {-1.0};
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("at least one AP and user") {
        cfg.num_aps = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("per-user vectors sized one or K") {
        cfg.rician_factor = {1.0, 2.0, 3.0};
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("satellite above the ground plane") {
        cfg.sat_position_km[2] = 0.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("JSON round trip preserves the config") {
    ScenarioConfig cfg;
    cfg.num_aps = 7;
    cfg.num_users = 3;
    cfg.rician_factor = {1.0, 2.0, 3.0};
    cfg.max_power_w = {0.5, 1.0, 2.0};
    cfg.rng_seed = 42;
    cfg.solver.inner_tolerance = 1e-8;

    const auto j = cfg.to_json();
    const auto back = ScenarioConfig::from_json(j);
    CHECK(back.num_aps == cfg.num_aps);
    CHECK(back.num_users == cfg.num_users);
    CHECK(back.rician_factor == cfg.rician_factor);
    CHECK(back.max_power_w == cfg.max_power_w);
    CHECK(back.rng_seed == cfg.rng_seed);
    CHECK(back.solver.inner_tolerance == cfg.solver.inner_tolerance);
    CHECK(back.to_json() == j);
}

TEST_CASE("config loader rejects bad input") {
    SUBCASE("schema_version is required") {
        CHECK_THROWS_AS(ScenarioConfig::from_json(nlohmann::json::object()),
                        std::invalid_argument);
    }
    SUBCASE("unknown keys are rejected") {
        nlohmann::json j = {{"schema_version", 1}, {"network", {{"num_apz", 4}}}};
        CHECK_THROWS_AS(ScenarioConfig::from_json(j), std::invalid_argument);
    }
    SUBCASE("max_dbw and max_w are mutually exclusive") {
        nlohmann::json j = {{"schema_version", 1},
                            {"power", {{"max_dbw", 5.0}, {"max_w", 1.0}}}};
        CHECK_THROWS_AS(ScenarioConfig::from_json(j), std::invalid_argument);
    }
    SUBCASE("dBW power conversion") {
        nlohmann::json j = {{"schema_version", 1}, {"power", {{"max_dbw", 0.0}}}};
        const auto cfg = ScenarioConfig::from_json(j);
        CHECK(cfg.max_power(0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
