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

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "stnet/units.hpp"

namespace stnet {

inline constexpr int kConfigSchemaVersion = 1;

struct SolverOptions {
    double inner_tolerance = 1e-6;     // relative total-power change between iterations
    double outer_tolerance_rel = 1e-3; // bisection interval width, relative to the SINR upper bound
    int max_inner_iterations = 10000;
};

// Full deployment description: network sizes, geometry, radio parameters,
// channel model knobs, power budgets and solver tolerances. Immutable once
// validated; every simulation entry point takes it by const reference.
struct ScenarioConfig {
    // network size
    int num_aps = 40;   // M
    int num_users = 20; // K
    int sat_array_h = 10; // N_H, horizontal elements of the satellite array
    int sat_array_v = 10; // N_V, vertical elements

    // deployment geometry
    double area_side_km = std::sqrt(20.0); // square coverage area
    std::array<double, 3> sat_position_km{300.0, 300.0, 400.0};
    double ap_height_m = 10.0;
    double user_height_m = 1.5;

    // radio
    double carrier_freq_ghz = 20.0;
    double bandwidth_mhz = 100.0;
    int coherence_block = 5000; // tau_c, subcarriers per coherence block
    double noise_figure_ap_db = 7.0;
    double noise_figure_sat_db = 1.2;

    // antennas
    double ap_gain_dbi = 5.0;
    double user_gain_dbi = 5.0;
    double sat_gain_dbi = 26.9;
    double antenna_spacing_h = 0.5;  // [wavelengths]
    double antenna_spacing_v = 0.5;  // [wavelengths]
    double aperture_radius_m = 0.0;  // 0 = derive from sat_gain_dbi

    // channel model
    std::vector<double> rician_factor{3.0}; // linear; size 1 (shared) or K
    double correlation_coeff = 0.5;         // r in [0,1), exponential correlation
    double shadow_std_terrestrial_db = 8.0;
    double shadow_std_sat_db = 1.0;

    // power budgets [W]
    std::vector<double> max_power_w{dbw_to_watt(5.0)}; // size 1 (shared) or K
    double pilot_power_w = 0.01;                       // 0 = same as max power

    std::uint64_t rng_seed = 1;
    SolverOptions solver;

    // ---- derived quantities ----
    int sat_antennas() const { return sat_array_h * sat_array_v; }
    double wavelength_m() const { return kSpeedOfLight / (carrier_freq_ghz * 1e9); }
    double prelog() const { return 1.0 - static_cast<double>(num_users) / coherence_block; }

    // Thermal noise power for the given receiver noise figure [W].
    double noise_ap_w() const { return noise_power_w(noise_figure_ap_db); }
    double noise_sat_w() const { return noise_power_w(noise_figure_sat_db); }

    double max_power(int k) const {
        return max_power_w.size() == 1 ? max_power_w[0] : max_power_w.at(static_cast<size_t>(k));
    }
    std::vector<double> max_power_vector() const;
    double kappa(int k) const {
        return rician_factor.size() == 1 ? rician_factor[0] : rician_factor.at(static_cast<size_t>(k));
    }
    double pilot_power() const;

    // Aperture radius; when unset, solved from the boresight directivity
    // (2*pi*alpha/lambda)^2 = sat gain.
    double aperture_radius() const;

    void validate() const; // throws std::invalid_argument on any violated invariant

    static ScenarioConfig from_json(const nlohmann::json& j);
    static ScenarioConfig from_json_file(const std::string& path);
    nlohmann::json to_json() const;

  private:
    double noise_power_w(double noise_figure_db) const {
        return dbm_to_watt(-174.0 + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db);
    }
};

} // namespace stnet
