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

#include "stnet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stnet {

namespace {

using nlohmann::json;

// Tracks which keys of a JSON object were consumed so typos in config
// files fail loudly instead of silently falling back to defaults.
class Section {
  public:
    Section(json j, std::string name) : j_(std::move(j)), name_(std::move(name)) {
        if (!j_.is_object()) {
            throw std::invalid_argument("config section '" + name_ + "' must be an object");
        }
    }

    template <typename T>
    void read(const char* key, T& out) {
        auto it = j_.find(key);
        if (it == j_.end()) {
            return;
        }
        seen_.insert(key);
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw std::invalid_argument("config key '" + name_ + "." + key + "': " + e.what());
        }
    }

    bool has(const char* key) {
        if (j_.contains(key)) {
            seen_.insert(key);
            return true;
        }
        return false;
    }

    const json& at(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    // Returns a child object (empty object if absent).
    json child(const char* key) {
        auto it = j_.find(key);
        if (it == j_.end()) {
            return json::object();
        }
        seen_.insert(key);
        return *it;
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (seen_.count(item.key()) == 0) {
                throw std::invalid_argument("unknown config key '" + name_ + "." + item.key() + "'");
            }
        }
    }

  private:
    json j_;
    std::string name_;
    std::set<std::string> seen_;
};

std::vector<double> scalar_or_array(const json& v, const std::string& where) {
    if (v.is_array()) {
        auto out = v.get<std::vector<double>>();
        if (out.empty()) {
            throw std::invalid_argument(where + " must not be an empty array");
        }
        return out;
    }
    if (v.is_number()) {
        return {v.get<double>()};
    }
    throw std::invalid_argument(where + " must be a number or an array of numbers");
}

} // namespace

std::vector<double> ScenarioConfig::max_power_vector() const {
    std::vector<double> out(static_cast<size_t>(num_users));
    for (int k = 0; k < num_users; ++k) {
        out[static_cast<size_t>(k)] = max_power(k);
    }
    return out;
}

double ScenarioConfig::pilot_power() const {
    if (pilot_power_w > 0.0) {
        return pilot_power_w;
    }
    double p = 0.0;
    for (double v : max_power_w) {
        p = std::max(p, v);
    }
    return p;
}

double ScenarioConfig::aperture_radius() const {
    if (aperture_radius_m > 0.0) {
        return aperture_radius_m;
    }
    return wavelength_m() / (2.0 * kPi) * std::sqrt(db_to_linear(sat_gain_dbi));
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };

    if (num_aps < 1) fail("num_aps must be >= 1");
    if (num_users < 1) fail("num_users must be >= 1");
    if (sat_array_h < 1 || sat_array_v < 1) fail("satellite array dimensions must be >= 1");
    if (coherence_block <= num_users) fail("coherence_block must exceed num_users");
    if (area_side_km <= 0.0) fail("area_side_km must be positive");
    if (sat_position_km[2] <= 0.0) fail("satellite must be strictly above the ground plane");
    if (carrier_freq_ghz <= 0.0) fail("carrier_freq_ghz must be positive");
    if (bandwidth_mhz <= 0.0) fail("bandwidth_mhz must be positive");
    if (antenna_spacing_h <= 0.0 || antenna_spacing_v <= 0.0) fail("antenna spacing must be positive");
    if (aperture_radius_m < 0.0) fail("aperture_radius_m must be >= 0");
    if (correlation_coeff < 0.0 || correlation_coeff >= 1.0) fail("correlation_coeff must lie in [0, 1)");
    if (shadow_std_terrestrial_db < 0.0 || shadow_std_sat_db < 0.0) fail("shadow standard deviations must be >= 0");
    if (ap_height_m <= 0.0 || user_height_m <= 0.0) fail("antenna heights must be positive");

    if (rician_factor.size() != 1 && rician_factor.size() != static_cast<size_t>(num_users)) {
        fail("rician_factor must be a scalar or one value per user");
    }
    for (double v : rician_factor) {
        if (v < 0.0) fail("rician_factor must be >= 0");
    }
    if (max_power_w.size() != 1 && max_power_w.size() != static_cast<size_t>(num_users)) {
        fail("max power must be a scalar or one value per user");
    }
    for (double v : max_power_w) {
        if (v < 0.0) fail("max power must be >= 0");
    }
    if (pilot_power_w < 0.0) fail("pilot power must be >= 0");

    if (solver.inner_tolerance <= 0.0) fail("solver.inner_tolerance must be positive");
    if (solver.outer_tolerance_rel <= 0.0) fail("solver.outer_tolerance_rel must be positive");
    if (solver.max_inner_iterations < 1) fail("solver.max_inner_iterations must be >= 1");
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    ScenarioConfig cfg;
    Section root(j, "");

    int version = -1;
    root.read("schema_version", version);
    if (version != kConfigSchemaVersion) {
        throw std::invalid_argument("config: schema_version must be present and equal to " +
                                    std::to_string(kConfigSchemaVersion));
    }

    {
        Section s(root.child("network"), "network");
        s.read("num_aps", cfg.num_aps);
        s.read("num_users", cfg.num_users);
        if (s.has("sat_array")) {
            auto arr = s.at("sat_array").get<std::array<int, 2>>();
            cfg.sat_array_h = arr[0];
            cfg.sat_array_v = arr[1];
        }
        s.finish();
    }
    {
        Section s(root.child("deployment"), "deployment");
        s.read("area_side_km", cfg.area_side_km);
        s.read("sat_position_km", cfg.sat_position_km);
        s.read("ap_height_m", cfg.ap_height_m);
        s.read("user_height_m", cfg.user_height_m);
        s.finish();
    }
    {
        Section s(root.child("radio"), "radio");
        s.read("carrier_freq_ghz", cfg.carrier_freq_ghz);
        s.read("bandwidth_mhz", cfg.bandwidth_mhz);
        s.read("coherence_block", cfg.coherence_block);
        s.read("noise_figure_ap_db", cfg.noise_figure_ap_db);
        s.read("noise_figure_sat_db", cfg.noise_figure_sat_db);
        s.finish();
    }
    {
        Section s(root.child("antennas"), "antennas");
        s.read("ap_gain_dbi", cfg.ap_gain_dbi);
        s.read("user_gain_dbi", cfg.user_gain_dbi);
        s.read("sat_gain_dbi", cfg.sat_gain_dbi);
        s.read("spacing_h", cfg.antenna_spacing_h);
        s.read("spacing_v", cfg.antenna_spacing_v);
        s.read("aperture_radius_m", cfg.aperture_radius_m);
        s.finish();
    }
    {
        Section s(root.child("channel"), "channel");
        if (s.has("rician_factor")) {
            cfg.rician_factor = scalar_or_array(s.at("rician_factor"), "channel.rician_factor");
        }
        s.read("correlation_coeff", cfg.correlation_coeff);
        s.read("shadow_std_terrestrial_db", cfg.shadow_std_terrestrial_db);
        s.read("shadow_std_sat_db", cfg.shadow_std_sat_db);
        s.finish();
    }
    {
        Section s(root.child("power"), "power");
        const bool has_dbw = s.has("max_dbw");
        const bool has_w = s.has("max_w");
        if (has_dbw && has_w) {
            throw std::invalid_argument("config: specify power.max_dbw or power.max_w, not both");
        }
        if (has_dbw) {
            auto v = scalar_or_array(s.at("max_dbw"), "power.max_dbw");
            cfg.max_power_w.clear();
            for (double dbw : v) {
                cfg.max_power_w.push_back(dbw_to_watt(dbw));
            }
        } else if (has_w) {
            cfg.max_power_w = scalar_or_array(s.at("max_w"), "power.max_w");
        }
        s.read("pilot_w", cfg.pilot_power_w);
        s.finish();
    }
    {
        Section s(root.child("solver"), "solver");
        s.read("inner_tolerance", cfg.solver.inner_tolerance);
        s.read("outer_tolerance_rel", cfg.solver.outer_tolerance_rel);
        s.read("max_inner_iterations", cfg.solver.max_inner_iterations);
        s.finish();
    }
    root.read("rng_seed", cfg.rng_seed);
    root.finish();

    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config file " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json ScenarioConfig::to_json() const {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["network"] = {{"num_aps", num_aps},
                    {"num_users", num_users},
                    {"sat_array", std::array<int, 2>{sat_array_h, sat_array_v}}};
    j["deployment"] = {{"area_side_km", area_side_km},
                       {"sat_position_km", sat_position_km},
                       {"ap_height_m", ap_height_m},
                       {"user_height_m", user_height_m}};
    j["radio"] = {{"carrier_freq_ghz", carrier_freq_ghz},
                  {"bandwidth_mhz", bandwidth_mhz},
                  {"coherence_block", coherence_block},
                  {"noise_figure_ap_db", noise_figure_ap_db},
                  {"noise_figure_sat_db", noise_figure_sat_db}};
    j["antennas"] = {{"ap_gain_dbi", ap_gain_dbi},
                     {"user_gain_dbi", user_gain_dbi},
                     {"sat_gain_dbi", sat_gain_dbi},
                     {"spacing_h", antenna_spacing_h},
                     {"spacing_v", antenna_spacing_v},
                     {"aperture_radius_m", aperture_radius_m}};
    j["channel"] = {{"correlation_coeff", correlation_coeff},
                    {"shadow_std_terrestrial_db", shadow_std_terrestrial_db},
                    {"shadow_std_sat_db", shadow_std_sat_db}};
    if (rician_factor.size() == 1) {
        j["channel"]["rician_factor"] = rician_factor[0];
    } else {
        j["channel"]["rician_factor"] = rician_factor;
    }
    if (max_power_w.size() == 1) {
        j["power"]["max_w"] = max_power_w[0];
    } else {
        j["power"]["max_w"] = max_power_w;
    }
    j["power"]["pilot_w"] = pilot_power_w;
    j["solver"] = {{"inner_tolerance", solver.inner_tolerance},
                   {"outer_tolerance_rel", solver.outer_tolerance_rel},
                   {"max_inner_iterations", solver.max_inner_iterations}};
    j["rng_seed"] = rng_seed;
    return j;
}

} // namespace stnet
