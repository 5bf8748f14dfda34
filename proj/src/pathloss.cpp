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

#include "stnet/pathloss.hpp"

#include <cmath>
#include <stdexcept>

#include "stnet/geometry.hpp"
#include "stnet/units.hpp"

namespace stnet {

double terrestrial_pathloss(double distance_m, const ScenarioConfig& cfg, double shadow_db) {
    if (!(distance_m > 0.0)) {
        throw std::invalid_argument("terrestrial_pathloss: distance must be positive");
    }
    const double beta_db = cfg.ap_gain_dbi + cfg.user_gain_dbi - 8.50 -
                           20.0 * std::log10(cfg.carrier_freq_ghz) -
                           38.63 * std::log10(distance_m) + shadow_db;
    return db_to_linear(beta_db);
}

double beam_gain(double off_boresight_rad, double aperture_radius_m, double wavelength_m) {
    if (off_boresight_rad < 0.0 || off_boresight_rad > 0.5 * kPi) {
        return 0.0;
    }
    const double x = 2.0 * kPi / wavelength_m * aperture_radius_m * std::sin(off_boresight_rad);
    if (x < 1e-9) {
        return 1.0; // J1(x)/x -> 1/2 as x -> 0
    }
    const double t = std::cyl_bessel_j(1, x) / x;
    return 4.0 * t * t;
}

SatLink satellite_pathloss(const Eigen::Vector3d& user_pos_km, const ScenarioConfig& cfg,
                           double shadow_db) {
    const Eigen::Vector3d sat(cfg.sat_position_km[0], cfg.sat_position_km[1], cfg.sat_position_km[2]);
    const Eigen::Vector3d to_sat = sat - user_pos_km;
    const double dist_km = to_sat.norm();
    if (!(dist_km > 0.0)) {
        throw std::invalid_argument("satellite_pathloss: user coincides with the satellite");
    }

    SatLink link;
    link.distance_m = dist_km * 1000.0;
    link.elevation_rad = std::asin(to_sat.z() / dist_km);
    link.azimuth_rad = std::atan2(to_sat.y(), to_sat.x());

    const Eigen::Vector3d boresight = beam_center_km(cfg) - sat;
    const double cos_phi = -to_sat.dot(boresight) / (dist_km * boresight.norm());
    link.boresight_rad = std::acos(std::clamp(cos_phi, -1.0, 1.0));

    const double base_db = cfg.sat_gain_dbi + cfg.user_gain_dbi - 32.45 -
                           20.0 * std::log10(cfg.carrier_freq_ghz) -
                           20.0 * std::log10(link.distance_m) + shadow_db;
    // The beam pattern multiplies in linear scale; it can be exactly zero.
    link.beta = db_to_linear(base_db) *
                beam_gain(link.boresight_rad, cfg.aperture_radius(), cfg.wavelength_m());
    return link;
}

} // namespace stnet
