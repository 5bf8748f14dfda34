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

#include <Eigen/Dense>

#include "stnet/config.hpp"

namespace stnet {

// AP-user large-scale gain, 3GPP rural-macro fit:
//   beta [dB] = G_ap + G_user - 8.50 - 20 log10(f_c [GHz]) - 38.63 log10(d [m]) + shadow
// Returned in linear scale. shadow_db is the log-normal shadow-fading
// realization; pass 0 for the deterministic part.
double terrestrial_pathloss(double distance_m, const ScenarioConfig& cfg, double shadow_db = 0.0);

struct SatLink {
    double beta = 0.0;          // linear large-scale gain
    double elevation_rad = 0.0; // theta, user-to-satellite elevation
    double azimuth_rad = 0.0;   // omega
    double boresight_rad = 0.0; // phi, angle off the beam center seen from the satellite
    double distance_m = 0.0;    // slant range
};

// User-satellite link budget:
//   beta [dB] = G_sat + G_user + Gtilde - 32.45 - 20 log10(f_c [GHz]) - 20 log10(d [m]) + shadow,
// with Gtilde the normalized circular-aperture beam pattern evaluated at the
// off-boresight angle. The beam points at the coverage-area centroid.
SatLink satellite_pathloss(const Eigen::Vector3d& user_pos_km, const ScenarioConfig& cfg,
                           double shadow_db = 0.0);

// Normalized beam pattern 4 |J1(x)/x|^2 with x = (2 pi / lambda) * alpha * sin(phi),
// valid for phi in [0, pi/2]; zero outside that range.
double beam_gain(double off_boresight_rad, double aperture_radius_m, double wavelength_m);

} // namespace stnet
