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

#include <vector>

#include <Eigen/Dense>

#include "stnet/config.hpp"
#include "stnet/rng.hpp"

namespace stnet {

// All positions are Cartesian (x, y, z) in km.
struct Geometry {
    std::vector<Eigen::Vector3d> ap_positions_km;
    std::vector<Eigen::Vector3d> user_positions_km;
};

std::vector<Eigen::Vector3d> draw_ap_positions(const ScenarioConfig& cfg, Rng& rng);
std::vector<Eigen::Vector3d> draw_user_positions(const ScenarioConfig& cfg, Rng& rng);

// Samples AP and user positions uniformly over the square coverage area.
Geometry build_geometry(const ScenarioConfig& cfg, Rng& rng);

// Boresight target of the satellite beam: the centroid of the coverage area.
Eigen::Vector3d beam_center_km(const ScenarioConfig& cfg);

inline double distance_m(const Eigen::Vector3d& a_km, const Eigen::Vector3d& b_km) {
    return (a_km - b_km).norm() * 1000.0;
}

} // namespace stnet
