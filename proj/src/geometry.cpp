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

#include "stnet/geometry.hpp"

namespace stnet {

namespace {

std::vector<Eigen::Vector3d> draw_uniform(int count, double side_km, double height_m, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, side_km);
    std::vector<Eigen::Vector3d> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        out.emplace_back(x, y, height_m * 1e-3);
    }
    return out;
}

} // namespace

std::vector<Eigen::Vector3d> draw_ap_positions(const ScenarioConfig& cfg, Rng& rng) {
    return draw_uniform(cfg.num_aps, cfg.area_side_km, cfg.ap_height_m, rng);
}

std::vector<Eigen::Vector3d> draw_user_positions(const ScenarioConfig& cfg, Rng& rng) {
    return draw_uniform(cfg.num_users, cfg.area_side_km, cfg.user_height_m, rng);
}

Geometry build_geometry(const ScenarioConfig& cfg, Rng& rng) {
    Geometry g;
    g.ap_positions_km = draw_ap_positions(cfg, rng);
    g.user_positions_km = draw_user_positions(cfg, rng);
    return g;
}

Eigen::Vector3d beam_center_km(const ScenarioConfig& cfg) {
    return {0.5 * cfg.area_side_km, 0.5 * cfg.area_side_km, 0.0};
}

} // namespace stnet
