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
#include "stnet/geometry.hpp"
#include "stnet/rng.hpp"

namespace stnet {

// Large-scale statistics of one time slot. AP channels are Rayleigh with
// per-link gain beta_ap(m, k). Satellite channels are Rician: mean los[k]
// and covariance corr[k], both scaled so that per-antenna LoS power plus
// scattered power sums to beta_sat(k). Immutable after construction and
// safe to share across threads.
struct ChannelStatistics {
    Eigen::MatrixXd beta_ap;  // [linear], M x K
    Eigen::VectorXd beta_sat; // [linear], K
    Eigen::VectorXd kappa;    // linear Rician factors, K
    Eigen::VectorXd elevation_rad; // K
    Eigen::VectorXd azimuth_rad;   // K

    std::vector<Eigen::VectorXcd> los;       // LoS mean vectors, length N each
    std::vector<Eigen::MatrixXcd> corr;      // covariance R_k, N x N Hermitian PSD
    std::vector<Eigen::MatrixXcd> corr_sqrt; // Hermitian square roots for sampling; may be empty

    int num_aps() const { return static_cast<int>(beta_ap.rows()); }
    int num_users() const { return static_cast<int>(beta_ap.cols()); }
    int sat_antennas() const { return los.empty() ? 0 : static_cast<int>(los[0].size()); }
};

// One joint small-scale realization.
struct ChannelRealization {
    Eigen::MatrixXcd g_ap;  // M x K
    Eigen::MatrixXcd g_sat; // N x K, column k is user k's satellite channel
};

// LoS vector of a user seen by the N_H x N_V planar array: every entry has
// modulus sqrt(kappa beta / (kappa + 1)) and phase from the wave vector at
// elevation theta / azimuth omega. Element n sits at row (n mod N_H) of the
// horizontal axis and column floor(n / N_H) of the vertical axis.
Eigen::VectorXcd los_vector(double elevation_rad, double azimuth_rad, double kappa, double beta,
                            const ScenarioConfig& cfg);

// Spatial covariance beta/(kappa+1) * (horizontal x vertical) exponential
// correlation with coefficient r, matching the element ordering above.
Eigen::MatrixXcd correlation_matrix(double beta, double kappa, const ScenarioConfig& cfg);

// Hermitian PSD square root via eigendecomposition. Eigenvalues below
// -1e-12 * max|eig| are treated as an invariant violation; small negative
// values are clamped to zero.
Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m);

// Builds all large-scale statistics for one slot, drawing shadow-fading
// realizations from rng. with_sampling_cache controls whether the Hermitian
// square roots are precomputed (needed for Monte Carlo draws).
ChannelStatistics build_statistics(const ScenarioConfig& cfg, const Geometry& geom, Rng& rng,
                                   bool with_sampling_cache = true);

// Draws g_ap(m,k) ~ CN(0, beta_ap(m,k)) i.i.d. and g_sat.col(k) ~ CN(los[k], corr[k]).
ChannelRealization draw_realization(const ChannelStatistics& stats, Rng& rng);

} // namespace stnet
