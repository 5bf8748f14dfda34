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

#include "stnet/channel.hpp"
#include "stnet/config.hpp"
#include "stnet/rng.hpp"

namespace stnet {

// Deterministic statistics of the MMSE channel estimates given the
// large-scale statistics and the pilot power. For the AP links the estimate
// is ghat_mk ~ CN(0, gamma_mk); for the satellite links ghat_k ~ CN(los_k,
// pK theta_k) and the estimation error has covariance corr_k - pK theta_k.
struct EstimateStatistics {
    Eigen::MatrixXd gamma;               // M x K, estimate variances of AP links
    std::vector<Eigen::MatrixXcd> phi;   // (pK R_k + sigma_s^2 I)^-1 per user
    std::vector<Eigen::MatrixXcd> theta; // R_k phi_k R_k per user

    // Precomputed sqrt(pK) R_k phi_k, applied to the de-meaned pilot
    // observation when forming the satellite estimate.
    std::vector<Eigen::MatrixXcd> est_gain;

    double pilot_energy = 0.0;  // p K
    double noise_ap_var = 0.0;  // sigma_a^2 [W]
    double noise_sat_var = 0.0; // sigma_s^2 [W]

    int num_users() const { return static_cast<int>(gamma.cols()); }
};

struct EstimateRealization {
    Eigen::MatrixXcd ghat_ap;  // M x K
    Eigen::MatrixXcd ghat_sat; // N x K
};

// gamma_mk = pK beta_mk^2 / (pK beta_mk + sigma_a^2); phi and theta follow
// from the satellite covariance. Requires pilot_power > 0 and a positive
// satellite noise power.
EstimateStatistics estimate_stats(const ChannelStatistics& stats, double pilot_power,
                                  const ScenarioConfig& cfg);

// Unitary K x K DFT matrix; column k is the pilot sequence of user k.
Eigen::MatrixXcd dft_pilots(int num_users);

// Simulates the pilot phase: receives the superimposed pilots with fresh
// AWGN at every AP and at the satellite gateway, projects onto each user's
// pilot and applies the MMSE estimators. noise_scale multiplies the injected
// noise amplitude (a test hook; the estimator coefficients are unchanged).
EstimateRealization pilot_receive_and_estimate(const ChannelRealization& real,
                                               const ChannelStatistics& stats,
                                               const EstimateStatistics& est, Rng& rng,
                                               double noise_scale = 1.0);

} // namespace stnet
