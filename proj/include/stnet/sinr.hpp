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

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stnet/channel.hpp"
#include "stnet/config.hpp"
#include "stnet/estimation.hpp"
#include "stnet/rng.hpp"

namespace stnet {

// Which receive paths contribute to detection.
enum class SystemVariant {
    SpaceTerrestrial, // satellite and APs combined at the CPU
    TerrestrialOnly,
    SpaceOnly,
};

const char* to_string(SystemVariant v);
SystemVariant variant_from_string(const std::string& s);
bool variant_uses_satellite(SystemVariant v);
bool variant_uses_terrestrial(SystemVariant v);

// Per-user effective-SINR decomposition under the hardening bound:
// sinr = signal / (mutual_interference + noise_floor).
struct SinrBreakdown {
    double signal = 0.0;              // rho_k * (coherent gain)^2
    double mutual_interference = 0.0; // MI_k
    double noise_floor = 0.0;         // NO_k
    double sinr = 0.0;
    double rate_mbps = 0.0;
};

// Closed-form MRC coefficients for one variant, precomputed from the
// channel and estimate statistics:
//   coherent_gain(k)  = ||los_k||^2 + pK tr(theta_k) + sum_m gamma_mk,
//   interference(k,j) such that MI_k(rho) = interference.row(k) * rho,
//   noise_floor(k)    = sigma_s^2 * (satellite part) + sigma_a^2 * (AP part),
// with the variant masking the satellite or terrestrial contributions.
struct SinrModel {
    SystemVariant variant = SystemVariant::SpaceTerrestrial;
    Eigen::VectorXd coherent_gain; // K
    Eigen::MatrixXd interference;  // K x K, nonnegative entries
    Eigen::VectorXd noise_floor;   // K [W]
    double prelog = 1.0;
    double bandwidth_mhz = 0.0;

    int num_users() const { return static_cast<int>(coherent_gain.size()); }
    double rate_mbps(double sinr) const { return prelog * bandwidth_mhz * std::log2(1.0 + sinr); }
};

SinrModel build_sinr_model(const ChannelStatistics& stats, const EstimateStatistics& est,
                           SystemVariant variant, const ScenarioConfig& cfg);

// Effective SINR of user k at transmit powers rho [W] under MRC.
SinrBreakdown closed_form_sinr(int k, const Eigen::VectorXd& rho, const SinrModel& model);
SinrBreakdown closed_form_sinr(int k, const Eigen::VectorXd& rho, const ChannelStatistics& stats,
                               const EstimateStatistics& est, SystemVariant variant,
                               const ScenarioConfig& cfg);

// Ergodic throughput of the hardening bound, B in MHz -> Mbps.
double throughput_mbps(double sinr, const ScenarioConfig& cfg);

// A combiner maps the estimates of one draw to the detection weights
// (satellite vector u_k, AP coefficients u_mk).
struct CombinerOutput {
    Eigen::VectorXcd sat; // length N
    Eigen::VectorXcd ap;  // length M
};
using Combiner = std::function<CombinerOutput(const EstimateRealization&, int user)>;

// MRC uses the channel estimates themselves as weights.
Combiner mrc_combiner();

// Estimates the effective SINR of user k by sample averaging the overall
// channel coefficients z_kk' over joint channel/estimate draws. Data-stage
// noise enters through the combiner norms analytically, so only channel and
// pilot noise are sampled; the coherent gain E z_kk is averaged against the
// channel estimate (the estimation error is independent of the combiner),
// which keeps the numerator variance small even for weak links. Trials are
// processed in fixed-size chunks with independently seeded streams; the
// reduction is a pairwise sum over chunks, so the result is reproducible
// for any thread count (n_threads 0 = all hardware threads).
SinrBreakdown monte_carlo_sinr(int k, const Eigen::VectorXd& rho, const ChannelStatistics& stats,
                               const EstimateStatistics& est, const Combiner& combiner,
                               long n_trials, Rng& rng, SystemVariant variant,
                               const ScenarioConfig& cfg, int n_threads = 0);

// CSV export, columns: user,variant,signal,mi,no,sinr,rate_mbps.
void write_sinr_csv(std::ostream& out, const std::vector<SinrBreakdown>& rows,
                    SystemVariant variant);

} // namespace stnet
