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

#include "stnet/estimation.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "stnet/units.hpp"

namespace stnet {

EstimateStatistics estimate_stats(const ChannelStatistics& stats, double pilot_power,
                                  const ScenarioConfig& cfg) {
    if (!(pilot_power > 0.0)) {
        throw std::invalid_argument("estimate_stats: pilot power must be positive");
    }
    const double sigma_a2 = cfg.noise_ap_w();
    const double sigma_s2 = cfg.noise_sat_w();
    if (!(sigma_s2 > 0.0)) {
        throw std::invalid_argument("estimate_stats: satellite noise power must be positive");
    }

    const int m_aps = stats.num_aps();
    const int k_users = stats.num_users();
    const int n = stats.sat_antennas();
    const double pk = pilot_power * k_users;

    EstimateStatistics est;
    est.pilot_energy = pk;
    est.noise_ap_var = sigma_a2;
    est.noise_sat_var = sigma_s2;

    est.gamma.resize(m_aps, k_users);
    for (int k = 0; k < k_users; ++k) {
        for (int m = 0; m < m_aps; ++m) {
            const double beta = stats.beta_ap(m, k);
            est.gamma(m, k) = pk * beta * beta / (pk * beta + sigma_a2);
        }
    }

    est.phi.reserve(static_cast<size_t>(k_users));
    est.theta.reserve(static_cast<size_t>(k_users));
    est.est_gain.reserve(static_cast<size_t>(k_users));
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 0; k < k_users; ++k) {
        const Eigen::MatrixXcd& r = stats.corr[static_cast<size_t>(k)];
        Eigen::LLT<Eigen::MatrixXcd> llt(pk * r + sigma_s2 * eye);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error("estimate_stats: pilot Gram matrix is not positive definite");
        }
        Eigen::MatrixXcd phi_r = llt.solve(r); // phi_k R_k
        Eigen::MatrixXcd theta = r * phi_r;
        theta = 0.5 * (theta + theta.adjoint()).eval(); // kill Hermitian drift
        est.phi.push_back(llt.solve(eye));
        est.theta.push_back(std::move(theta));
        est.est_gain.push_back(std::sqrt(pk) * phi_r.adjoint()); // sqrt(pK) R_k phi_k
    }
    return est;
}

Eigen::MatrixXcd dft_pilots(int num_users) {
    if (num_users < 1) {
        throw std::invalid_argument("dft_pilots: need at least one user");
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(num_users));
    Eigen::MatrixXcd p(num_users, num_users);
    for (int a = 0; a < num_users; ++a) {
        for (int b = 0; b < num_users; ++b) {
            const double phase = -2.0 * kPi * a * b / num_users;
            p(a, b) = norm * std::exp(std::complex<double>(0.0, phase));
        }
    }
    return p;
}

EstimateRealization pilot_receive_and_estimate(const ChannelRealization& real,
                                               const ChannelStatistics& stats,
                                               const EstimateStatistics& est, Rng& rng,
                                               double noise_scale) {
    const int m_aps = stats.num_aps();
    const int k_users = stats.num_users();
    const int n = stats.sat_antennas();
    const double pk = est.pilot_energy;
    const double sqrt_pk = std::sqrt(pk);

    const Eigen::MatrixXcd pilots = dft_pilots(k_users);
    GaussianSampler gauss;

    // Row m of y_ap is the K-symbol training observation of AP m.
    Eigen::MatrixXcd y_ap = sqrt_pk * real.g_ap * pilots.adjoint();
    for (int b = 0; b < k_users; ++b) {
        for (int m = 0; m < m_aps; ++m) {
            y_ap(m, b) += noise_scale * gauss.complex_normal(rng, est.noise_ap_var);
        }
    }
    // Satellite gateway observation, N x K.
    Eigen::MatrixXcd y_sat = sqrt_pk * real.g_sat * pilots.adjoint();
    for (int b = 0; b < k_users; ++b) {
        for (int i = 0; i < n; ++i) {
            y_sat(i, b) += noise_scale * gauss.complex_normal(rng, est.noise_sat_var);
        }
    }

    EstimateRealization out;
    // Project onto each pilot; column k of (y * pilots) is the sufficient
    // statistic for user k.
    const Eigen::MatrixXcd y_ap_proj = y_ap * pilots;
    out.ghat_ap.resize(m_aps, k_users);
    for (int k = 0; k < k_users; ++k) {
        for (int m = 0; m < m_aps; ++m) {
            const double beta = stats.beta_ap(m, k);
            out.ghat_ap(m, k) = sqrt_pk * beta / (pk * beta + est.noise_ap_var) * y_ap_proj(m, k);
        }
    }
    const Eigen::MatrixXcd y_sat_proj = y_sat * pilots;
    out.ghat_sat.resize(n, k_users);
    for (int k = 0; k < k_users; ++k) {
        const Eigen::VectorXcd& mean = stats.los[static_cast<size_t>(k)];
        out.ghat_sat.col(k) =
            mean + est.est_gain[static_cast<size_t>(k)] * (y_sat_proj.col(k) - sqrt_pk * mean);
    }
    return out;
}

} // namespace stnet
