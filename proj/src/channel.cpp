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

#include "stnet/channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "stnet/pathloss.hpp"
#include "stnet/units.hpp"

namespace stnet {

Eigen::VectorXcd los_vector(double elevation_rad, double azimuth_rad, double kappa, double beta,
                            const ScenarioConfig& cfg) {
    if (kappa < 0.0) {
        throw std::invalid_argument("los_vector: kappa must be >= 0");
    }
    if (!(beta > 0.0)) {
        throw std::invalid_argument("los_vector: beta must be positive");
    }
    const int nh = cfg.sat_array_h;
    const int n = cfg.sat_antennas();
    const double amp = std::sqrt(kappa * beta / (kappa + 1.0));

    // Wave vector [cos(t)cos(w), sin(t)cos(w), sin(t)] * 2 pi / lambda;
    // element offsets are (0, h d_H, v d_V) with spacings in wavelengths,
    // so the wavelength cancels in the phase.
    const double ky = std::sin(elevation_rad) * std::cos(azimuth_rad);
    const double kz = std::sin(elevation_rad);

    Eigen::VectorXcd g(n);
    for (int i = 0; i < n; ++i) {
        const int h = i % nh;
        const int v = i / nh;
        const double phase =
            2.0 * kPi * (ky * h * cfg.antenna_spacing_h + kz * v * cfg.antenna_spacing_v);
        g(i) = amp * std::exp(std::complex<double>(0.0, phase));
    }
    return g;
}

Eigen::MatrixXcd correlation_matrix(double beta, double kappa, const ScenarioConfig& cfg) {
    const int nh = cfg.sat_array_h;
    const int n = cfg.sat_antennas();
    const double r = cfg.correlation_coeff;
    const double scale = beta / (kappa + 1.0);

    // Kronecker product of horizontal and vertical exponential-correlation
    // factors r^|a-b|, laid out to match the element ordering of los_vector.
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        const int hi = i % nh;
        const int vi = i / nh;
        for (int j = 0; j <= i; ++j) {
            const int hj = j % nh;
            const int vj = j / nh;
            const double v = scale * std::pow(r, std::abs(hi - hj)) * std::pow(r, std::abs(vi - vj));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_sqrt: eigendecomposition failed");
    }
    Eigen::VectorXd vals = eig.eigenvalues();
    const double scale = vals.cwiseAbs().maxCoeff();
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) < -1e-12 * scale) {
            throw std::runtime_error("hermitian_sqrt: matrix is not PSD within tolerance");
        }
        vals(i) = std::max(vals(i), 0.0);
    }
    return eig.eigenvectors() * vals.cwiseSqrt().asDiagonal() * eig.eigenvectors().adjoint();
}

ChannelStatistics build_statistics(const ScenarioConfig& cfg, const Geometry& geom, Rng& rng,
                                   bool with_sampling_cache) {
    const int m_aps = cfg.num_aps;
    const int k_users = cfg.num_users;
    if (static_cast<int>(geom.ap_positions_km.size()) != m_aps ||
        static_cast<int>(geom.user_positions_km.size()) != k_users) {
        throw std::invalid_argument("build_statistics: geometry does not match config sizes");
    }

    ChannelStatistics stats;
    stats.beta_ap.resize(m_aps, k_users);
    stats.beta_sat.resize(k_users);
    stats.kappa.resize(k_users);
    stats.elevation_rad.resize(k_users);
    stats.azimuth_rad.resize(k_users);
    stats.los.reserve(static_cast<size_t>(k_users));
    stats.corr.reserve(static_cast<size_t>(k_users));

    GaussianSampler gauss;

    // Shadow fading, one draw per link per slot.
    for (int k = 0; k < k_users; ++k) {
        for (int m = 0; m < m_aps; ++m) {
            const double shadow = gauss(rng) * cfg.shadow_std_terrestrial_db;
            const double d = distance_m(geom.ap_positions_km[static_cast<size_t>(m)],
                                        geom.user_positions_km[static_cast<size_t>(k)]);
            stats.beta_ap(m, k) = terrestrial_pathloss(d, cfg, shadow);
        }
    }
    for (int k = 0; k < k_users; ++k) {
        const double shadow = gauss(rng) * cfg.shadow_std_sat_db;
        const SatLink link =
            satellite_pathloss(geom.user_positions_km[static_cast<size_t>(k)], cfg, shadow);
        stats.beta_sat(k) = link.beta;
        stats.elevation_rad(k) = link.elevation_rad;
        stats.azimuth_rad(k) = link.azimuth_rad;
        stats.kappa(k) = cfg.kappa(k);
    }

    for (int k = 0; k < k_users; ++k) {
        stats.los.push_back(los_vector(stats.elevation_rad(k), stats.azimuth_rad(k),
                                       stats.kappa(k), stats.beta_sat(k), cfg));
        stats.corr.push_back(correlation_matrix(stats.beta_sat(k), stats.kappa(k), cfg));
    }
    if (with_sampling_cache) {
        stats.corr_sqrt.reserve(static_cast<size_t>(k_users));
        for (int k = 0; k < k_users; ++k) {
            stats.corr_sqrt.push_back(hermitian_sqrt(stats.corr[static_cast<size_t>(k)]));
        }
    }
    return stats;
}

ChannelRealization draw_realization(const ChannelStatistics& stats, Rng& rng) {
    const int m_aps = stats.num_aps();
    const int k_users = stats.num_users();
    const int n = stats.sat_antennas();

    ChannelRealization real;
    real.g_ap.resize(m_aps, k_users);
    real.g_sat.resize(n, k_users);

    GaussianSampler gauss;
    for (int k = 0; k < k_users; ++k) {
        for (int m = 0; m < m_aps; ++m) {
            real.g_ap(m, k) = gauss.complex_normal(rng, stats.beta_ap(m, k));
        }
    }
    Eigen::VectorXcd w(n);
    Eigen::MatrixXcd fallback_sqrt;
    for (int k = 0; k < k_users; ++k) {
        for (int i = 0; i < n; ++i) {
            w(i) = gauss.complex_normal(rng, 1.0);
        }
        const Eigen::MatrixXcd* sqrt_k = nullptr;
        if (stats.corr_sqrt.empty()) {
            fallback_sqrt = hermitian_sqrt(stats.corr[static_cast<size_t>(k)]);
            sqrt_k = &fallback_sqrt;
        } else {
            sqrt_k = &stats.corr_sqrt[static_cast<size_t>(k)];
        }
        real.g_sat.col(k) = stats.los[static_cast<size_t>(k)] + (*sqrt_k) * w;
    }
    return real;
}

} // namespace stnet
