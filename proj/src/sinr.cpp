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

#include "stnet/sinr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace stnet {

const char* to_string(SystemVariant v) {
    switch (v) {
    case SystemVariant::SpaceTerrestrial: return "space_terrestrial";
    case SystemVariant::TerrestrialOnly: return "terrestrial_only";
    case SystemVariant::SpaceOnly: return "space_only";
    }
    return "unknown";
}

SystemVariant variant_from_string(const std::string& s) {
    if (s == "space_terrestrial" || s == "space-terrestrial" || s == "st") {
        return SystemVariant::SpaceTerrestrial;
    }
    if (s == "terrestrial_only" || s == "terrestrial-only" || s == "terrestrial") {
        return SystemVariant::TerrestrialOnly;
    }
    if (s == "space_only" || s == "space-only" || s == "space") {
        return SystemVariant::SpaceOnly;
    }
    throw std::invalid_argument("unknown system variant: " + s);
}

bool variant_uses_satellite(SystemVariant v) { return v != SystemVariant::TerrestrialOnly; }
bool variant_uses_terrestrial(SystemVariant v) { return v != SystemVariant::SpaceOnly; }

SinrModel build_sinr_model(const ChannelStatistics& stats, const EstimateStatistics& est,
                           SystemVariant variant, const ScenarioConfig& cfg) {
    const int k_users = stats.num_users();
    const double pk = est.pilot_energy;
    const bool sat = variant_uses_satellite(variant);
    const bool terr = variant_uses_terrestrial(variant);

    SinrModel model;
    model.variant = variant;
    model.prelog = cfg.prelog();
    model.bandwidth_mhz = cfg.bandwidth_mhz;
    model.coherent_gain = Eigen::VectorXd::Zero(k_users);
    model.interference = Eigen::MatrixXd::Zero(k_users, k_users);
    model.noise_floor = Eigen::VectorXd::Zero(k_users);

    for (int k = 0; k < k_users; ++k) {
        const auto& los_k = stats.los[static_cast<size_t>(k)];
        const auto& theta_k = est.theta[static_cast<size_t>(k)];

        double sat_gain = 0.0;
        if (sat) {
            sat_gain = los_k.squaredNorm() + pk * theta_k.trace().real();
        }
        double terr_gain = 0.0;
        if (terr) {
            terr_gain = est.gamma.col(k).sum();
        }
        model.coherent_gain(k) = sat_gain + terr_gain;
        model.noise_floor(k) = (sat ? est.noise_sat_var * sat_gain : 0.0) +
                               (terr ? est.noise_ap_var * terr_gain : 0.0);

        for (int j = 0; j < k_users; ++j) {
            double a = 0.0;
            if (sat) {
                const auto& los_j = stats.los[static_cast<size_t>(j)];
                const auto& corr_j = stats.corr[static_cast<size_t>(j)];
                if (j != k) {
                    a += std::norm(los_k.dot(los_j)); // |los_k^H los_j|^2
                }
                a += pk * (los_j.dot(theta_k * los_j)).real();
                a += (los_k.dot(corr_j * los_k)).real();
                a += pk * (corr_j.cwiseProduct(theta_k.transpose())).sum().real(); // tr(R_j theta_k)
            }
            if (terr) {
                a += est.gamma.col(k).dot(stats.beta_ap.col(j));
            }
            model.interference(k, j) = a;
        }
    }
    return model;
}

SinrBreakdown closed_form_sinr(int k, const Eigen::VectorXd& rho, const SinrModel& model) {
    if (rho.size() != model.num_users()) {
        throw std::invalid_argument("closed_form_sinr: power vector size mismatch");
    }
    if (rho.minCoeff() < 0.0) {
        throw std::invalid_argument("closed_form_sinr: powers must be nonnegative");
    }
    SinrBreakdown b;
    const double gain = model.coherent_gain(k);
    b.signal = rho(k) * gain * gain;
    b.mutual_interference = model.interference.row(k).dot(rho);
    b.noise_floor = model.noise_floor(k);
    const double den = b.mutual_interference + b.noise_floor;
    b.sinr = (b.signal > 0.0 && den > 0.0) ? b.signal / den : 0.0;
    b.rate_mbps = model.rate_mbps(b.sinr);
    return b;
}

SinrBreakdown closed_form_sinr(int k, const Eigen::VectorXd& rho, const ChannelStatistics& stats,
                               const EstimateStatistics& est, SystemVariant variant,
                               const ScenarioConfig& cfg) {
    return closed_form_sinr(k, rho, build_sinr_model(stats, est, variant, cfg));
}

double throughput_mbps(double sinr, const ScenarioConfig& cfg) {
    if (sinr < 0.0) {
        throw std::invalid_argument("throughput_mbps: sinr must be nonnegative");
    }
    return cfg.prelog() * cfg.bandwidth_mhz * std::log2(1.0 + sinr);
}

Combiner mrc_combiner() {
    return [](const EstimateRealization& est_real, int user) {
        return CombinerOutput{est_real.ghat_sat.col(user), est_real.ghat_ap.col(user)};
    };
}

namespace {

// Accumulated moments of one chunk of Monte Carlo trials.
struct McAccum {
    std::complex<double> z_own_sum{0.0, 0.0}; // sum of u^H ghat_k (coherent part of z_kk)
    double z_own_sq_sum = 0.0;                // sum of |u^H ghat_k|^2
    Eigen::VectorXd z_sq_sum;                 // sum of |z_kk'|^2, per k'
    double sat_norm_sum = 0.0;                // sum of ||u_k||^2
    double ap_norm_sum = 0.0;                 // sum of sum_m |u_mk|^2
    long count = 0;

    McAccum& operator+=(const McAccum& o) {
        z_own_sum += o.z_own_sum;
        z_own_sq_sum += o.z_own_sq_sum;
        z_sq_sum += o.z_sq_sum;
        sat_norm_sum += o.sat_norm_sum;
        ap_norm_sum += o.ap_norm_sum;
        count += o.count;
        return *this;
    }
};

McAccum run_chunk(std::uint64_t seed, long n_trials, int k, const ChannelStatistics& stats,
                  const EstimateStatistics& est, const Combiner& combiner, bool use_sat,
                  bool use_terr) {
    const int k_users = stats.num_users();
    McAccum acc;
    acc.z_sq_sum = Eigen::VectorXd::Zero(k_users);

    Rng rng(seed);
    for (long t = 0; t < n_trials; ++t) {
        const ChannelRealization real = draw_realization(stats, rng);
        const EstimateRealization est_real = pilot_receive_and_estimate(real, stats, est, rng);
        const CombinerOutput u = combiner(est_real, k);

        for (int j = 0; j < k_users; ++j) {
            std::complex<double> z{0.0, 0.0};
            if (use_sat) {
                z += u.sat.dot(real.g_sat.col(j)); // u_k^H g_j
            }
            if (use_terr) {
                z += u.ap.dot(real.g_ap.col(j)); // sum_m u_mk^* g_mj
            }
            acc.z_sq_sum(j) += std::norm(z);
        }
        // The estimation error is independent of every pilot observable and
        // so of the combiner; E z_kk therefore equals E u^H ghat_k, whose
        // sample mean carries none of the error-term variance.
        std::complex<double> z_coh{0.0, 0.0};
        if (use_sat) {
            z_coh += u.sat.dot(est_real.ghat_sat.col(k));
        }
        if (use_terr) {
            z_coh += u.ap.dot(est_real.ghat_ap.col(k));
        }
        acc.z_own_sum += z_coh;
        acc.z_own_sq_sum += std::norm(z_coh);
        if (use_sat) {
            acc.sat_norm_sum += u.sat.squaredNorm();
        }
        if (use_terr) {
            acc.ap_norm_sum += u.ap.squaredNorm();
        }
        acc.count += 1;
    }
    return acc;
}

// Deterministic pairwise reduction in chunk order.
McAccum pairwise_sum(std::vector<McAccum>& parts, size_t lo, size_t hi) {
    if (hi - lo == 1) {
        return parts[lo];
    }
    const size_t mid = lo + (hi - lo) / 2;
    McAccum left = pairwise_sum(parts, lo, mid);
    left += pairwise_sum(parts, mid, hi);
    return left;
}

constexpr long kMcChunk = 4096;

} // namespace

SinrBreakdown monte_carlo_sinr(int k, const Eigen::VectorXd& rho, const ChannelStatistics& stats,
                               const EstimateStatistics& est, const Combiner& combiner,
                               long n_trials, Rng& rng, SystemVariant variant,
                               const ScenarioConfig& cfg, int n_threads) {
    if (n_trials < 1) {
        throw std::invalid_argument("monte_carlo_sinr: need at least one trial");
    }
    if (rho.size() != stats.num_users() || rho.minCoeff() < 0.0) {
        throw std::invalid_argument("monte_carlo_sinr: invalid power vector");
    }
    const bool use_sat = variant_uses_satellite(variant);
    const bool use_terr = variant_uses_terrestrial(variant);

    const long n_chunks = (n_trials + kMcChunk - 1) / kMcChunk;
    std::vector<std::uint64_t> seeds(static_cast<size_t>(n_chunks));
    for (auto& s : seeds) {
        s = rng();
    }

    std::vector<McAccum> parts(static_cast<size_t>(n_chunks));
    auto run_range = [&](long chunk) {
        const long begin = chunk * kMcChunk;
        const long len = std::min(kMcChunk, n_trials - begin);
        parts[static_cast<size_t>(chunk)] = run_chunk(seeds[static_cast<size_t>(chunk)], len, k,
                                                      stats, est, combiner, use_sat, use_terr);
    };

    long workers = n_threads > 0 ? n_threads : static_cast<long>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1L, n_chunks);
    if (workers == 1) {
        for (long c = 0; c < n_chunks; ++c) {
            run_range(c);
        }
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const long c = next.fetch_add(1);
                    if (c >= n_chunks) {
                        break;
                    }
                    run_range(c);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    const McAccum total = pairwise_sum(parts, 0, parts.size());
    const double n = static_cast<double>(total.count);
    const double inv_n = 1.0 / n;
    const std::complex<double> z_mean = total.z_own_sum * inv_n;

    // |sample mean|^2 overestimates |E z|^2 by Var/n; subtract the
    // sample-variance correction.
    double mean_sq = std::norm(z_mean);
    if (total.count > 1) {
        const double sample_var = (total.z_own_sq_sum - n * mean_sq) / (n - 1.0);
        mean_sq = std::max(mean_sq - sample_var * inv_n, 0.0);
    }

    SinrBreakdown b;
    b.signal = rho(k) * mean_sq;
    b.mutual_interference = rho.dot(total.z_sq_sum * inv_n) - b.signal;
    b.mutual_interference = std::max(b.mutual_interference, 0.0);
    b.noise_floor = (use_sat ? est.noise_sat_var * total.sat_norm_sum * inv_n : 0.0) +
                    (use_terr ? est.noise_ap_var * total.ap_norm_sum * inv_n : 0.0);
    const double den = b.mutual_interference + b.noise_floor;
    b.sinr = (b.signal > 0.0 && den > 0.0) ? b.signal / den : 0.0;
    b.rate_mbps = cfg.prelog() * cfg.bandwidth_mhz * std::log2(1.0 + b.sinr);
    return b;
}

void write_sinr_csv(std::ostream& out, const std::vector<SinrBreakdown>& rows,
                    SystemVariant variant) {
    out << "user,variant,signal,mi,no,sinr,rate_mbps\n";
    char buf[512];
    for (size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", k,
                      to_string(variant), r.signal, r.mutual_interference, r.noise_floor, r.sinr,
                      r.rate_mbps);
        out << buf;
    }
}

} // namespace stnet
