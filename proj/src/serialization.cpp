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

#include "stnet/serialization.hpp"

#include <stdexcept>

namespace stnet {

namespace {

using nlohmann::json;

json dump_real_matrix(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd load_real_matrix(const json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index nc = nr > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
    Eigen::MatrixXd m(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<size_t>(i)].size()) != nc) {
            throw std::invalid_argument("ragged matrix in cached statistics");
        }
        for (Eigen::Index j2 = 0; j2 < nc; ++j2) {
            m(i, j2) = rows[static_cast<size_t>(i)][static_cast<size_t>(j2)];
        }
    }
    return m;
}

json dump_complex_matrix(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd load_complex_matrix(const json& j) {
    const auto rows = j.get<std::vector<std::vector<std::array<double, 2>>>>();
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index nc = nr > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
    Eigen::MatrixXcd m(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<size_t>(i)].size()) != nc) {
            throw std::invalid_argument("ragged matrix in cached statistics");
        }
        for (Eigen::Index j2 = 0; j2 < nc; ++j2) {
            const auto& v = rows[static_cast<size_t>(i)][static_cast<size_t>(j2)];
            m(i, j2) = {v[0], v[1]};
        }
    }
    return m;
}

json dump_vector(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

Eigen::VectorXd load_vector(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_version(const json& j) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kConfigSchemaVersion) {
        throw std::invalid_argument("cached statistics: unsupported schema_version");
    }
}

} // namespace

json to_json(const ChannelStatistics& stats) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["beta_ap"] = dump_real_matrix(stats.beta_ap);
    j["beta_sat"] = dump_vector(stats.beta_sat);
    j["kappa"] = dump_vector(stats.kappa);
    j["elevation_rad"] = dump_vector(stats.elevation_rad);
    j["azimuth_rad"] = dump_vector(stats.azimuth_rad);
    j["los"] = json::array();
    j["corr"] = json::array();
    for (size_t k = 0; k < stats.los.size(); ++k) {
        j["los"].push_back(dump_complex_matrix(stats.los[k]));
        j["corr"].push_back(dump_complex_matrix(stats.corr[k]));
    }
    return j;
}

ChannelStatistics channel_statistics_from_json(const json& j) {
    check_version(j);
    ChannelStatistics stats;
    stats.beta_ap = load_real_matrix(j.at("beta_ap"));
    stats.beta_sat = load_vector(j.at("beta_sat"));
    stats.kappa = load_vector(j.at("kappa"));
    stats.elevation_rad = load_vector(j.at("elevation_rad"));
    stats.azimuth_rad = load_vector(j.at("azimuth_rad"));
    for (const auto& m : j.at("los")) {
        stats.los.push_back(load_complex_matrix(m));
    }
    for (const auto& m : j.at("corr")) {
        stats.corr.push_back(load_complex_matrix(m));
        stats.corr_sqrt.push_back(hermitian_sqrt(stats.corr.back()));
    }
    return stats;
}

json to_json(const EstimateStatistics& est) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["gamma"] = dump_real_matrix(est.gamma);
    j["pilot_energy"] = est.pilot_energy;
    j["noise_ap_var"] = est.noise_ap_var;
    j["noise_sat_var"] = est.noise_sat_var;
    j["phi"] = json::array();
    j["theta"] = json::array();
    for (size_t k = 0; k < est.phi.size(); ++k) {
        j["phi"].push_back(dump_complex_matrix(est.phi[k]));
        j["theta"].push_back(dump_complex_matrix(est.theta[k]));
    }
    return j;
}

EstimateStatistics estimate_statistics_from_json(const json& j) {
    check_version(j);
    EstimateStatistics est;
    est.gamma = load_real_matrix(j.at("gamma"));
    est.pilot_energy = j.at("pilot_energy").get<double>();
    est.noise_ap_var = j.at("noise_ap_var").get<double>();
    est.noise_sat_var = j.at("noise_sat_var").get<double>();
    for (const auto& m : j.at("phi")) {
        est.phi.push_back(load_complex_matrix(m));
    }
    for (const auto& m : j.at("theta")) {
        est.theta.push_back(load_complex_matrix(m));
    }
    // est_gain = sqrt(pK) R phi is not stored; since phi^-1 = pK R + sigma^2 I,
    // it equals (I - sigma^2 phi) / sqrt(pK).
    for (const auto& phi : est.phi) {
        const Eigen::Index n = phi.rows();
        est.est_gain.push_back(
            (Eigen::MatrixXcd::Identity(n, n) - est.noise_sat_var * phi) /
            std::sqrt(est.pilot_energy));
    }
    return est;
}

} // namespace stnet
