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

#include <algorithm>

#include "doctest.h"

#include "stnet/channel.hpp"
#include "stnet/serialization.hpp"

using namespace stnet;

namespace {

ScenarioConfig small_array_config(int nh, int nv) {
    ScenarioConfig cfg;
    cfg.sat_array_h = nh;
    cfg.sat_array_v = nv;
    return cfg;
}

} // namespace

TEST_CASE("LoS entries share the Rician modulus") {
    const ScenarioConfig cfg = small_array_config(3, 2);
    const double kappa = 4.0;
    const double beta = 2.5;
    const auto g = los_vector(0.7, -1.1, kappa, beta, cfg);
    REQUIRE(g.size() == 6);
    const double expected = std::sqrt(kappa * beta / (kappa + 1.0));
    for (int i = 0; i < g.size(); ++i) {
        CHECK(std::abs(g(i)) == doctest::Approx(expected).epsilon(1e-12));
    }
    // Per-antenna LoS power plus scattered power conserves beta.
    const auto r = correlation_matrix(beta, kappa, cfg);
    CHECK(g.squaredNorm() / 6.0 + r.trace().real() / 6.0 == doctest::Approx(beta).epsilon(1e-12));
}

TEST_CASE("Rayleigh limit: kappa = 0 gives a zero LoS vector") {
    const ScenarioConfig cfg = small_array_config(2, 2);
    const auto g = los_vector(0.3, 0.4, 0.0, 1.0, cfg);
    CHECK(g.norm() == 0.0);
}

TEST_CASE("zero angles give a constant LoS vector") {
    // At theta = omega = 0 the wave vector points along x and every element
    // offset is orthogonal to it, so all phases vanish.
    const ScenarioConfig cfg = small_array_config(2, 2);
    const auto g = los_vector(0.0, 0.0, 10.0, 1.0, cfg);
    for (int i = 1; i < g.size(); ++i) {
        CHECK(std::abs(g(i) - g(0)) < 1e-15);
    }
    CHECK(g(0).imag() == doctest::Approx(0.0));
}

TEST_CASE("uncorrelated limit r = 0 gives a scaled identity") {
    ScenarioConfig cfg = small_array_config(2, 3);
    cfg.correlation_coeff = 0.0;
    const double beta = 3.0;
    const double kappa = 2.0;
    const auto r = correlation_matrix(beta, kappa, cfg);
    const double scale = beta / (kappa + 1.0);
    CHECK((r - scale * Eigen::MatrixXcd::Identity(6, 6)).norm() == doctest::Approx(0.0));
}

TEST_CASE("correlation trace equals N beta / (kappa + 1) for any r") {
    for (double r_coef : {0.0, 0.3, 0.7, 0.95}) {
        ScenarioConfig cfg = small_array_config(3, 3);
        cfg.correlation_coeff = r_coef;
        const auto r = correlation_matrix(1.7, 5.0, cfg);
        CHECK(r.trace().real() == doctest::Approx(9.0 * 1.7 / 6.0).epsilon(1e-12));
    }
}

TEST_CASE("2x2 factor eigenvalues multiply through the Kronecker structure") {
    ScenarioConfig cfg = small_array_config(2, 2);
    cfg.correlation_coeff = 0.5;
    const double beta = 2.0;
    const double kappa = 3.0;
    const auto r = correlation_matrix(beta, kappa, cfg);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
    Eigen::VectorXd vals = eig.eigenvalues();
    std::sort(vals.data(), vals.data() + vals.size());
    // Factor [[1, .5], [.5, 1]] has eigenvalues {0.5, 1.5}; products scaled
    // by beta / (kappa + 1).
    const double s = beta / (kappa + 1.0);
    CHECK(vals(0) == doctest::Approx(0.25 * s).epsilon(1e-10));
    CHECK(vals(1) == doctest::Approx(0.75 * s).epsilon(1e-10));
    CHECK(vals(2) == doctest::Approx(0.75 * s).epsilon(1e-10));
    CHECK(vals(3) == doctest::Approx(2.25 * s).epsilon(1e-10));
}

TEST_CASE("correlation matrices stay Hermitian PSD across r") {
    for (double r_coef : {0.0, 0.2, 0.5, 0.9, 0.99}) {
        ScenarioConfig cfg = small_array_config(4, 3);
        cfg.correlation_coeff = r_coef;
        const auto r = correlation_matrix(1.0, 1.0, cfg);
        CHECK((r - r.adjoint()).norm() < 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * r.trace().real());
    }
}

TEST_CASE("hermitian_sqrt reconstructs the matrix and rejects indefinite input") {
    ScenarioConfig cfg = small_array_config(2, 2);
    cfg.correlation_coeff = 0.6;
    const auto r = correlation_matrix(1.3, 0.5, cfg);
    const auto s = hermitian_sqrt(r);
    CHECK((s * s.adjoint() - r).norm() < 1e-12 * r.norm());

    Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Identity(3, 3);
    indefinite(2, 2) = -1.0;
    CHECK_THROWS_AS(hermitian_sqrt(indefinite), std::runtime_error);

    // The zero matrix is a valid edge case.
    CHECK(hermitian_sqrt(Eigen::MatrixXcd::Zero(3, 3)).norm() == 0.0);
}

TEST_CASE("zero covariance draws the LoS vector deterministically") {
    ChannelStatistics stats;
    stats.beta_ap = Eigen::MatrixXd::Constant(1, 1, 1.0);
    stats.beta_sat = Eigen::VectorXd::Constant(1, 1.0);
    stats.kappa = Eigen::VectorXd::Constant(1, 1.0);
    stats.elevation_rad = Eigen::VectorXd::Zero(1);
    stats.azimuth_rad = Eigen::VectorXd::Zero(1);
    stats.los.push_back(Eigen::VectorXcd::Constant(4, std::complex<double>(1.0, -2.0)));
    stats.corr.push_back(Eigen::MatrixXcd::Zero(4, 4));

    Rng rng(5);
    const auto real = draw_realization(stats, rng);
    CHECK((real.g_sat.col(0) - stats.los[0]).norm() == 0.0);
}

TEST_CASE("AP channel variance matches beta") {
    ChannelStatistics stats;
    stats.beta_ap = Eigen::MatrixXd::Constant(1, 1, 1.0);
    stats.beta_sat = Eigen::VectorXd::Constant(1, 1.0);
    stats.kappa = Eigen::VectorXd::Zero(1);
    stats.elevation_rad = Eigen::VectorXd::Zero(1);
    stats.azimuth_rad = Eigen::VectorXd::Zero(1);
    stats.los.push_back(Eigen::VectorXcd::Zero(1));
    stats.corr.push_back(Eigen::MatrixXcd::Zero(1, 1));

    Rng rng(17);
    const long n = 1000000;
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
        acc += std::norm(draw_realization(stats, rng).g_ap(0, 0));
    }
    CHECK(acc / static_cast<double>(n) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("satellite draws reproduce mean and covariance") {
    ScenarioConfig cfg = small_array_config(2, 2);
    cfg.correlation_coeff = 0.5;
    const double beta = 2.0;
    const double kappa = 1.5;

    ChannelStatistics stats;
    stats.beta_ap = Eigen::MatrixXd::Constant(1, 1, 1.0);
    stats.beta_sat = Eigen::VectorXd::Constant(1, beta);
    stats.kappa = Eigen::VectorXd::Constant(1, kappa);
    stats.elevation_rad = Eigen::VectorXd::Constant(1, 0.6);
    stats.azimuth_rad = Eigen::VectorXd::Constant(1, 0.2);
    stats.los.push_back(los_vector(0.6, 0.2, kappa, beta, cfg));
    stats.corr.push_back(correlation_matrix(beta, kappa, cfg));
    stats.corr_sqrt.push_back(hermitian_sqrt(stats.corr[0]));

    Rng rng(23);
    const long n = 100000;
    Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(4);
    Eigen::MatrixXcd second = Eigen::MatrixXcd::Zero(4, 4);
    for (long i = 0; i < n; ++i) {
        const Eigen::VectorXcd g = draw_realization(stats, rng).g_sat.col(0);
        const Eigen::VectorXcd d = g - stats.los[0];
        mean += g;
        second += d * d.adjoint();
    }
    mean /= static_cast<double>(n);
    second /= static_cast<double>(n);

    CHECK((mean - stats.los[0]).norm() / stats.los[0].norm() < 0.01);
    CHECK((second - stats.corr[0]).norm() / stats.corr[0].norm() < 0.02);
}

TEST_CASE("statistics build deterministically and draws are reproducible") {
    ScenarioConfig cfg;
    cfg.num_aps = 3;
    cfg.num_users = 2;
    cfg.sat_array_h = 2;
    cfg.sat_array_v = 2;

    Rng grng = make_stream(9, {kStreamApLayout});
    const Geometry geom = build_geometry(cfg, grng);

    Rng s1 = make_stream(9, {kStreamSlot, 4});
    Rng s2 = make_stream(9, {kStreamSlot, 4});
    const auto a = build_statistics(cfg, geom, s1);
    const auto b = build_statistics(cfg, geom, s2);
    CHECK(a.beta_ap == b.beta_ap);
    CHECK(a.beta_sat == b.beta_sat);

    const auto ra = draw_realization(a, s1);
    const auto rb = draw_realization(b, s2);
    CHECK(ra.g_ap == rb.g_ap);
    CHECK(ra.g_sat == rb.g_sat);
}

TEST_CASE("pathloss monotonicity survives the statistics pipeline") {
    // With shadowing disabled, a user farther from every AP has uniformly
    // weaker terrestrial links.
    ScenarioConfig cfg;
    cfg.num_aps = 2;
    cfg.num_users = 2;
    cfg.sat_array_h = 2;
    cfg.sat_array_v = 2;
    cfg.shadow_std_terrestrial_db = 0.0;
    cfg.shadow_std_sat_db = 0.0;

    Geometry geom;
    geom.ap_positions_km = {{0.1, 0.1, 0.01}, {0.2, 0.2, 0.01}};
    geom.user_positions_km = {{0.3, 0.3, 0.0015}, {3.0, 3.0, 0.0015}};
    Rng rng(1);
    const auto stats = build_statistics(cfg, geom, rng);
    CHECK(stats.beta_ap(0, 0) > stats.beta_ap(0, 1));
    CHECK(stats.beta_ap(1, 0) > stats.beta_ap(1, 1));
}

TEST_CASE("channel statistics JSON cache round trip") {
    ScenarioConfig cfg;
    cfg.num_aps = 2;
    cfg.num_users = 2;
    cfg.sat_array_h = 2;
    cfg.sat_array_v = 2;
    Rng grng = make_stream(2, {kStreamApLayout});
    const Geometry geom = build_geometry(cfg, grng);
    Rng rng = make_stream(2, {kStreamSlot, 0});
    const auto stats = build_statistics(cfg, geom, rng);

    const auto j = to_json(stats);
    const auto back = channel_statistics_from_json(j);
    CHECK((back.beta_ap - stats.beta_ap).norm() == 0.0);
    CHECK((back.beta_sat - stats.beta_sat).norm() == 0.0);
    for (size_t k = 0; k < stats.los.size(); ++k) {
        CHECK((back.los[k] - stats.los[k]).norm() == 0.0);
        CHECK((back.corr[k] - stats.corr[k]).norm() == 0.0);
    }
}
