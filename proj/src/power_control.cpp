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

#include "stnet/power_control.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "stnet/units.hpp"

namespace stnet {

namespace {

// Relative slack when testing a converged SINR against its target; the
// iterates approach the fixed point from above, so only floating-point
// rounding has to be absorbed.
constexpr double kFeasibilitySlack = 1e-10;

void check_model(const SinrModel& model) {
    for (int k = 0; k < model.num_users(); ++k) {
        if (!(model.coherent_gain(k) > 0.0)) {
            throw std::invalid_argument("power control: user " + std::to_string(k) +
                                        " has zero coherent gain (no usable links)");
        }
    }
}

bool meets_target(const Eigen::VectorXd& rho, double xi, const SinrModel& model) {
    for (int k = 0; k < model.num_users(); ++k) {
        if (closed_form_sinr(k, rho, model).sinr < xi * (1.0 - kFeasibilitySlack)) {
            return false;
        }
    }
    return true;
}

} // namespace

double interference_function(int k, const Eigen::VectorXd& rho, double xi, const SinrModel& model) {
    if (xi < 0.0) {
        throw std::invalid_argument("interference_function: xi must be nonnegative");
    }
    check_model(model);
    const double gain = model.coherent_gain(k);
    return xi * (model.interference.row(k).dot(rho) + model.noise_floor(k)) / (gain * gain);
}

FixedPointResult solve_fixed_power(double xi, const Eigen::VectorXd& p_max, const SinrModel& model,
                                   const SolverOptions& opts,
                                   std::vector<double>* total_power_trace) {
    const int k_users = model.num_users();
    if (p_max.size() != k_users || p_max.minCoeff() < 0.0) {
        throw std::invalid_argument("solve_fixed_power: invalid power budget");
    }
    check_model(model);

    // I(rho) is affine: I = xi * (A rho + b) / gain^2 componentwise.
    const Eigen::MatrixXd rates =
        (model.interference.array().colwise() / model.coherent_gain.array().square()).matrix();
    const Eigen::VectorXd floor_term =
        (model.noise_floor.array() / model.coherent_gain.array().square()).matrix();

    FixedPointResult res;
    res.rho = p_max;
    double total_prev = res.rho.sum();
    if (total_power_trace) {
        total_power_trace->clear();
        total_power_trace->push_back(total_prev);
    }

    Eigen::VectorXd next(k_users);
    for (int m = 1; m <= opts.max_inner_iterations; ++m) {
        next = (xi * (rates * res.rho + floor_term)).cwiseMin(p_max);
        const double total = next.sum();
        res.rho = next;
        res.iterations = m;
        if (total_power_trace) {
            total_power_trace->push_back(total);
        }
        // Normalized total-power change between consecutive iterations.
        const double change = (total_prev > 0.0) ? std::abs(total - total_prev) / total_prev
                                                 : (total > 0.0 ? 1.0 : 0.0);
        total_prev = total;
        if (change <= opts.inner_tolerance) {
            res.feasible = meets_target(res.rho, xi, model);
            return res;
        }
    }
    throw nonconvergence_error("solve_fixed_power: no convergence within " +
                               std::to_string(opts.max_inner_iterations) + " iterations");
}

double xi_upper_bound(const SinrModel& model, const Eigen::VectorXd& p_max) {
    check_model(model);
    double bound = std::numeric_limits<double>::infinity();
    for (int k = 0; k < model.num_users(); ++k) {
        const double gain = model.coherent_gain(k);
        bound = std::min(bound, p_max(k) * gain * gain / model.noise_floor(k));
    }
    return bound;
}

MaxMinSolution max_min_allocate(const SinrModel& model, const Eigen::VectorXd& p_max,
                                const SolverOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const int k_users = model.num_users();

    // The running solution starts at full power; it is only replaced by
    // feasible fixed points, so instances whose optimum falls below the
    // final interval width keep the full-power allocation.
    MaxMinSolution sol;
    sol.rho = p_max;

    const double xi_up = xi_upper_bound(model, p_max);
    const double delta = opts.outer_tolerance_rel * xi_up;
    double lo = 0.0;
    double hi = xi_up;
    bool found = false;

    while (hi - lo > delta) {
        const double xi = 0.5 * (lo + hi);
        FixedPointResult inner = solve_fixed_power(xi, p_max, model, opts);
        sol.outer_iterations += 1;
        sol.inner_iterations += inner.iterations;
        if (inner.feasible) {
            lo = xi;
            sol.rho = std::move(inner.rho);
            found = true;
        } else {
            hi = xi;
        }
    }

    sol.xi_lower = lo;
    sol.xi_upper = hi;
    sol.status = MaxMinSolution::Status::Converged;
    if (!found) {
        // No midpoint was feasible. Probe a vanishing target to separate
        // "optimum below the interval resolution" from a genuinely empty
        // feasible set (possible only with a zero power budget).
        const double xi_tiny = (xi_up > 0.0 ? xi_up : 1.0) * 1e-12;
        FixedPointResult probe = solve_fixed_power(xi_tiny, p_max, model, opts);
        sol.inner_iterations += probe.iterations;
        if (!probe.feasible) {
            sol.status = MaxMinSolution::Status::InfeasibleAtZero;
            sol.rho = Eigen::VectorXd::Zero(k_users);
        }
    }
    sol.rates_mbps.resize(k_users);
    for (int k = 0; k < k_users; ++k) {
        sol.rates_mbps(k) = closed_form_sinr(k, sol.rho, model).rate_mbps;
    }
    sol.solve_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

MaxMinSolution max_min_allocate(const ChannelStatistics& stats, const EstimateStatistics& est,
                                SystemVariant variant, const ScenarioConfig& cfg) {
    const SinrModel model = build_sinr_model(stats, est, variant, cfg);
    const std::vector<double> pmax = cfg.max_power_vector();
    return max_min_allocate(model, Eigen::Map<const Eigen::VectorXd>(pmax.data(),
                                                                     static_cast<long>(pmax.size())),
                            cfg.solver);
}

ValidationReport validate_solution(const MaxMinSolution& sol, const SinrModel& model,
                                   const Eigen::VectorXd& p_max, const SolverOptions& opts) {
    ValidationReport rep;
    const int k_users = model.num_users();
    std::string detail;

    rep.within_budget = true;
    for (int k = 0; k < k_users; ++k) {
        if (sol.rho(k) < -1e-15 || sol.rho(k) > p_max(k) * (1.0 + 1e-12)) {
            rep.within_budget = false;
            detail += "power budget violated for user " + std::to_string(k) + "; ";
        }
    }

    rep.meets_target = true;
    double rate_min = std::numeric_limits<double>::infinity();
    double rate_max = 0.0;
    for (int k = 0; k < k_users; ++k) {
        const SinrBreakdown b = closed_form_sinr(k, sol.rho, model);
        rate_min = std::min(rate_min, b.rate_mbps);
        rate_max = std::max(rate_max, b.rate_mbps);
        if (b.sinr < sol.xi_lower * (1.0 - 1e-9)) {
            rep.meets_target = false;
            detail += "SINR target missed for user " + std::to_string(k) + "; ";
        }
    }
    rep.rate_gap_mbps = rate_max - rate_min;

    // A target slightly above the final upper bound must be infeasible,
    // otherwise the bisection stopped short of the optimum.
    const double probe = sol.xi_upper * (1.0 + 10.0 * opts.outer_tolerance_rel);
    FixedPointResult above = solve_fixed_power(probe, p_max, model, opts);
    rep.near_optimal = !above.feasible;
    if (!rep.near_optimal) {
        detail += "a target above xi_upper is still feasible; ";
    }

    rep.detail = detail;
    return rep;
}

nlohmann::json solution_report(const MaxMinSolution& sol) {
    nlohmann::json j;
    j["status"] = sol.status == MaxMinSolution::Status::Converged ? "converged"
                                                                  : "infeasible_at_zero";
    j["xi_interval"] = {sol.xi_lower, sol.xi_upper};
    j["outer_iterations"] = sol.outer_iterations;
    j["inner_iterations"] = sol.inner_iterations;
    j["solve_time_s"] = sol.solve_time_s;
    auto& powers = j["power_w"] = nlohmann::json::array();
    auto& powers_dbw = j["power_dbw"] = nlohmann::json::array();
    for (int k = 0; k < sol.rho.size(); ++k) {
        powers.push_back(sol.rho(k));
        if (sol.rho(k) > 0.0) {
            powers_dbw.push_back(watt_to_dbw(sol.rho(k)));
        } else {
            powers_dbw.push_back(nullptr);
        }
    }
    auto& rates = j["rates_mbps"] = nlohmann::json::array();
    for (int k = 0; k < sol.rates_mbps.size(); ++k) {
        rates.push_back(sol.rates_mbps(k));
    }
    return j;
}

} // namespace stnet
