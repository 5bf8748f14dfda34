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

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "stnet/config.hpp"
#include "stnet/sinr.hpp"

namespace stnet {

// Thrown when the inner fixed-point loop exceeds its iteration budget;
// distinct from an infeasible SINR target, which is a normal outcome.
struct nonconvergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FixedPointResult {
    Eigen::VectorXd rho; // converged power vector [W]
    bool feasible = false;
    int iterations = 0;
};

struct MaxMinSolution {
    enum class Status { Converged, InfeasibleAtZero };

    Eigen::VectorXd rho;       // per-user data powers [W]
    double xi_lower = 0.0;     // final bisection interval [xi_lower, xi_upper]
    double xi_upper = 0.0;
    Eigen::VectorXd rates_mbps;
    int outer_iterations = 0;
    long inner_iterations = 0;
    double solve_time_s = 0.0;
    Status status = Status::Converged;
};

// Standard interference function of user k at SINR target xi:
//   I_k(rho) = xi * (MI_k(rho) + NO_k) / coherent_gain_k^2.
// Positive, monotone and scalable in rho for xi > 0.
double interference_function(int k, const Eigen::VectorXd& rho, double xi, const SinrModel& model);

// Synchronous fixed-point iteration rho <- min(I(rho), p_max) starting from
// p_max, stopped when the relative total-power change drops to
// opts.inner_tolerance. Feasible when every user's converged SINR meets xi.
// An optional trace records the total power after each iteration.
FixedPointResult solve_fixed_power(double xi, const Eigen::VectorXd& p_max, const SinrModel& model,
                                   const SolverOptions& opts,
                                   std::vector<double>* total_power_trace = nullptr);

// Interference-free SINR bound: min_k p_max_k * coherent_gain_k^2 / NO_k.
double xi_upper_bound(const SinrModel& model, const Eigen::VectorXd& p_max);

// Bisection over the common SINR target on [0, xi_upper_bound], keeping the
// power vector of the highest feasible midpoint.
MaxMinSolution max_min_allocate(const SinrModel& model, const Eigen::VectorXd& p_max,
                                const SolverOptions& opts);
MaxMinSolution max_min_allocate(const ChannelStatistics& stats, const EstimateStatistics& est,
                                SystemVariant variant, const ScenarioConfig& cfg);

struct ValidationReport {
    bool within_budget = false; // (a) 0 <= rho <= p_max
    bool meets_target = false;  // (b) every SINR >= xi_lower
    bool near_optimal = false;  // (c) a target slightly above xi_upper is infeasible
    double rate_gap_mbps = 0.0; // (d) max_k R_k - min_k R_k at the solution
    std::string detail;

    bool ok() const { return within_budget && meets_target && near_optimal; }
};

ValidationReport validate_solution(const MaxMinSolution& sol, const SinrModel& model,
                                   const Eigen::VectorXd& p_max, const SolverOptions& opts);

// JSON report: powers in W and dBW, the SINR target interval, per-user
// rates, iteration counts and the solve wall time.
nlohmann::json solution_report(const MaxMinSolution& sol);

} // namespace stnet
