// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "roomrom/admittance.hpp"
#include "roomrom/operators.hpp"
#include "roomrom/weeks.hpp"

namespace roomrom {

// Per-frequency solutions of K(s_n) p = s_n M p0 with
// K(s) = s^2 M + c^2 S + s c^2 rho sum_k Y_k(s) M_Gamma_k.
struct LaplaceSolutionSet {
  Eigen::MatrixXcd fields;           // N x N_s (empty when keep_fields = false)
  Eigen::MatrixXcd receiver_values;  // n_receivers x N_s
  Eigen::VectorXd solve_seconds;     // per frequency
  int N = 0;
  int N_s = 0;
};

struct FomSolveOptions {
  int workers = 1;
  bool keep_fields = true;
  // residual bound ||K p - s M p0|| / ||s M p0|| per frequency
  double residual_tolerance = 1e-10;
  // optional processing order of the lower-half frequency indices (testing hook)
  std::optional<std::vector<int>> solve_order;
};

// Solves the lower conjugate half of the plan and mirrors the rest.
LaplaceSolutionSet solve_fom(const FomOperators& ops, const AdmittanceMap& admittances,
                             const WeeksPlan& plan,
                             const std::vector<Interpolant>& receivers,
                             const FomSolveOptions& options = {});

struct ImpulseResponse {
  Eigen::VectorXd samples;
  double f_s = 0.0;
  double coefficient_tail = 0.0;
  bool tail_warning = false;
};

// Time synthesis of one receiver row via the Weeks expansion.
ImpulseResponse impulse_response(const Eigen::Ref<const Eigen::RowVectorXcd>& receiver_row,
                                 const WeeksPlan& plan);

// Interpolates the receiver from stored fields, then synthesizes.
ImpulseResponse impulse_response_at(const LaplaceSolutionSet& sol, const Mesh& mesh,
                                    const std::array<double, 3>& receiver,
                                    const WeeksPlan& plan);

void save_impulse_response_csv(const ImpulseResponse& ir, const std::string& path);
ImpulseResponse load_impulse_response_csv(const std::string& path);

}  // namespace roomrom
