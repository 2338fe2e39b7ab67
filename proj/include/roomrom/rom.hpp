// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roomrom/fom.hpp"

namespace roomrom {

struct SnapshotColumn {
  int run = 0;
  int frequency = 0;
  char part = 'r';  // 'r' = real, 'i' = imaginary
};

// Real snapshot matrix: per run and plan frequency, the real and imaginary
// parts of the solution field as separate columns.
struct SnapshotSet {
  Eigen::MatrixXd columns;  // N x (2 * N_s * runs)
  std::vector<SnapshotColumn> provenance;
};

// Runs must share one mesh (N) and plan (N_s); columns are ordered
// run-major, frequency-minor, Re before Im.
SnapshotSet collect_snapshots(const std::vector<const LaplaceSolutionSet*>& runs);

// Full POD spectrum. sigma holds all min(N, cols) singular values; U holds
// the orthonormal modes above the numerical-rank floor.
struct PodBasis {
  Eigen::MatrixXd U;
  Eigen::VectorXd sigma;
  // energy curve per mode: sigma_i / sum_j sigma_j
  Eigen::VectorXd energy_fractions() const;
};

PodBasis pod_basis(const SnapshotSet& snapshots);

struct ReducedBasis {
  Eigen::MatrixXd Phi;    // N x N_rb, orthonormal columns
  Eigen::VectorXd sigma;  // full spectrum (for reporting)
  double eps_pod = 0.0;
  int N_rb = 0;
};

// Smallest N_rb with sum_{i<=N_rb} sigma_i^2 / sum_i sigma_i^2 >= 1 - eps_pod.
int n_rb_for_tolerance(const Eigen::VectorXd& sigma, double eps_pod);

// eps_pod = 0 keeps every mode above the numerical-rank floor (untruncated).
ReducedBasis truncate_basis(const PodBasis& basis, double eps_pod);

// Galerkin-projected operators. The real/imaginary split solve projected by
// the block-diagonal (cotangent-lift) basis diag(Phi, Phi) is algebraically
// the complex N_rb system assembled from these blocks, so each real operator
// is projected by Phi directly.
struct ReducedModel {
  Eigen::MatrixXd M_r;
  Eigen::MatrixXd S_r;
  std::map<std::string, Eigen::MatrixXd> boundary;  // B_k per surface
  Eigen::VectorXd g;                                // Phi^T M p0
  Eigen::MatrixXd receivers;                        // N_rb x n_receivers
  int N_rb = 0;
  double c = kSoundSpeed;
  double rho = kAirDensity;
  double eps_pod = 0.0;
};

ReducedModel project_operators(const Eigen::Ref<const Eigen::MatrixXd>& Phi,
                               const FomOperators& ops,
                               const std::vector<Interpolant>& receivers);

struct RomSolution {
  Eigen::MatrixXcd coefficients;     // N_rb x N_s (empty unless requested)
  Eigen::MatrixXcd receiver_values;  // n_receivers x N_s
  Eigen::VectorXd solve_seconds;
};

struct RomSolveOptions {
  bool keep_coefficients = false;
};

// Dense complex solves of [s^2 M_r + c^2 S_r + s c^2 rho sum_k Y_k(s) B_k] a = s g
// on the lower conjugate half of the plan, mirrored to the full grid.
RomSolution solve_rom(const ReducedModel& model, const AdmittanceMap& admittances,
                      const WeeksPlan& plan, const RomSolveOptions& options = {});

Eigen::VectorXcd reconstruct_field(const Eigen::Ref<const Eigen::MatrixXd>& Phi,
                                   const Eigen::Ref<const Eigen::VectorXcd>& a);

}  // namespace roomrom
