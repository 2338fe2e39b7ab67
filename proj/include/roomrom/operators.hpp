// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Sparse>
#include <array>
#include <map>
#include <string>

#include "roomrom/materials.hpp"
#include "roomrom/mesh.hpp"

namespace roomrom {

using SparseMat = Eigen::SparseMatrix<double>;

// Assembled spectral-element operators of the wave problem plus the
// Gaussian initial state.
struct FomOperators {
  SparseMat M;                                // mass, SPD (diagonal under GLL)
  SparseMat S;                                // stiffness, SPSD, S*1 = 0
  std::map<std::string, SparseMat> boundary_mass;  // per-surface M_Gamma
  Eigen::VectorXd p0;
  std::array<double, 3> source{0, 0, 0};
  double sigma_g = 0.1;
  double c = kSoundSpeed;
  double rho = kAirDensity;
};

SparseMat assemble_mass(const Mesh& mesh);
SparseMat assemble_stiffness(const Mesh& mesh);
SparseMat assemble_boundary_mass(const Mesh& mesh, const std::string& label);

// p0(node) = exp(-|x_node - x_s|^2 / sigma_g^2); x_s must lie inside the room.
Eigen::VectorXd gaussian_initial_state(const Mesh& mesh, const std::array<double, 3>& x_s,
                                       double sigma_g);

FomOperators assemble_fom_operators(const Mesh& mesh, const std::array<double, 3>& x_s,
                                    double sigma_g);

// Coordinate-triplet binary sparse format (header + int32 row/col + float64
// value), see README.
void save_sparse(const SparseMat& m, const std::string& path);
SparseMat load_sparse(const std::string& path);

}  // namespace roomrom
