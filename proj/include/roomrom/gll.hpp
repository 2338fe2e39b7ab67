// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace roomrom {

// Gauss-Lobatto-Legendre rule of a given polynomial order (order+1 points on [-1,1]).
struct GllRule {
  Eigen::VectorXd nodes;    // ascending, endpoints included
  Eigen::VectorXd weights;
  Eigen::MatrixXd diff;     // diff(i,j) = l_j'(nodes(i)), l_j = Lagrange basis
  Eigen::MatrixXd stiff1d;  // diff^T * diag(weights) * diff, reference element
};

const GllRule& gll_rule(int order);

// Lagrange basis values of the rule's nodes evaluated at xi in [-1,1].
Eigen::VectorXd lagrange_values(const Eigen::VectorXd& nodes, double xi);

}  // namespace roomrom
