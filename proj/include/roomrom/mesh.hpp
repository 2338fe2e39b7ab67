// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "roomrom/geometry.hpp"

namespace roomrom {

// One boundary face of one element, with its surface quadrature.
struct BoundaryFacet {
  int element = -1;
  int axis = 0;              // outward normal axis
  int side = 0;              // 0 = -axis face, 1 = +axis face
  std::vector<int> nodes;    // global node ids, in-plane lexicographic
  Eigen::VectorXd weights;   // nodal surface-quadrature weights (sum = measure)
  double measure = 0.0;
};

// Conforming tensor-product spectral-element mesh with GLL nodes.
// Built as a structured grid over the geometry's bounding box with an
// occupancy mask (L-shape) and per-axis breakpoints (patches, notches).
struct Mesh {
  int dim = 2;
  int order = 1;
  double f_u = 0.0;
  double ppw = 0.0;
  RoomGeometry geometry;
  std::array<std::vector<double>, 3> axis_edges;  // element edges per axis
  Eigen::MatrixXd nodes;                          // N x dim
  Eigen::MatrixXi elements;                       // E x (order+1)^dim
  std::vector<std::array<int, 3>> element_cells;  // grid coords per element
  std::map<std::string, std::vector<BoundaryFacet>> boundary;

  long num_nodes() const { return nodes.rows(); }
  int num_elements() const { return static_cast<int>(elements.rows()); }
  int nodes_per_element() const { return static_cast<int>(elements.cols()); }
  std::vector<std::string> labels() const;
  // Throws ConfigError for unknown labels, naming the available ones.
  const std::vector<BoundaryFacet>& boundary_facets(const std::string& label) const;
  // Unique ascending node ids of a labeled surface.
  std::vector<int> boundary_node_set(const std::string& label) const;

  std::array<double, 3> element_origin(int e) const;
  std::array<double, 3> element_size(int e) const;
};

// Elements per axis so that (n*order + 1) axis nodes resolve ppw points per
// wavelength at f_u (c = 343 m/s).
int elements_per_axis(double length, int order, double f_u, double ppw);

Mesh build_room_mesh(const RoomGeometry& geometry, int order, double f_u, double ppw);

struct PointLocation {
  int element = -1;
  std::array<double, 3> xi{0, 0, 0};  // reference coordinates in [-1,1]^dim
};

// Throws ConfigError (with the nearest boundary distance) for outside points.
// Points on shared faces resolve to the lowest element id.
PointLocation locate_point(const Mesh& mesh, const std::array<double, 3>& x);

// Nodal interpolation weights for evaluating a field at x.
struct Interpolant {
  std::vector<int> nodes;
  Eigen::VectorXd weights;
};
Interpolant interpolation_at(const Mesh& mesh, const std::array<double, 3>& x);

// Map element-local reference coordinates back to physical space.
std::array<double, 3> local_to_physical(const Mesh& mesh, int element,
                                        const std::array<double, 3>& xi);

// Binary mesh format "ARMESH1": header, float64 coordinates, uint32
// connectivity, JSON label/structure table. See docs in the repo README.
void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

}  // namespace roomrom
