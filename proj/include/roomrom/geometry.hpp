// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace roomrom {

enum class RoomShape { Square, Rectangle, LShape, Corridor, Box };

std::string room_shape_name(RoomShape s);
RoomShape room_shape_from_name(const std::string& name);

// Rectangular sub-patch on a boundary surface (e.g. an absorber panel).
// lo/hi are the patch corners in the surface's in-plane coordinates,
// which are the global axes of the face sorted by axis index
// (for a +-y face in 3D that is (x, z)).
struct SurfacePatch {
  std::string parent;  // label of the surface carrying the patch
  std::string name;    // label under which the patch facets are reported
  std::array<double, 2> lo{0, 0};
  std::array<double, 2> hi{0, 0};
};

// Axis-aligned room. Dimensions in metres:
//   Square    {L}
//   Rectangle {Lx, Ly}
//   LShape    {long, short}   (two conforming blocks, see mesh builder)
//   Corridor  {Lx, Ly}
//   Box       {Lx, Ly, Lz}
struct RoomGeometry {
  RoomShape shape = RoomShape::Rectangle;
  std::vector<double> dims;
  std::optional<SurfacePatch> patch;

  int dim() const;
  // Bounding box extents per axis.
  std::array<double, 3> bounds() const;
  bool contains(const std::array<double, 3>& x, double tol = 1e-12) const;
  // Distance from x to the closure of the domain (0 inside).
  double distance_outside(const std::array<double, 3>& x) const;
  // Surface labels this geometry exposes, in a fixed order.
  std::vector<std::string> surface_labels() const;
  // Throws ConfigError when invariants are violated.
  void validate() const;

  static RoomGeometry square(double L);
  static RoomGeometry rectangle(double Lx, double Ly);
  static RoomGeometry lshape(double long_side, double short_side);
  static RoomGeometry corridor(double Lx, double Ly);
  static RoomGeometry box(double Lx, double Ly, double Lz);
};

// Label for the boundary face with outward normal along +-axis.
// 2D: -y FL, +y CE, -x WL, +x WR.  3D: -z FL, +z CE, -y WS, +y WN, -x WW, +x WE.
std::string face_label(int dim, int axis, int side);

// In-plane axes of a face (global axis indices, ascending).
std::array<int, 2> face_inplane_axes(int axis);

}  // namespace roomrom
