// SPDX-License-Identifier: Apache-2.0
#include "roomrom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "roomrom/errors.hpp"

namespace roomrom {

std::string room_shape_name(RoomShape s) {
  switch (s) {
    case RoomShape::Square: return "square";
    case RoomShape::Rectangle: return "rectangle";
    case RoomShape::LShape: return "lshape";
    case RoomShape::Corridor: return "corridor";
    case RoomShape::Box: return "box";
  }
  return "?";
}

RoomShape room_shape_from_name(const std::string& name) {
  if (name == "square") return RoomShape::Square;
  if (name == "rectangle") return RoomShape::Rectangle;
  if (name == "lshape") return RoomShape::LShape;
  if (name == "corridor") return RoomShape::Corridor;
  if (name == "box") return RoomShape::Box;
  throw ConfigError("unknown room shape '" + name + "'");
}

int RoomGeometry::dim() const { return shape == RoomShape::Box ? 3 : 2; }

std::array<double, 3> RoomGeometry::bounds() const {
  switch (shape) {
    case RoomShape::Square: return {dims[0], dims[0], 0.0};
    case RoomShape::Rectangle:
    case RoomShape::Corridor: return {dims[0], dims[1], 0.0};
    case RoomShape::LShape: return {dims[0], dims[0], 0.0};
    case RoomShape::Box: return {dims[0], dims[1], dims[2]};
  }
  return {0, 0, 0};
}

namespace {

// L-shape occupancy: [0,L]x[0,s] plus [L-s,L]x[s,L] (top-left block removed).
bool lshape_contains(double L, double s, double x, double y, double tol) {
  if (x < -tol || x > L + tol || y < -tol || y > L + tol) return false;
  return y <= s + tol || x >= L - s - tol;
}

double rect_distance(double x0, double y0, double x1, double y1, double x, double y) {
  const double dx = std::max({x0 - x, 0.0, x - x1});
  const double dy = std::max({y0 - y, 0.0, y - y1});
  return std::hypot(dx, dy);
}

}  // namespace

bool RoomGeometry::contains(const std::array<double, 3>& x, double tol) const {
  const auto b = bounds();
  if (shape == RoomShape::LShape) return lshape_contains(dims[0], dims[1], x[0], x[1], tol);
  for (int a = 0; a < dim(); ++a)
    if (x[a] < -tol || x[a] > b[a] + tol) return false;
  return true;
}

double RoomGeometry::distance_outside(const std::array<double, 3>& x) const {
  if (contains(x)) return 0.0;
  if (shape == RoomShape::LShape) {
    const double L = dims[0], s = dims[1];
    return std::min(rect_distance(0, 0, L, s, x[0], x[1]),
                    rect_distance(L - s, s, L, L, x[0], x[1]));
  }
  const auto b = bounds();
  double d2 = 0.0;
  for (int a = 0; a < dim(); ++a) {
    const double da = std::max({-x[a], 0.0, x[a] - b[a]});
    d2 += da * da;
  }
  return std::sqrt(d2);
}

std::vector<std::string> RoomGeometry::surface_labels() const {
  std::vector<std::string> out;
  if (dim() == 2) {
    out = {"FL", "CE", "WL", "WR"};
  } else {
    out = {"FL", "CE", "WS", "WN", "WW", "WE"};
  }
  if (patch) out.push_back(patch->name);
  return out;
}

void RoomGeometry::validate() const {
  const size_t want = shape == RoomShape::Square ? 1 : (shape == RoomShape::Box ? 3 : 2);
  if (dims.size() != want) {
    std::ostringstream os;
    os << "geometry '" << room_shape_name(shape) << "' needs " << want << " dimension(s), got "
       << dims.size();
    throw ConfigError(os.str());
  }
  for (double d : dims)
    if (!(d > 0.0)) throw ConfigError("geometry dimensions must be positive");
  if (shape == RoomShape::LShape && !(dims[1] < dims[0]))
    throw ConfigError("L-shape short side must be smaller than the long side");
  if (patch) {
    const auto labels = [&] {
      auto l = surface_labels();
      l.pop_back();
      return l;
    }();
    if (std::find(labels.begin(), labels.end(), patch->parent) == labels.end())
      throw ConfigError("patch parent surface '" + patch->parent + "' does not exist");
    if (patch->name == patch->parent || patch->name.empty())
      throw ConfigError("patch label must be non-empty and distinct from its parent");
    if (dim() != 3) throw ConfigError("surface patches are only supported on 3D faces");
    // locate the parent's face axis and verify the patch rectangle fits
    for (int axis = 0; axis < 3; ++axis)
      for (int side = 0; side < 2; ++side)
        if (face_label(3, axis, side) == patch->parent) {
          const auto inpl = face_inplane_axes(axis);
          const auto b = bounds();
          for (int k = 0; k < 2; ++k) {
            if (!(patch->lo[k] < patch->hi[k]))
              throw ConfigError("patch extents must satisfy lo < hi");
            if (patch->lo[k] < -1e-12 || patch->hi[k] > b[inpl[k]] + 1e-12)
              throw ConfigError("patch must lie entirely within its parent surface");
          }
        }
  }
}

RoomGeometry RoomGeometry::square(double L) { return {RoomShape::Square, {L}, std::nullopt}; }
RoomGeometry RoomGeometry::rectangle(double Lx, double Ly) {
  return {RoomShape::Rectangle, {Lx, Ly}, std::nullopt};
}
RoomGeometry RoomGeometry::lshape(double long_side, double short_side) {
  return {RoomShape::LShape, {long_side, short_side}, std::nullopt};
}
RoomGeometry RoomGeometry::corridor(double Lx, double Ly) {
  return {RoomShape::Corridor, {Lx, Ly}, std::nullopt};
}
RoomGeometry RoomGeometry::box(double Lx, double Ly, double Lz) {
  return {RoomShape::Box, {Lx, Ly, Lz}, std::nullopt};
}

std::string face_label(int dim, int axis, int side) {
  if (dim == 2) {
    if (axis == 0) return side ? "WR" : "WL";
    return side ? "CE" : "FL";
  }
  if (axis == 0) return side ? "WE" : "WW";
  if (axis == 1) return side ? "WN" : "WS";
  return side ? "CE" : "FL";
}

std::array<int, 2> face_inplane_axes(int axis) {
  if (axis == 0) return {1, 2};
  if (axis == 1) return {0, 2};
  return {0, 1};
}

}  // namespace roomrom
