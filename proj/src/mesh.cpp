// SPDX-License-Identifier: Apache-2.0
#include "roomrom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "roomrom/errors.hpp"
#include "roomrom/gll.hpp"

namespace roomrom {

namespace {
constexpr double kSoundSpeed = 343.0;

std::vector<double> segment_edges(const std::vector<double>& breaks, int order, double f_u,
                                  double ppw) {
  // Resolution target comes from the whole-axis rule; segments round up.
  const double L = breaks.back() - breaks.front();
  const int n_axis = elements_per_axis(L, order, f_u, ppw);
  const double h_target = L / n_axis;
  std::vector<double> edges;
  edges.push_back(breaks.front());
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double seg = breaks[k + 1] - breaks[k];
    const int n = std::max(1, static_cast<int>(std::ceil(seg / h_target - 1e-9)));
    for (int i = 1; i <= n; ++i) edges.push_back(breaks[k] + seg * i / n);
    edges.back() = breaks[k + 1];
  }
  return edges;
}

struct GridIndexer {
  std::array<int, 3> ne{1, 1, 1};   // elements per axis
  std::array<int, 3> nn{1, 1, 1};   // 1D nodes per axis
  int order = 1;
  long full_node(int gx, int gy, int gz) const {
    return gx + static_cast<long>(nn[0]) * (gy + static_cast<long>(nn[1]) * gz);
  }
};

}  // namespace

int elements_per_axis(double length, int order, double f_u, double ppw) {
  const double axis_nodes = ppw * f_u * length / kSoundSpeed;
  const int n = static_cast<int>(std::ceil((axis_nodes - 1.0) / order - 1e-12));
  return std::max(1, n);
}

std::vector<std::string> Mesh::labels() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : boundary) out.push_back(k);
  return out;
}

const std::vector<BoundaryFacet>& Mesh::boundary_facets(const std::string& label) const {
  auto it = boundary.find(label);
  if (it == boundary.end()) {
    std::ostringstream os;
    os << "unknown surface label '" << label << "'; available:";
    for (const auto& l : labels()) os << ' ' << l;
    throw ConfigError(os.str());
  }
  return it->second;
}

std::vector<int> Mesh::boundary_node_set(const std::string& label) const {
  std::set<int> ids;
  for (const auto& f : boundary_facets(label)) ids.insert(f.nodes.begin(), f.nodes.end());
  return {ids.begin(), ids.end()};
}

std::array<double, 3> Mesh::element_origin(int e) const {
  std::array<double, 3> o{0, 0, 0};
  for (int a = 0; a < dim; ++a) o[a] = axis_edges[a][element_cells[e][a]];
  return o;
}

std::array<double, 3> Mesh::element_size(int e) const {
  std::array<double, 3> h{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    const int c = element_cells[e][a];
    h[a] = axis_edges[a][c + 1] - axis_edges[a][c];
  }
  return h;
}

Mesh build_room_mesh(const RoomGeometry& geometry, int order, double f_u, double ppw) {
  geometry.validate();
  if (order < 1) throw ConfigError("order must be >= 1");
  if (!(f_u > 0.0)) throw ConfigError("f_u must be positive");
  if (!(ppw >= 2.0)) throw ConfigError("ppw must be >= 2");

  const int dim = geometry.dim();
  const auto bb = geometry.bounds();
  const auto& rule = gll_rule(order);

  // Per-axis breakpoints: box corners, L-shape notch, patch edges.
  std::array<std::vector<double>, 3> breaks;
  for (int a = 0; a < dim; ++a) breaks[a] = {0.0, bb[a]};
  if (geometry.shape == RoomShape::LShape) {
    const double L = geometry.dims[0], s = geometry.dims[1];
    breaks[0].push_back(L - s);
    breaks[1].push_back(s);
  }
  if (geometry.patch) {
    for (int axis = 0; axis < 3; ++axis)
      for (int side = 0; side < 2; ++side)
        if (face_label(3, axis, side) == geometry.patch->parent) {
          const auto inpl = face_inplane_axes(axis);
          for (int k = 0; k < 2; ++k) {
            breaks[inpl[k]].push_back(geometry.patch->lo[k]);
            breaks[inpl[k]].push_back(geometry.patch->hi[k]);
          }
        }
  }
  for (int a = 0; a < dim; ++a) {
    std::sort(breaks[a].begin(), breaks[a].end());
    breaks[a].erase(std::unique(breaks[a].begin(), breaks[a].end(),
                                [&](double x, double y) { return std::abs(x - y) < 1e-12; }),
                    breaks[a].end());
  }

  Mesh mesh;
  mesh.dim = dim;
  mesh.order = order;
  mesh.f_u = f_u;
  mesh.ppw = ppw;
  mesh.geometry = geometry;

  GridIndexer grid;
  grid.order = order;
  std::array<std::vector<double>, 3> coords1d;
  for (int a = 0; a < dim; ++a) {
    mesh.axis_edges[a] = segment_edges(breaks[a], order, f_u, ppw);
    grid.ne[a] = static_cast<int>(mesh.axis_edges[a].size()) - 1;
    grid.nn[a] = grid.ne[a] * order + 1;
    coords1d[a].assign(grid.nn[a], 0.0);
    for (int k = 0; k < grid.ne[a]; ++k) {
      const double x0 = mesh.axis_edges[a][k], x1 = mesh.axis_edges[a][k + 1];
      for (int i = 0; i <= order; ++i)
        coords1d[a][k * order + i] = (i == 0) ? x0
                                   : (i == order) ? x1
                                   : x0 + (rule.nodes(i) + 1.0) * 0.5 * (x1 - x0);
    }
  }

  // Occupied element cells, in (z, y, x) lexicographic order (x fastest).
  auto cell_occupied = [&](int ex, int ey, int ez) {
    std::array<double, 3> center{0, 0, 0};
    const std::array<int, 3> c{ex, ey, ez};
    for (int a = 0; a < dim; ++a)
      center[a] = 0.5 * (mesh.axis_edges[a][c[a]] + mesh.axis_edges[a][c[a] + 1]);
    return geometry.contains(center);
  };
  std::vector<int> cell_to_element(
      static_cast<size_t>(grid.ne[0]) * grid.ne[1] * grid.ne[2], -1);
  auto cell_index = [&](int ex, int ey, int ez) {
    return ex + static_cast<long>(grid.ne[0]) * (ey + static_cast<long>(grid.ne[1]) * ez);
  };
  for (int ez = 0; ez < grid.ne[2]; ++ez)
    for (int ey = 0; ey < grid.ne[1]; ++ey)
      for (int ex = 0; ex < grid.ne[0]; ++ex)
        if (dim == 2 ? cell_occupied(ex, ey, 0) : cell_occupied(ex, ey, ez)) {
          cell_to_element[cell_index(ex, ey, ez)] = static_cast<int>(mesh.element_cells.size());
          mesh.element_cells.push_back({ex, ey, ez});
        }
  const int E = static_cast<int>(mesh.element_cells.size());
  const int npe = static_cast<int>(std::pow(order + 1, dim) + 0.5);

  // Compact global node numbering in full-grid (coordinate-lexicographic) order.
  const long full_n = static_cast<long>(grid.nn[0]) * grid.nn[1] * grid.nn[2];
  std::vector<int> compact(full_n, -1);
  auto for_element_nodes = [&](const std::array<int, 3>& cell, auto&& fn) {
    const int o1 = order + 1;
    for (int c = 0; c < (dim == 3 ? o1 : 1); ++c)
      for (int b = 0; b < o1; ++b)
        for (int a = 0; a < o1; ++a) {
          const int local = a + o1 * (b + (dim == 3 ? o1 * c : 0));
          fn(local, cell[0] * order + a, cell[1] * order + b, dim == 3 ? cell[2] * order + c : 0);
        }
  };
  for (const auto& cell : mesh.element_cells)
    for_element_nodes(cell, [&](int, int gx, int gy, int gz) {
      compact[grid.full_node(gx, gy, gz)] = 0;
    });
  long N = 0;
  for (long i = 0; i < full_n; ++i)
    if (compact[i] == 0) compact[i] = static_cast<int>(N++);
    else compact[i] = -1;

  mesh.nodes.resize(N, dim);
  for (int gz = 0; gz < grid.nn[2]; ++gz)
    for (int gy = 0; gy < grid.nn[1]; ++gy)
      for (int gx = 0; gx < grid.nn[0]; ++gx) {
        const int id = compact[grid.full_node(gx, gy, gz)];
        if (id < 0) continue;
        mesh.nodes(id, 0) = coords1d[0][gx];
        mesh.nodes(id, 1) = coords1d[1][gy];
        if (dim == 3) mesh.nodes(id, 2) = coords1d[2][gz];
      }

  mesh.elements.resize(E, npe);
  for (int e = 0; e < E; ++e)
    for_element_nodes(mesh.element_cells[e], [&](int local, int gx, int gy, int gz) {
      mesh.elements(e, local) = compact[grid.full_node(gx, gy, gz)];
    });

  // Boundary facets: element faces whose neighbor cell is absent.
  auto neighbor_occupied = [&](std::array<int, 3> cell, int axis, int side) {
    cell[axis] += side ? 1 : -1;
    if (cell[axis] < 0 || cell[axis] >= grid.ne[axis]) return false;
    return cell_to_element[cell_index(cell[0], cell[1], cell[2])] >= 0;
  };
  const auto& w = rule.weights;
  for (int e = 0; e < E; ++e) {
    const auto& cell = mesh.element_cells[e];
    const auto h = mesh.element_size(e);
    for (int axis = 0; axis < dim; ++axis)
      for (int side = 0; side < 2; ++side) {
        if (neighbor_occupied(cell, axis, side)) continue;
        BoundaryFacet f;
        f.element = e;
        f.axis = axis;
        f.side = side;
        const int o1 = order + 1;
        std::array<int, 3> local{0, 0, 0};
        local[axis] = side ? order : 0;
        if (dim == 2) {
          const int t = 1 - axis;
          f.nodes.resize(o1);
          f.weights.resize(o1);
          for (int i = 0; i < o1; ++i) {
            local[t] = i;
            f.nodes[i] = mesh.elements(e, local[0] + o1 * local[1]);
            f.weights(i) = w(i) * 0.5 * h[t];
          }
        } else {
          const auto inpl = face_inplane_axes(axis);
          f.nodes.resize(o1 * o1);
          f.weights.resize(o1 * o1);
          int k = 0;
          for (int j = 0; j < o1; ++j)
            for (int i = 0; i < o1; ++i, ++k) {
              local[inpl[0]] = i;
              local[inpl[1]] = j;
              f.nodes[k] = mesh.elements(e, local[0] + o1 * (local[1] + o1 * local[2]));
              f.weights(k) = w(i) * w(j) * 0.25 * h[inpl[0]] * h[inpl[1]];
            }
        }
        f.measure = f.weights.sum();

        std::string label = face_label(dim, axis, side);
        if (geometry.patch && label == geometry.patch->parent) {
          const auto inpl = face_inplane_axes(axis);
          const auto o = mesh.element_origin(e);
          const double tol = 1e-9;
          const bool inside =
              o[inpl[0]] >= geometry.patch->lo[0] - tol &&
              o[inpl[0]] + h[inpl[0]] <= geometry.patch->hi[0] + tol &&
              o[inpl[1]] >= geometry.patch->lo[1] - tol &&
              o[inpl[1]] + h[inpl[1]] <= geometry.patch->hi[1] + tol;
          if (inside) label = geometry.patch->name;
        }
        mesh.boundary[label].push_back(std::move(f));
      }
  }
  if (geometry.patch && mesh.boundary.find(geometry.patch->name) == mesh.boundary.end())
    throw ConfigError("patch '" + geometry.patch->name + "' captured no boundary facets");
  return mesh;
}

namespace {

// Candidate element intervals along one axis, lowest first so that shared-face
// queries resolve to the lowest element id.
std::vector<int> axis_candidates(const std::vector<double>& edges, double x, double snap) {
  const int n = static_cast<int>(edges.size()) - 1;
  int k = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin()) - 1;
  k = std::clamp(k, 0, n - 1);
  std::vector<int> out;
  if (k > 0 && x - edges[k] <= snap) out.push_back(k - 1);
  out.push_back(k);
  if (k + 1 < n && edges[k + 1] - x <= snap) out.push_back(k + 1);
  return out;
}

}  // namespace

PointLocation locate_point(const Mesh& mesh, const std::array<double, 3>& x) {
  const auto bb = mesh.geometry.bounds();
  const double span = *std::max_element(bb.begin(), bb.end());
  const double d = mesh.geometry.distance_outside(x);
  if (d > 1e-9 * span) {
    std::ostringstream os;
    os << "point (" << x[0] << ", " << x[1];
    if (mesh.dim == 3) os << ", " << x[2];
    os << ") lies outside the domain (distance " << d << " m)";
    throw ConfigError(os.str());
  }
  const double snap = 1e-12 * std::max(1.0, span);
  std::array<std::vector<int>, 3> cand;
  for (int a = 0; a < mesh.dim; ++a) cand[a] = axis_candidates(mesh.axis_edges[a], x[a], snap);
  if (mesh.dim == 2) cand[2] = {0};

  // element_cells is sorted in (z,y,x) lexicographic order by construction
  auto cell_less = [](const std::array<int, 3>& a, const std::array<int, 3>& b) {
    return std::tie(a[2], a[1], a[0]) < std::tie(b[2], b[1], b[0]);
  };
  auto find_element = [&](const std::array<int, 3>& cell) -> int {
    auto it = std::lower_bound(mesh.element_cells.begin(), mesh.element_cells.end(), cell,
                               cell_less);
    if (it != mesh.element_cells.end() && *it == cell)
      return static_cast<int>(it - mesh.element_cells.begin());
    return -1;
  };
  int best = -1;
  std::array<int, 3> best_cell{0, 0, 0};
  for (int kz : cand[2])
    for (int ky : cand[1])
      for (int kx : cand[0]) {
        const int e = find_element({kx, ky, kz});
        if (e >= 0 && (best < 0 || e < best)) {
          best = e;
          best_cell = {kx, ky, kz};
        }
      }
  if (best < 0) {
    std::ostringstream os;
    os << "point lies in a removed region of the domain (distance "
       << mesh.geometry.distance_outside(x) << " m)";
    throw ConfigError(os.str());
  }
  PointLocation loc;
  loc.element = best;
  for (int a = 0; a < mesh.dim; ++a) {
    const double x0 = mesh.axis_edges[a][best_cell[a]];
    const double x1 = mesh.axis_edges[a][best_cell[a] + 1];
    loc.xi[a] = std::clamp(2.0 * (x[a] - x0) / (x1 - x0) - 1.0, -1.0, 1.0);
  }
  return loc;
}

Interpolant interpolation_at(const Mesh& mesh, const std::array<double, 3>& x) {
  const auto loc = locate_point(mesh, x);
  const auto& rule = gll_rule(mesh.order);
  const int o1 = mesh.order + 1;
  std::array<Eigen::VectorXd, 3> l;
  for (int a = 0; a < mesh.dim; ++a) l[a] = lagrange_values(rule.nodes, loc.xi[a]);

  Interpolant out;
  const int npe = mesh.nodes_per_element();
  out.nodes.resize(npe);
  out.weights.resize(npe);
  for (int k = 0; k < npe; ++k) {
    const int a = k % o1;
    const int b = (k / o1) % o1;
    const int c = k / (o1 * o1);
    out.nodes[k] = mesh.elements(loc.element, k);
    out.weights(k) = l[0](a) * l[1](b) * (mesh.dim == 3 ? l[2](c) : 1.0);
  }
  return out;
}

std::array<double, 3> local_to_physical(const Mesh& mesh, int element,
                                        const std::array<double, 3>& xi) {
  const auto o = mesh.element_origin(element);
  const auto h = mesh.element_size(element);
  std::array<double, 3> x{0, 0, 0};
  for (int a = 0; a < mesh.dim; ++a) x[a] = o[a] + (xi[a] + 1.0) * 0.5 * h[a];
  return x;
}

// ---------------------------------------------------------------------------
// Binary IO
// ---------------------------------------------------------------------------

namespace {

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("unexpected end of mesh file");
  return v;
}

}  // namespace

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os.write("ARMESH1", 7);
  write_pod<std::uint8_t>(os, 1);  // little-endian tag
  write_pod<std::int32_t>(os, mesh.order);
  write_pod<std::int32_t>(os, mesh.dim);
  write_pod<std::int64_t>(os, mesh.num_nodes());
  write_pod<std::int64_t>(os, mesh.num_elements());
  write_pod<std::int32_t>(os, mesh.nodes_per_element());
  for (long i = 0; i < mesh.num_nodes(); ++i)
    for (int a = 0; a < mesh.dim; ++a) write_pod<double>(os, mesh.nodes(i, a));
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int k = 0; k < mesh.nodes_per_element(); ++k)
      write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(mesh.elements(e, k)));

  nlohmann::json j;
  j["f_u"] = mesh.f_u;
  j["ppw"] = mesh.ppw;
  j["geometry"]["shape"] = room_shape_name(mesh.geometry.shape);
  j["geometry"]["dims"] = mesh.geometry.dims;
  if (mesh.geometry.patch) {
    j["geometry"]["patch"] = {{"parent", mesh.geometry.patch->parent},
                              {"name", mesh.geometry.patch->name},
                              {"lo", mesh.geometry.patch->lo},
                              {"hi", mesh.geometry.patch->hi}};
  }
  for (int a = 0; a < mesh.dim; ++a) j["axis_edges"].push_back(mesh.axis_edges[a]);
  for (const auto& c : mesh.element_cells) j["element_cells"].push_back(c);
  for (const auto& [label, facets] : mesh.boundary) {
    auto& arr = j["labels"][label];
    for (const auto& f : facets) arr.push_back({f.element, f.axis, f.side});
  }
  const std::string dump = j.dump();
  write_pod<std::int64_t>(os, static_cast<std::int64_t>(dump.size()));
  os.write(dump.data(), static_cast<std::streamsize>(dump.size()));
  if (!os) throw ConfigError("failed writing mesh to '" + path + "'");
}

Mesh load_mesh(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open mesh file '" + path + "'");
  char magic[7];
  is.read(magic, 7);
  if (!is || std::memcmp(magic, "ARMESH1", 7) != 0)
    throw ConfigError("'" + path + "' is not an ARMESH1 file");
  if (read_pod<std::uint8_t>(is) != 1)
    throw ConfigError("mesh file has unsupported endianness");

  Mesh mesh;
  mesh.order = read_pod<std::int32_t>(is);
  mesh.dim = read_pod<std::int32_t>(is);
  const long N = read_pod<std::int64_t>(is);
  const long E = read_pod<std::int64_t>(is);
  const int npe = read_pod<std::int32_t>(is);
  mesh.nodes.resize(N, mesh.dim);
  for (long i = 0; i < N; ++i)
    for (int a = 0; a < mesh.dim; ++a) mesh.nodes(i, a) = read_pod<double>(is);
  mesh.elements.resize(E, npe);
  for (long e = 0; e < E; ++e)
    for (int k = 0; k < npe; ++k)
      mesh.elements(e, k) = static_cast<int>(read_pod<std::uint32_t>(is));

  const auto json_len = read_pod<std::int64_t>(is);
  std::string dump(static_cast<size_t>(json_len), '\0');
  is.read(dump.data(), json_len);
  if (!is) throw ConfigError("unexpected end of mesh file");
  nlohmann::json j = nlohmann::json::parse(dump);

  mesh.f_u = j.at("f_u").get<double>();
  mesh.ppw = j.at("ppw").get<double>();
  mesh.geometry.shape = room_shape_from_name(j.at("geometry").at("shape").get<std::string>());
  mesh.geometry.dims = j.at("geometry").at("dims").get<std::vector<double>>();
  if (j.at("geometry").contains("patch")) {
    SurfacePatch p;
    const auto& jp = j.at("geometry").at("patch");
    p.parent = jp.at("parent").get<std::string>();
    p.name = jp.at("name").get<std::string>();
    p.lo = jp.at("lo").get<std::array<double, 2>>();
    p.hi = jp.at("hi").get<std::array<double, 2>>();
    mesh.geometry.patch = p;
  }
  for (int a = 0; a < mesh.dim; ++a)
    mesh.axis_edges[a] = j.at("axis_edges").at(a).get<std::vector<double>>();
  for (const auto& c : j.at("element_cells"))
    mesh.element_cells.push_back(c.get<std::array<int, 3>>());

  // Rebuild facet nodes and quadrature from (element, axis, side).
  const auto& rule = gll_rule(mesh.order);
  const auto& w = rule.weights;
  const int o1 = mesh.order + 1;
  for (const auto& [label, arr] : j.at("labels").items()) {
    for (const auto& jf : arr) {
      BoundaryFacet f;
      f.element = jf.at(0).get<int>();
      f.axis = jf.at(1).get<int>();
      f.side = jf.at(2).get<int>();
      const auto h = mesh.element_size(f.element);
      std::array<int, 3> local{0, 0, 0};
      local[f.axis] = f.side ? mesh.order : 0;
      if (mesh.dim == 2) {
        const int t = 1 - f.axis;
        f.nodes.resize(o1);
        f.weights.resize(o1);
        for (int i = 0; i < o1; ++i) {
          local[t] = i;
          f.nodes[i] = mesh.elements(f.element, local[0] + o1 * local[1]);
          f.weights(i) = w(i) * 0.5 * h[t];
        }
      } else {
        const auto inpl = face_inplane_axes(f.axis);
        f.nodes.resize(o1 * o1);
        f.weights.resize(o1 * o1);
        int k = 0;
        for (int jj = 0; jj < o1; ++jj)
          for (int i = 0; i < o1; ++i, ++k) {
            local[inpl[0]] = i;
            local[inpl[1]] = jj;
            f.nodes[k] = mesh.elements(f.element, local[0] + o1 * (local[1] + o1 * local[2]));
            f.weights(k) = w(i) * w(jj) * 0.25 * h[inpl[0]] * h[inpl[1]];
          }
      }
      f.measure = f.weights.sum();
      mesh.boundary[label].push_back(std::move(f));
    }
  }
  return mesh;
}

}  // namespace roomrom
