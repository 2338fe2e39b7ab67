// SPDX-License-Identifier: Apache-2.0
#include "roomrom/operators.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "roomrom/errors.hpp"
#include "roomrom/gll.hpp"

namespace roomrom {

SparseMat assemble_mass(const Mesh& mesh) {
  const auto& rule = gll_rule(mesh.order);
  const auto& w = rule.weights;
  const int o1 = mesh.order + 1;
  const long N = mesh.num_nodes();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto h = mesh.element_size(e);
    double jac = 1.0;
    for (int a = 0; a < mesh.dim; ++a) jac *= 0.5 * h[a];
    for (int k = 0; k < mesh.nodes_per_element(); ++k) {
      const int a = k % o1, b = (k / o1) % o1, c = k / (o1 * o1);
      const double wk = w(a) * w(b) * (mesh.dim == 3 ? w(c) : 1.0);
      diag(mesh.elements(e, k)) += wk * jac;
    }
  }
  SparseMat M(N, N);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(N);
  for (long i = 0; i < N; ++i) trips.emplace_back(i, i, diag(i));
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

SparseMat assemble_stiffness(const Mesh& mesh) {
  const auto& rule = gll_rule(mesh.order);
  const auto& w = rule.weights;
  const Eigen::MatrixXd& K1 = rule.stiff1d;  // D^T diag(w) D on [-1,1]
  const int o1 = mesh.order + 1;
  const long N = mesh.num_nodes();

  std::vector<Eigen::Triplet<double>> trips;
  const long per_elem = mesh.dim == 2 ? 2L * o1 * o1 * o1 : 3L * o1 * o1 * o1 * o1;
  trips.reserve(per_elem * mesh.num_elements());

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto h = mesh.element_size(e);
    auto gid = [&](int a, int b, int c) {
      return mesh.elements(e, a + o1 * (b + (mesh.dim == 3 ? o1 * c : 0)));
    };
    if (mesh.dim == 2) {
      const double sx = (0.5 * h[1]) * (2.0 / h[0]);
      const double sy = (0.5 * h[0]) * (2.0 / h[1]);
      for (int b = 0; b < o1; ++b)
        for (int a = 0; a < o1; ++a)
          for (int a2 = 0; a2 < o1; ++a2)
            trips.emplace_back(gid(a, b, 0), gid(a2, b, 0), sx * w(b) * K1(a, a2));
      for (int a = 0; a < o1; ++a)
        for (int b = 0; b < o1; ++b)
          for (int b2 = 0; b2 < o1; ++b2)
            trips.emplace_back(gid(a, b, 0), gid(a, b2, 0), sy * w(a) * K1(b, b2));
    } else {
      const double sx = (0.25 * h[1] * h[2]) * (2.0 / h[0]);
      const double sy = (0.25 * h[0] * h[2]) * (2.0 / h[1]);
      const double sz = (0.25 * h[0] * h[1]) * (2.0 / h[2]);
      for (int c = 0; c < o1; ++c)
        for (int b = 0; b < o1; ++b)
          for (int a = 0; a < o1; ++a) {
            for (int a2 = 0; a2 < o1; ++a2)
              trips.emplace_back(gid(a, b, c), gid(a2, b, c), sx * w(b) * w(c) * K1(a, a2));
            for (int b2 = 0; b2 < o1; ++b2)
              trips.emplace_back(gid(a, b, c), gid(a, b2, c), sy * w(a) * w(c) * K1(b, b2));
            for (int c2 = 0; c2 < o1; ++c2)
              trips.emplace_back(gid(a, b, c), gid(a, b, c2), sz * w(a) * w(b) * K1(c, c2));
          }
    }
  }
  SparseMat S(N, N);
  S.setFromTriplets(trips.begin(), trips.end());
  S.prune(0.0, 0.0);
  return S;
}

SparseMat assemble_boundary_mass(const Mesh& mesh, const std::string& label) {
  const long N = mesh.num_nodes();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
  for (const auto& f : mesh.boundary_facets(label))
    for (size_t k = 0; k < f.nodes.size(); ++k) diag(f.nodes[k]) += f.weights(k);
  SparseMat G(N, N);
  std::vector<Eigen::Triplet<double>> trips;
  for (long i = 0; i < N; ++i)
    if (diag(i) != 0.0) trips.emplace_back(i, i, diag(i));
  G.setFromTriplets(trips.begin(), trips.end());
  return G;
}

Eigen::VectorXd gaussian_initial_state(const Mesh& mesh, const std::array<double, 3>& x_s,
                                       double sigma_g) {
  if (!(sigma_g > 0.0)) throw ConfigError("sigma_g must be positive");
  if (!mesh.geometry.contains(x_s, -1e-9))  // strictly inside
    throw ConfigError("source position must lie strictly inside the room");
  const long N = mesh.num_nodes();
  Eigen::VectorXd p0(N);
  for (long i = 0; i < N; ++i) {
    double r2 = 0.0;
    for (int a = 0; a < mesh.dim; ++a) {
      const double d = mesh.nodes(i, a) - x_s[a];
      r2 += d * d;
    }
    p0(i) = std::exp(-r2 / (sigma_g * sigma_g));
  }
  return p0;
}

FomOperators assemble_fom_operators(const Mesh& mesh, const std::array<double, 3>& x_s,
                                    double sigma_g) {
  FomOperators ops;
  ops.M = assemble_mass(mesh);
  ops.S = assemble_stiffness(mesh);
  for (const auto& label : mesh.labels())
    ops.boundary_mass[label] = assemble_boundary_mass(mesh, label);
  ops.p0 = gaussian_initial_state(mesh, x_s, sigma_g);
  ops.source = x_s;
  ops.sigma_g = sigma_g;
  return ops;
}

namespace {
template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("unexpected end of sparse matrix file");
  return v;
}
}  // namespace

void save_sparse(const SparseMat& m, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os.write("ARCOO1\n", 7);
  write_pod<std::uint8_t>(os, 1);
  write_pod<std::int64_t>(os, m.rows());
  write_pod<std::int64_t>(os, m.cols());
  write_pod<std::int64_t>(os, m.nonZeros());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      write_pod<std::int32_t>(os, static_cast<std::int32_t>(it.row()));
      write_pod<std::int32_t>(os, static_cast<std::int32_t>(it.col()));
      write_pod<double>(os, it.value());
    }
}

SparseMat load_sparse(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open sparse matrix file '" + path + "'");
  char magic[7];
  is.read(magic, 7);
  if (!is || std::memcmp(magic, "ARCOO1\n", 7) != 0)
    throw ConfigError("'" + path + "' is not an ARCOO1 file");
  if (read_pod<std::uint8_t>(is) != 1)
    throw ConfigError("sparse matrix file has unsupported endianness");
  const auto rows = read_pod<std::int64_t>(is);
  const auto cols = read_pod<std::int64_t>(is);
  const auto nnz = read_pod<std::int64_t>(is);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(nnz));
  for (std::int64_t k = 0; k < nnz; ++k) {
    const auto r = read_pod<std::int32_t>(is);
    const auto c = read_pod<std::int32_t>(is);
    const auto v = read_pod<double>(is);
    trips.emplace_back(r, c, v);
  }
  SparseMat m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace roomrom
