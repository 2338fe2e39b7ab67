// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "roomrom/errors.hpp"
#include "roomrom/operators.hpp"

using namespace roomrom;

namespace {

// Generalized eigenfrequencies of (S, M) in Hz; M is diagonal under GLL.
Eigen::VectorXd eigenfrequencies(const SparseMat& S, const SparseMat& M) {
  const long n = S.rows();
  Eigen::VectorXd dinv(n);
  for (long i = 0; i < n; ++i) dinv(i) = 1.0 / std::sqrt(M.coeff(i, i));
  Eigen::MatrixXd A = Eigen::MatrixXd(S);
  A = dinv.asDiagonal() * A * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  Eigen::VectorXd f(n);
  for (long i = 0; i < n; ++i)
    f(i) = kSoundSpeed * std::sqrt(std::max(0.0, es.eigenvalues()(i))) / (2.0 * M_PI);
  return f;
}

std::vector<double> analytic_rect_modes(double Lx, double Ly, double f_max) {
  std::vector<double> out;
  for (int nx = 0; nx < 200; ++nx)
    for (int ny = 0; ny < 200; ++ny) {
      const double f =
          0.5 * kSoundSpeed * std::hypot(nx / Lx, ny / Ly);
      if (f <= f_max) out.push_back(f);
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("mass matrix integrates the domain measure") {
  SUBCASE("rectangle") {
    const Mesh m = build_room_mesh(RoomGeometry::rectangle(4.0, 2.5), 4, 600.0, 4.0);
    const SparseMat M = assemble_mass(m);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    CHECK(ones.dot(M * ones) == doctest::Approx(10.0).epsilon(1e-8));
  }
  SUBCASE("unit cube") {
    const Mesh m = build_room_mesh(RoomGeometry::box(1.0, 1.0, 1.0), 4, 500.0, 4.0);
    const SparseMat M = assemble_mass(m);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    CHECK(ones.dot(M * ones) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("positive definite") {
    const Mesh m = build_room_mesh(RoomGeometry::rectangle(2.0, 1.0), 3, 400.0, 4.0);
    const SparseMat M = assemble_mass(m);
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXd x(m.num_nodes());
      for (long i = 0; i < x.size(); ++i) x(i) = g(rng);
      CHECK(x.dot(M * x) > 0.0);
    }
  }
  SUBCASE("single bilinear element under GLL quadrature") {
    // order 1 on [0,1]^2: two-point Lobatto weights give the lumped matrix
    // diag(1/4, 1/4, 1/4, 1/4)
    const Mesh m = build_room_mesh(RoomGeometry::rectangle(1.0, 1.0), 1, 10.0, 4.0);
    REQUIRE(m.num_nodes() == 4);
    const SparseMat M = assemble_mass(m);
    for (int i = 0; i < 4; ++i) {
      CHECK(M.coeff(i, i) == doctest::Approx(0.25).epsilon(1e-14));
      for (int j = 0; j < 4; ++j)
        if (i != j) CHECK(M.coeff(i, j) == 0.0);
    }
  }
}

TEST_CASE("stiffness matrix") {
  const Mesh m = build_room_mesh(RoomGeometry::rectangle(4.0, 2.5), 4, 500.0, 4.0);
  const SparseMat S = assemble_stiffness(m);

  SUBCASE("constant fields are in the null space") {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    CHECK((S * ones).cwiseAbs().maxCoeff() < 1e-10 * S.coeffs().cwiseAbs().maxCoeff());
  }
  SUBCASE("unit-gradient field has Dirichlet energy |Omega|") {
    Eigen::VectorXd u(m.num_nodes());
    for (long i = 0; i < m.num_nodes(); ++i) u(i) = m.nodes(i, 0);
    CHECK(u.dot(S * u) == doctest::Approx(10.0).epsilon(1e-10));
  }
  SUBCASE("positive semidefinite") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXd x(m.num_nodes());
      for (long i = 0; i < x.size(); ++i) x(i) = g(rng);
      CHECK(x.dot(S * x) >= -1e-10 * x.squaredNorm());
    }
  }
}

TEST_CASE("rigid-room eigenfrequencies match the analytic modes") {
  // with the collocated (diagonal) GLL mass, 4 ppw carries ~1% dispersion at
  // the very top of the band; 0.5% holds through 0.9 f_u
  const double f_u = 500.0;
  const Mesh m = build_room_mesh(RoomGeometry::square(4.0), 4, f_u, 4.0);
  const SparseMat M = assemble_mass(m);
  const SparseMat S = assemble_stiffness(m);
  const Eigen::VectorXd f_num = eigenfrequencies(S, M);
  const auto f_ref = analytic_rect_modes(4.0, 4.0, f_u);
  REQUIRE(f_ref.size() > 20);
  REQUIRE(static_cast<size_t>(f_num.size()) >= f_ref.size());
  for (size_t k = 1; k < f_ref.size(); ++k) {  // skip the zero mode
    const double err = std::abs(f_num(static_cast<long>(k)) - f_ref[k]) / f_ref[k];
    CHECK(err <= (f_ref[k] <= 0.9 * f_u ? 0.005 : 0.015));
  }
}

TEST_CASE("boundary mass") {
  SUBCASE("edge measures of the rectangle") {
    const Mesh m = build_room_mesh(RoomGeometry::rectangle(4.0, 2.5), 4, 500.0, 4.0);
    const SparseMat G = assemble_boundary_mass(m, "FL");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    CHECK(ones.dot(G * ones) == doctest::Approx(4.0).epsilon(1e-8));
    // support confined to FL nodes
    const auto fl = m.boundary_node_set("FL");
    for (int k = 0; k < G.outerSize(); ++k)
      for (SparseMat::InnerIterator it(G, k); it; ++it)
        if (it.value() != 0.0)
          CHECK(std::binary_search(fl.begin(), fl.end(), static_cast<int>(it.row())));
  }
  SUBCASE("cube panel and remainder") {
    RoomGeometry g = RoomGeometry::box(1.0, 1.0, 1.0);
    SurfacePatch p;
    p.parent = "WN";
    p.name = "WN_panel";
    p.lo = {0.25, 0.25};
    p.hi = {0.75, 0.75};
    g.patch = p;
    const Mesh m = build_room_mesh(g, 4, 500.0, 4.0);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    CHECK(ones.dot(assemble_boundary_mass(m, "WN_panel") * ones) ==
          doctest::Approx(0.25).epsilon(1e-8));
    CHECK(ones.dot(assemble_boundary_mass(m, "WN") * ones) ==
          doctest::Approx(0.75).epsilon(1e-8));
  }
  SUBCASE("label sum equals the L-shape perimeter") {
    const Mesh m = build_room_mesh(RoomGeometry::lshape(4.0, 2.0), 4, 500.0, 4.0);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
    double total = 0.0;
    for (const auto& label : m.labels())
      total += ones.dot(assemble_boundary_mass(m, label) * ones);
    CHECK(total == doctest::Approx(16.0).epsilon(1e-8));
  }
  SUBCASE("per-label matrices sum to the whole-boundary matrix") {
    const Mesh m = build_room_mesh(RoomGeometry::rectangle(2.0, 1.0), 3, 400.0, 4.0);
    SparseMat sum(m.num_nodes(), m.num_nodes());
    for (const auto& label : m.labels()) sum = sum + assemble_boundary_mass(m, label);
    Eigen::VectorXd whole = Eigen::VectorXd::Zero(m.num_nodes());
    for (const auto& label : m.labels())
      for (const auto& f : m.boundary_facets(label))
        for (size_t k = 0; k < f.nodes.size(); ++k) whole(f.nodes[k]) += f.weights(k);
    for (long i = 0; i < m.num_nodes(); ++i)
      CHECK(std::abs(sum.coeff(i, i) - whole(i)) <= 1e-12 * std::max(1.0, whole(i)));
  }
}

TEST_CASE("operator symmetry is exact") {
  const Mesh m = build_room_mesh(RoomGeometry::rectangle(2.0, 1.5), 4, 400.0, 4.0);
  const SparseMat M = assemble_mass(m);
  const SparseMat S = assemble_stiffness(m);
  CHECK(SparseMat(M - SparseMat(M.transpose())).coeffs().cwiseAbs().sum() == 0.0);
  CHECK(SparseMat(S - SparseMat(S.transpose())).coeffs().cwiseAbs().sum() == 0.0);
  for (const auto& label : m.labels()) {
    const SparseMat G = assemble_boundary_mass(m, label);
    CHECK(SparseMat(G - SparseMat(G.transpose())).coeffs().cwiseAbs().sum() == 0.0);
  }
}

TEST_CASE("gaussian initial state") {
  const Mesh m = build_room_mesh(RoomGeometry::box(1.0, 1.0, 1.0), 4, 500.0, 4.0);

  SUBCASE("nodal values follow the definition") {
    const std::array<double, 3> xs{0.7, 0.5, 0.5};
    const double sg = 0.1;
    const Eigen::VectorXd p0 = gaussian_initial_state(m, xs, sg);
    CHECK(p0.maxCoeff() <= 1.0);
    std::mt19937 rng(2);
    std::uniform_int_distribution<long> pick(0, m.num_nodes() - 1);
    for (int t = 0; t < 100; ++t) {
      const long i = pick(rng);
      double r2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double d = m.nodes(i, a) - xs[a];
        r2 += d * d;
      }
      CHECK(p0(i) == doctest::Approx(std::exp(-r2 / (sg * sg))).epsilon(1e-14));
    }
    // boundary values stay below exp(-9): the source sits 0.3 m off the walls
    for (const auto& label : m.labels())
      for (int id : m.boundary_node_set(label)) CHECK(p0(id) <= std::exp(-9.0) * (1 + 1e-12));
  }
  SUBCASE("peak value 1 occurs exactly on a source node") {
    const std::array<double, 3> on_node{m.nodes(100, 0), m.nodes(100, 1), m.nodes(100, 2)};
    const Eigen::VectorXd p0 = gaussian_initial_state(m, on_node, 0.1);
    CHECK(p0(100) == 1.0);
    CHECK(p0.maxCoeff() == 1.0);
  }
  SUBCASE("distance sigma_g gives exp(-1)") {
    const std::array<double, 3> xs{0.5, 0.5, 0.5};
    const Eigen::VectorXd p0 = gaussian_initial_state(m, xs, 0.25);
    // the node at (0.25, 0.5, 0.5) lies exactly sigma_g away
    for (long i = 0; i < m.num_nodes(); ++i)
      if (m.nodes(i, 0) == 0.25 && m.nodes(i, 1) == 0.5 && m.nodes(i, 2) == 0.5)
        CHECK(p0(i) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("sources outside are rejected") {
    CHECK_THROWS_AS(gaussian_initial_state(m, {1.5, 0.5, 0.5}, 0.1), ConfigError);
    CHECK_THROWS_AS(gaussian_initial_state(m, {1.0, 0.5, 0.5}, 0.1), ConfigError);
  }
}

TEST_CASE("sparse COO round trip") {
  const Mesh m = build_room_mesh(RoomGeometry::rectangle(2.0, 1.0), 3, 300.0, 4.0);
  const SparseMat S = assemble_stiffness(m);
  save_sparse(S, "/tmp/roomrom_S.coo");
  const SparseMat back = load_sparse("/tmp/roomrom_S.coo");
  REQUIRE(back.rows() == S.rows());
  CHECK(SparseMat(back - S).coeffs().cwiseAbs().sum() == 0.0);
}
