// SPDX-License-Identifier: Apache-2.0
#include "roomrom/rom.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "roomrom/errors.hpp"

namespace roomrom {

SnapshotSet collect_snapshots(const std::vector<const LaplaceSolutionSet*>& runs) {
  if (runs.empty()) throw ConfigError("collect_snapshots needs at least one run");
  const int N = runs[0]->N;
  const int N_s = runs[0]->N_s;
  for (const auto* run : runs) {
    if (run->N != N || run->N_s != N_s)
      throw ConfigError("snapshot runs must share one mesh and plan");
    if (run->fields.rows() != N)
      throw ConfigError("snapshot runs must carry solution fields");
  }
  SnapshotSet out;
  out.columns.resize(N, 2L * N_s * runs.size());
  out.provenance.reserve(out.columns.cols());
  long col = 0;
  for (size_t r = 0; r < runs.size(); ++r)
    for (int j = 0; j < N_s; ++j) {
      out.columns.col(col) = runs[r]->fields.col(j).real();
      out.provenance.push_back({static_cast<int>(r), j, 'r'});
      out.columns.col(col + 1) = runs[r]->fields.col(j).imag();
      out.provenance.push_back({static_cast<int>(r), j, 'i'});
      col += 2;
    }
  for (long c = 0; c < out.columns.cols(); ++c)
    if (out.columns.col(c).norm() == 0.0 && out.provenance[c].part == 'r') {
      std::ostringstream os;
      os << "snapshot column " << c << " (run " << out.provenance[c].run << ", frequency "
         << out.provenance[c].frequency << ") is all-zero; the run likely failed";
      throw ConfigError(os.str());
    }
  return out;
}

Eigen::VectorXd PodBasis::energy_fractions() const {
  const double total = sigma.sum();
  return total > 0.0 ? Eigen::VectorXd(sigma / total) : sigma;
}

namespace {

// Deterministic sign convention: the entry of largest magnitude is positive.
void fix_signs(Eigen::MatrixXd& U) {
  for (long c = 0; c < U.cols(); ++c) {
    long idx = 0;
    U.col(c).cwiseAbs().maxCoeff(&idx);
    if (U(idx, c) < 0.0) U.col(c) = -U.col(c);
  }
}

}  // namespace

PodBasis pod_basis(const SnapshotSet& snapshots) {
  const Eigen::MatrixXd& A = snapshots.columns;
  if (A.size() == 0) throw ConfigError("pod_basis needs a nonempty snapshot set");
  const long N = A.rows(), m = A.cols();
  const long k = std::min(N, m);
  PodBasis out;

  // Direct SVD resolves the small-singular-value tail to machine precision;
  // beyond the flop budget, a method-of-snapshots eigendecomposition of the
  // smaller Gram matrix is used (its sigma^2 energies are exact, the tail
  // below ~sqrt(eps)*sigma_1 is noise-floored, which the truncation rule
  // never reaches).
  const double direct_flops = static_cast<double>(k) * k * std::max(N, m);
  if (direct_flops <= 2.5e9) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
    out.sigma = svd.singularValues();
    const double floor = out.sigma(0) * 1e-13;
    long rank = 0;
    while (rank < k && out.sigma(rank) > floor) ++rank;
    out.U = svd.matrixU().leftCols(rank);
  } else if (N <= m) {
    // state-space Gram: C = A A^T, eigenvectors are the left singular vectors
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
    C.selfadjointView<Eigen::Lower>().rankUpdate(A);
    C = C.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) throw NumericalError("POD eigendecomposition failed");
    out.sigma.resize(N);
    for (long i = 0; i < N; ++i)
      out.sigma(i) = std::sqrt(std::max(0.0, es.eigenvalues()(N - 1 - i)));
    const double floor = out.sigma(0) * 1e-7;  // Gram noise floor ~ sqrt(eps)
    long rank = 0;
    while (rank < N && out.sigma(rank) > floor) ++rank;
    out.U.resize(N, rank);
    for (long i = 0; i < rank; ++i) out.U.col(i) = es.eigenvectors().col(N - 1 - i);
  } else {
    // snapshot-space Gram: C = A^T A; lift V -> U = A V / sigma, then
    // re-orthonormalize (the lift degrades towards the noise floor)
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
    C.selfadjointView<Eigen::Lower>().rankUpdate(A.transpose());
    C = C.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) throw NumericalError("POD eigendecomposition failed");
    out.sigma.resize(m);
    for (long i = 0; i < m; ++i)
      out.sigma(i) = std::sqrt(std::max(0.0, es.eigenvalues()(m - 1 - i)));
    const double floor = out.sigma(0) * 1e-7;
    long rank = 0;
    while (rank < m && out.sigma(rank) > floor) ++rank;
    Eigen::MatrixXd U(N, rank);
    for (long i = 0; i < rank; ++i)
      U.col(i) = A * es.eigenvectors().col(m - 1 - i) / out.sigma(i);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(U);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, rank);
    // keep the lifted orientation (R diagonal positive)
    const Eigen::MatrixXd R = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    for (long i = 0; i < rank; ++i)
      if (R(i, i) < 0.0) Q.col(i) = -Q.col(i);
    out.U = std::move(Q);
  }
  fix_signs(out.U);
  return out;
}

int n_rb_for_tolerance(const Eigen::VectorXd& sigma, double eps_pod) {
  const double total = sigma.squaredNorm();
  if (total == 0.0) throw NumericalError("singular-value spectrum is identically zero");
  double acc = 0.0;
  for (long i = 0; i < sigma.size(); ++i) {
    acc += sigma(i) * sigma(i);
    if (acc / total >= 1.0 - eps_pod) return static_cast<int>(i + 1);
  }
  return static_cast<int>(sigma.size());
}

ReducedBasis truncate_basis(const PodBasis& basis, double eps_pod) {
  if (eps_pod < 0.0 || eps_pod >= 1.0)
    throw ConfigError("eps_pod must lie in [0, 1)");
  ReducedBasis out;
  out.sigma = basis.sigma;
  out.eps_pod = eps_pod;
  const int rank = static_cast<int>(basis.U.cols());
  out.N_rb = eps_pod == 0.0 ? rank
                            : std::min(rank, n_rb_for_tolerance(basis.sigma, eps_pod));
  out.Phi = basis.U.leftCols(out.N_rb);
  return out;
}

ReducedModel project_operators(const Eigen::Ref<const Eigen::MatrixXd>& Phi,
                               const FomOperators& ops,
                               const std::vector<Interpolant>& receivers) {
  if (Phi.rows() != ops.M.rows())
    throw ConfigError("basis and operators have incompatible dimensions");
  ReducedModel model;
  model.N_rb = static_cast<int>(Phi.cols());
  model.c = ops.c;
  model.rho = ops.rho;
  const auto project = [&](const SparseMat& op) {
    Eigen::MatrixXd r = Phi.transpose() * (op * Phi);
    return Eigen::MatrixXd(0.5 * (r + r.transpose()));  // congruence, symmetrized
  };
  model.M_r = project(ops.M);
  model.S_r = project(ops.S);
  for (const auto& [label, g] : ops.boundary_mass) model.boundary[label] = project(g);
  model.g = Phi.transpose() * (ops.M * ops.p0);
  model.receivers.resize(model.N_rb, receivers.size());
  for (size_t r = 0; r < receivers.size(); ++r) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(Phi.rows());
    for (size_t k = 0; k < receivers[r].nodes.size(); ++k)
      e(receivers[r].nodes[k]) += receivers[r].weights(k);
    model.receivers.col(r) = Phi.transpose() * e;
  }
  return model;
}

RomSolution solve_rom(const ReducedModel& model, const AdmittanceMap& admittances,
                      const WeeksPlan& plan, const RomSolveOptions& options) {
  for (const auto& [label, B] : model.boundary)
    if (admittances.find(label) == admittances.end())
      throw ConfigError("no admittance provided for surface '" + label + "'");
  check_plan_against_poles(plan, admittances);

  const int n = model.N_rb;
  RomSolution sol;
  sol.receiver_values.resize(model.receivers.cols(), plan.N_s);
  sol.solve_seconds = Eigen::VectorXd::Zero(plan.N_s);
  if (options.keep_coefficients) sol.coefficients.resize(n, plan.N_s);

  Eigen::MatrixXcd K(n, n);
  Eigen::VectorXcd rhs(n), a(n);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(n);  // reused workspace
  const Eigen::MatrixXcd recv = model.receivers.cast<std::complex<double>>();
  for (int j : plan.lower_half_indices()) {
    const std::complex<double> s = plan.frequencies[j];
    const auto t0 = std::chrono::steady_clock::now();

    K.noalias() = (s * s) * model.M_r + (model.c * model.c) * model.S_r;
    for (const auto& [label, B] : model.boundary) {
      const std::complex<double> y = admittances.at(label).evaluate(s);
      K.noalias() += (s * model.c * model.c * model.rho * y) * B;
    }
    rhs.noalias() = s * model.g;
    lu.compute(K);
    const auto& diag = lu.matrixLU().diagonal();
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (int i = 0; i < n; ++i) {
      dmin = std::min(dmin, std::abs(diag(i)));
      dmax = std::max(dmax, std::abs(diag(i)));
    }
    if (!(dmin > dmax * 1e-14)) {
      std::ostringstream os;
      os << "reduced system singular at frequency index " << j << " (s = " << s.real() << " + "
         << s.imag() << "i)";
      throw NumericalError(os.str());
    }
    a = lu.solve(rhs);

    sol.solve_seconds(j) =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int jc = plan.N_s - 1 - j;
    sol.receiver_values.col(j) = recv.transpose() * a;
    sol.receiver_values.col(jc) = sol.receiver_values.col(j).conjugate();
    if (options.keep_coefficients) {
      sol.coefficients.col(j) = a;
      sol.coefficients.col(jc) = a.conjugate();
    }
  }
  return sol;
}

Eigen::VectorXcd reconstruct_field(const Eigen::Ref<const Eigen::MatrixXd>& Phi,
                                   const Eigen::Ref<const Eigen::VectorXcd>& a) {
  if (Phi.cols() != a.size()) throw ConfigError("basis and coefficients are incompatible");
  return Phi.cast<std::complex<double>>() * a;
}

}  // namespace roomrom
