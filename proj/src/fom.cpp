// SPDX-License-Identifier: Apache-2.0
#include "roomrom/fom.hpp"

#include <Eigen/SparseLU>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "roomrom/errors.hpp"

namespace roomrom {

namespace {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;

// All operators expanded onto one shared sparsity pattern so that K(s) is a
// value-array combination per frequency.
struct PatternedOperators {
  SparseC pattern;                         // structure carrier (values overwritten)
  Eigen::VectorXcd mass_values;            // aligned with pattern storage
  Eigen::VectorXcd stiffness_values;
  std::vector<std::string> labels;
  std::vector<Eigen::VectorXcd> boundary_values;

  static PatternedOperators build(const FomOperators& ops, const AdmittanceMap& admittances) {
    PatternedOperators out;
    SparseMat sum = ops.M + ops.S;
    for (const auto& [label, g] : ops.boundary_mass) sum += g;
    out.pattern = sum.cast<std::complex<double>>();
    out.pattern.makeCompressed();

    const auto fill = [&](const SparseMat& m) {
      Eigen::VectorXcd vals = Eigen::VectorXcd::Zero(out.pattern.nonZeros());
      for (int k = 0; k < out.pattern.outerSize(); ++k) {
        SparseC::InnerIterator pit(out.pattern, k);
        SparseMat::InnerIterator mit(m, k);
        for (Eigen::Index slot = out.pattern.outerIndexPtr()[k];
             pit && mit; ++pit, ++slot) {
          if (pit.row() == mit.row()) {
            vals(slot) = mit.value();
            ++mit;
          }
        }
      }
      return vals;
    };
    out.mass_values = fill(ops.M);
    out.stiffness_values = fill(ops.S);
    for (const auto& [label, g] : ops.boundary_mass) {
      if (admittances.find(label) == admittances.end())
        throw ConfigError("no admittance provided for surface '" + label + "'");
      out.labels.push_back(label);
      out.boundary_values.push_back(fill(g));
    }
    return out;
  }
};

}  // namespace

LaplaceSolutionSet solve_fom(const FomOperators& ops, const AdmittanceMap& admittances,
                             const WeeksPlan& plan, const std::vector<Interpolant>& receivers,
                             const FomSolveOptions& options) {
  check_plan_against_poles(plan, admittances);
  const long N = ops.M.rows();
  const int N_s = plan.N_s;
  const PatternedOperators pat = PatternedOperators::build(ops, admittances);

  LaplaceSolutionSet sol;
  sol.N = static_cast<int>(N);
  sol.N_s = N_s;
  sol.fields.resize(options.keep_fields ? N : 0, options.keep_fields ? N_s : 0);
  sol.receiver_values.resize(receivers.size(), N_s);
  sol.solve_seconds = Eigen::VectorXd::Zero(N_s);

  std::vector<int> order = options.solve_order ? *options.solve_order
                                               : plan.lower_half_indices();
  // storage for the lower-half fields even when fields are not kept
  Eigen::MatrixXcd half(N, order.size());

  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    SparseC K = pat.pattern;  // private copy, values rewritten per frequency
    Eigen::Map<Eigen::VectorXcd> kv(K.valuePtr(), K.nonZeros());
    while (!failed.load(std::memory_order_relaxed)) {
      const size_t slot = next.fetch_add(1);
      if (slot >= order.size()) break;
      const int j = order[slot];
      const std::complex<double> s = plan.frequencies[j];
      const auto t0 = std::chrono::steady_clock::now();

      kv = (s * s) * pat.mass_values + (ops.c * ops.c) * pat.stiffness_values;
      for (size_t k = 0; k < pat.labels.size(); ++k) {
        const std::complex<double> y = admittances.at(pat.labels[k]).evaluate(s);
        kv += (s * ops.c * ops.c * ops.rho * y) * pat.boundary_values[k];
      }

      const Eigen::VectorXcd rhs = s * (ops.M * ops.p0).cast<std::complex<double>>();
      Eigen::SparseLU<SparseC> lu;
      lu.analyzePattern(K);
      lu.factorize(K);
      if (lu.info() != Eigen::Success) {
        std::lock_guard<std::mutex> lock(error_mutex);
        std::ostringstream os;
        os << "singular operator at frequency index " << j << " (s = " << s.real() << " + "
           << s.imag() << "i)";
        error_message = os.str();
        failed.store(true);
        break;
      }
      Eigen::VectorXcd p = lu.solve(rhs);
      // iterative refinement keeps the residual at the contract level even
      // near lightly damped resonances
      const double rhs_norm = rhs.norm();
      double res = (K * p - rhs).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
      for (int r = 0; r < 3 && res > options.residual_tolerance * 0.1 && rhs_norm > 0.0; ++r) {
        p += lu.solve(rhs - K * p);
        res = (K * p - rhs).norm() / rhs_norm;
      }
      if (rhs_norm > 0.0 && res > options.residual_tolerance) {
        std::lock_guard<std::mutex> lock(error_mutex);
        std::ostringstream os;
        os << "residual " << res << " exceeds " << options.residual_tolerance
           << " at frequency index " << j;
        error_message = os.str();
        failed.store(true);
        break;
      }
      half.col(slot) = p;
      sol.solve_seconds(j) =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  const int n_workers = std::max(1, options.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw NumericalError(error_message);

  // mirror to the conjugate half (only slots not solved directly) and
  // extract receivers
  std::vector<bool> solved(N_s, false);
  for (int j : order) solved[j] = true;
  for (size_t slot = 0; slot < order.size(); ++slot) {
    const int j = order[slot];
    const int jc = plan.conjugate_index(j);
    const bool mirror = !solved[jc];
    for (size_t r = 0; r < receivers.size(); ++r) {
      std::complex<double> v(0.0, 0.0);
      for (size_t k = 0; k < receivers[r].nodes.size(); ++k)
        v += receivers[r].weights(k) * half(receivers[r].nodes[k], slot);
      sol.receiver_values(r, j) = v;
      if (mirror) sol.receiver_values(r, jc) = std::conj(v);
    }
    if (options.keep_fields) {
      sol.fields.col(j) = half.col(slot);
      if (mirror) sol.fields.col(jc) = half.col(slot).conjugate();
    }
  }
  return sol;
}

ImpulseResponse impulse_response(const Eigen::Ref<const Eigen::RowVectorXcd>& receiver_row,
                                 const WeeksPlan& plan) {
  std::vector<std::complex<double>> samples(plan.N_s);
  for (int j = 0; j < plan.N_s; ++j) samples[j] = receiver_row(j);
  const auto synth = weeks_inverse(samples, plan, plan.time_grid());
  ImpulseResponse ir;
  ir.samples = synth.samples;
  ir.f_s = plan.f_s;
  ir.coefficient_tail = synth.coefficient_tail;
  ir.tail_warning = synth.tail_warning;
  return ir;
}

ImpulseResponse impulse_response_at(const LaplaceSolutionSet& sol, const Mesh& mesh,
                                    const std::array<double, 3>& receiver,
                                    const WeeksPlan& plan) {
  if (sol.fields.size() == 0)
    throw ConfigError("impulse_response_at needs stored fields (keep_fields)");
  const Interpolant interp = interpolation_at(mesh, receiver);
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(sol.N_s);
  for (size_t k = 0; k < interp.nodes.size(); ++k)
    row += interp.weights(k) * sol.fields.row(interp.nodes[k]);
  return impulse_response(row, plan);
}

void save_impulse_response_csv(const ImpulseResponse& ir, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << "t,p\n";
  os.precision(17);
  for (int i = 0; i < ir.samples.size(); ++i)
    os << i / ir.f_s << ',' << ir.samples(i) << '\n';
}

ImpulseResponse load_impulse_response_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open impulse response file '" + path + "'");
  std::string line;
  std::getline(is, line);  // header
  std::vector<double> t, p;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("malformed IR CSV line: " + line);
    t.push_back(std::stod(line.substr(0, comma)));
    p.push_back(std::stod(line.substr(comma + 1)));
  }
  if (t.size() < 2) throw ConfigError("IR CSV has fewer than two samples");
  ImpulseResponse ir;
  ir.f_s = 1.0 / (t[1] - t[0]);
  ir.samples = Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<long>(p.size()));
  return ir;
}

}  // namespace roomrom
