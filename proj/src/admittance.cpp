// SPDX-License-Identifier: Apache-2.0
#include "roomrom/admittance.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "roomrom/errors.hpp"

namespace roomrom {

std::vector<std::complex<double>> RationalAdmittance::poles() const {
  std::vector<std::complex<double>> out;
  for (const auto& p : real_poles) out.emplace_back(p.pole, 0.0);
  for (const auto& p : complex_pairs) {
    out.emplace_back(p.alpha, p.beta);
    out.emplace_back(p.alpha, -p.beta);
  }
  return out;
}

std::complex<double> RationalAdmittance::evaluate(std::complex<double> s) const {
  for (const auto& p : poles())
    if (std::abs(s - p) < 1e-12)
      throw NumericalError("admittance evaluated within 1e-12 of a pole");
  std::complex<double> y(y_inf, 0.0);
  for (const auto& p : real_poles) y += p.residue / (s - p.pole);
  for (const auto& p : complex_pairs) {
    const std::complex<double> q(p.alpha, p.beta);
    const std::complex<double> r(p.B, p.C);
    y += r / (s - q) + std::conj(r) / (s - std::conj(q));
  }
  return y;
}

nlohmann::json RationalAdmittance::to_json() const {
  nlohmann::json j;
  j["y_inf"] = y_inf;
  j["real_poles"] = nlohmann::json::array();
  for (const auto& p : real_poles)
    j["real_poles"].push_back({{"pole", p.pole}, {"residue", p.residue}});
  j["complex_pairs"] = nlohmann::json::array();
  for (const auto& p : complex_pairs)
    j["complex_pairs"].push_back({{"alpha", p.alpha}, {"beta", p.beta}, {"B", p.B}, {"C", p.C}});
  return j;
}

RationalAdmittance RationalAdmittance::from_json(const nlohmann::json& j) {
  RationalAdmittance m;
  m.y_inf = j.at("y_inf").get<double>();
  for (const auto& p : j.at("real_poles"))
    m.real_poles.push_back({p.at("pole").get<double>(), p.at("residue").get<double>()});
  for (const auto& p : j.at("complex_pairs"))
    m.complex_pairs.push_back({p.at("alpha").get<double>(), p.at("beta").get<double>(),
                               p.at("B").get<double>(), p.at("C").get<double>()});
  return m;
}

std::complex<double> SurfaceAdmittance::evaluate(std::complex<double> s) const {
  if (const double* y = std::get_if<double>(&model)) return {*y, 0.0};
  return std::get<RationalAdmittance>(model).evaluate(s);
}

std::vector<std::complex<double>> SurfaceAdmittance::poles() const {
  if (std::holds_alternative<double>(model)) return {};
  return std::get<RationalAdmittance>(model).poles();
}

// ---------------------------------------------------------------------------
// Vector fitting
// ---------------------------------------------------------------------------

namespace {

struct PoleSet {
  std::vector<double> real;                         // real poles
  std::vector<std::complex<double>> pairs;          // one member per pair, Im > 0
  int count() const { return static_cast<int>(real.size() + 2 * pairs.size()); }
  int basis_size() const { return static_cast<int>(real.size() + 2 * pairs.size()); }
};

// Partial-fraction basis evaluated at the samples; real poles contribute one
// column, complex pairs contribute the two real-coefficient combinations.
Eigen::MatrixXcd basis_matrix(const std::vector<std::complex<double>>& s, const PoleSet& poles) {
  const int m = static_cast<int>(s.size());
  Eigen::MatrixXcd P(m, poles.basis_size());
  int col = 0;
  const std::complex<double> i(0.0, 1.0);
  for (double q : poles.real) {
    for (int r = 0; r < m; ++r) P(r, col) = 1.0 / (s[r] - q);
    ++col;
  }
  for (const auto& q : poles.pairs) {
    const auto qc = std::conj(q);
    for (int r = 0; r < m; ++r) {
      P(r, col) = 1.0 / (s[r] - q) + 1.0 / (s[r] - qc);
      P(r, col + 1) = i / (s[r] - q) - i / (s[r] - qc);
    }
    col += 2;
  }
  return P;
}

PoleSet regroup_poles(const Eigen::VectorXcd& ev) {
  // flip unstable poles, then pair conjugates
  std::vector<std::complex<double>> flipped(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    std::complex<double> p = ev(i);
    if (p.real() > 0.0) p = std::complex<double>(-p.real(), p.imag());
    flipped[i] = p;
  }
  PoleSet out;
  std::vector<bool> used(flipped.size(), false);
  for (size_t i = 0; i < flipped.size(); ++i) {
    if (used[i]) continue;
    const auto p = flipped[i];
    if (std::abs(p.imag()) < 1e-9 * (1.0 + std::abs(p.real()))) {
      out.real.push_back(p.real());
      used[i] = true;
      continue;
    }
    // find the closest conjugate partner
    size_t best = i;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t j = i + 1; j < flipped.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(flipped[j] - std::conj(p));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best != i) used[best] = true;
    used[i] = true;
    out.pairs.emplace_back(p.real(), std::abs(p.imag()));
  }
  std::sort(out.real.begin(), out.real.end());
  std::sort(out.pairs.begin(), out.pairs.end(), [](const auto& a, const auto& b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  return out;
}

struct ResidueFit {
  RationalAdmittance model;
  double error = 0.0;
};

ResidueFit fit_residues(const std::vector<std::complex<double>>& s,
                        const std::vector<std::complex<double>>& y, const PoleSet& poles,
                        double y_scale) {
  const int m = static_cast<int>(s.size());
  const int nb = poles.basis_size();
  const Eigen::MatrixXcd P = basis_matrix(s, poles);
  Eigen::MatrixXd A(2 * m, nb + 1);
  Eigen::VectorXd rhs(2 * m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < nb; ++c) {
      A(r, c) = P(r, c).real();
      A(m + r, c) = P(r, c).imag();
    }
    A(r, nb) = 1.0;
    A(m + r, nb) = 0.0;
    rhs(r) = y[r].real();
    rhs(m + r) = y[r].imag();
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);

  ResidueFit out;
  int col = 0;
  for (double q : poles.real) out.model.real_poles.push_back({q, x(col++)});
  for (const auto& q : poles.pairs) {
    out.model.complex_pairs.push_back({q.real(), q.imag(), x(col), x(col + 1)});
    col += 2;
  }
  out.model.y_inf = x(nb);

  double max_err = 0.0;
  for (int r = 0; r < m; ++r) {
    std::complex<double> fit(x(nb), 0.0);
    for (int c = 0; c < nb; ++c) fit += P(r, c) * x(c);
    max_err = std::max(max_err, std::abs(fit - y[r]));
  }
  out.error = max_err / y_scale;
  return out;
}

}  // namespace

VectorFitResult vector_fit(const std::vector<std::complex<double>>& s_samples,
                           const std::vector<std::complex<double>>& y_samples, int n_poles,
                           const VectorFitOptions& options) {
  if (n_poles < 1) throw ConfigError("vector_fit needs n_poles >= 1");
  const int m = static_cast<int>(s_samples.size());
  if (m < 4 * n_poles)
    throw ConfigError("vector_fit needs at least 4*n_poles samples");
  if (y_samples.size() != s_samples.size())
    throw ConfigError("vector_fit sample arrays must have equal length");

  double y_scale = 0.0, w_lo = std::numeric_limits<double>::infinity(), w_hi = 0.0;
  for (int i = 0; i < m; ++i) {
    y_scale = std::max(y_scale, std::abs(y_samples[i]));
    const double w = std::abs(s_samples[i].imag());
    if (w > 0.0) {
      w_lo = std::min(w_lo, w);
      w_hi = std::max(w_hi, w);
    }
  }
  if (y_scale == 0.0) y_scale = 1.0;

  // initial poles: complex-conjugate pairs log-spaced over the band,
  // lightly damped; an odd count adds one real pole at the geometric mean
  PoleSet poles;
  const int npair = n_poles / 2;
  for (int k = 0; k < npair; ++k) {
    const double beta =
        npair == 1 ? std::sqrt(w_lo * w_hi)
                   : w_lo * std::pow(w_hi / w_lo, static_cast<double>(k) / (npair - 1));
    poles.pairs.emplace_back(-beta / 100.0, beta);
  }
  if (n_poles % 2) poles.real.push_back(-std::sqrt(w_lo * w_hi));

  ResidueFit best = fit_residues(s_samples, y_samples, poles, y_scale);
  PoleSet best_poles = poles;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    // sigma-relocation least squares: unknowns [c, d, c_tilde]
    const int nb = poles.basis_size();
    const Eigen::MatrixXcd P = basis_matrix(s_samples, poles);
    Eigen::MatrixXd A(2 * m, 2 * nb + 1);
    Eigen::VectorXd rhs(2 * m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < nb; ++c) {
        A(r, c) = P(r, c).real();
        A(m + r, c) = P(r, c).imag();
        const std::complex<double> pc = P(r, c) * y_samples[r];
        A(r, nb + 1 + c) = -pc.real();
        A(m + r, nb + 1 + c) = -pc.imag();
      }
      A(r, nb) = 1.0;
      A(m + r, nb) = 0.0;
      rhs(r) = y_samples[r].real();
      rhs(m + r) = y_samples[r].imag();
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);

    // new poles = eigenvalues of (pole block matrix - b * c_tilde^T)
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd bv = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXd cv = Eigen::VectorXd::Zero(nb);
    int idx = 0;
    for (double q : poles.real) {
      H(idx, idx) = q;
      bv(idx) = 1.0;
      cv(idx) = x(nb + 1 + idx);
      ++idx;
    }
    for (const auto& q : poles.pairs) {
      H(idx, idx) = q.real();
      H(idx, idx + 1) = q.imag();
      H(idx + 1, idx) = -q.imag();
      H(idx + 1, idx + 1) = q.real();
      bv(idx) = 2.0;
      cv(idx) = x(nb + 1 + idx);
      cv(idx + 1) = x(nb + 1 + idx + 1);
      idx += 2;
    }
    H -= bv * cv.transpose();
    Eigen::EigenSolver<Eigen::MatrixXd> es(H);
    poles = regroup_poles(es.eigenvalues());

    const ResidueFit fit = fit_residues(s_samples, y_samples, poles, y_scale);
    if (fit.error < best.error) {
      best = fit;
      best_poles = poles;
    }
    if (best.error <= options.tolerance * 0.01) break;  // early exit, well converged
  }

  // Band passivity: nudge y_inf up when the fit dips slightly negative where
  // the data's conductance is ~0; keeps Re(Y) >= 0 at the samples.
  double min_re = 0.0;
  for (int i = 0; i < m; ++i) {
    std::complex<double> v = best.model.evaluate(s_samples[i]);
    min_re = std::min(min_re, v.real());
  }
  if (min_re < 0.0) {
    best.model.y_inf += -min_re * 1.05;
    double max_err = 0.0;
    for (int i = 0; i < m; ++i)
      max_err = std::max(max_err, std::abs(best.model.evaluate(s_samples[i]) - y_samples[i]));
    best.error = max_err / y_scale;
  }

  if (best.error > options.tolerance) {
    std::ostringstream os;
    os.precision(3);
    os << "vector_fit did not reach tolerance " << options.tolerance << " after "
       << options.max_iterations << " iterations (achieved " << best.error << "); poles:";
    for (const auto& p : best.model.poles()) os << " (" << p.real() << "," << p.imag() << ")";
    throw NumericalError(os.str());
  }
  return {best.model, best.error, it + 1};
}

MaterialFit fit_material_admittance(const MaterialSpec& spec, double f_u, double f_lo,
                                    int n_poles, int n_samples, int max_poles) {
  spec.validate();
  MaterialFit out;
  out.band_lo = f_lo;
  out.band_hi = f_u;
  if (spec.kind == MaterialSpec::Kind::FrequencyIndependent) {
    out.admittance = SurfaceAdmittance::constant(1.0 / spec.z_s);
    return out;
  }
  std::vector<std::complex<double>> s(n_samples), y(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double f = f_lo * std::pow(f_u / f_lo, static_cast<double>(i) / (n_samples - 1));
    s[i] = std::complex<double>(0.0, 2.0 * M_PI * f);
    y[i] = 1.0 / surface_impedance_tmm(spec, f);
  }
  std::string last_error;
  for (int np = n_poles; np <= max_poles; np += 2) {
    try {
      const VectorFitResult fit = vector_fit(s, y, np);
      out.admittance = SurfaceAdmittance::rational(fit.model);
      out.n_poles = np;
      out.fit_error = fit.achieved_error;
      return out;
    } catch (const NumericalError& e) {
      last_error = e.what();
    }
  }
  throw NumericalError("admittance fit failed for material " + spec.key() + " up to " +
                       std::to_string(max_poles) + " poles: " + last_error);
}

}  // namespace roomrom
