// SPDX-License-Identifier: Apache-2.0
#include "roomrom/weeks.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "roomrom/errors.hpp"

namespace roomrom {

Eigen::VectorXd WeeksPlan::time_grid() const {
  const int n = static_cast<int>(std::llround(T * f_s));
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t(i) = i / f_s;
  return t;
}

std::vector<int> WeeksPlan::lower_half_indices() const {
  std::vector<int> out;
  for (int j = 0; j < N_s; ++j)
    if (frequencies[j].imag() < 0.0) out.push_back(j);
  return out;
}

WeeksPlan make_weeks_plan(double T, double f_u, int N_s, double sigma_w, double b, double f_s) {
  if (!(T > 0.0)) throw ConfigError("weeks plan needs T > 0");
  if (N_s < 2 || (N_s & (N_s - 1)) != 0)
    throw ConfigError("weeks plan needs N_s to be a power of two");
  WeeksPlan plan;
  plan.N_s = N_s;
  plan.T = T;
  plan.sigma_w = sigma_w > 0.0 ? sigma_w : 5.0 / T;
  plan.b = b > 0.0 ? b : 2.0 * M_PI * f_u / 4.0;
  plan.f_s = f_s > 0.0 ? f_s : 4.0 * f_u;
  plan.frequencies.resize(N_s);
  for (int j = 0; j < N_s; ++j) {
    const double theta = 2.0 * M_PI * (j + 0.5) / N_s;
    const std::complex<double> z = std::polar(1.0, theta);
    plan.frequencies[j] = plan.sigma_w + 0.5 * plan.b * (1.0 + z) / (1.0 - z);
  }
  return plan;
}

namespace {

// Scaled Laguerre functions l_n(x) = e^{-x/2} L_n(x) for one x, all n < N.
void laguerre_scaled(double x, int N, Eigen::VectorXd& out) {
  out.resize(N);
  const double e = std::exp(-0.5 * x);
  out(0) = e;
  if (N > 1) out(1) = (1.0 - x) * e;
  for (int n = 1; n + 1 < N; ++n)
    out(n + 1) = ((2.0 * n + 1.0 - x) * out(n) - n * out(n - 1)) / (n + 1.0);
}

Eigen::VectorXd weeks_coefficients(const std::vector<std::complex<double>>& f_samples,
                                   const WeeksPlan& plan) {
  const int N = plan.N_s;
  // G(z_j) = (b / (1 - z_j)) * F(s_j); a_n = (1/N) sum_j G_j e^{-i n theta_j}
  std::vector<std::complex<double>> G(N);
  for (int j = 0; j < N; ++j) {
    const double theta = 2.0 * M_PI * (j + 0.5) / N;
    const std::complex<double> z = std::polar(1.0, theta);
    G[j] = plan.b / (1.0 - z) * f_samples[j];
  }
  // direct transform, trig-free inner loop via incremental rotation
  Eigen::VectorXd a = Eigen::VectorXd::Zero(N);
  for (int j = 0; j < N; ++j) {
    const double theta = 2.0 * M_PI * (j + 0.5) / N;
    const std::complex<double> rot = std::polar(1.0, -theta);
    std::complex<double> phase(1.0, 0.0);
    for (int n = 0; n < N; ++n) {
      a(n) += (G[j] * phase).real();
      phase *= rot;
    }
  }
  a /= N;
  return a;
}

}  // namespace

WeeksSynthesis weeks_inverse(const std::vector<std::complex<double>>& f_samples,
                             const WeeksPlan& plan, const Eigen::VectorXd& t_grid) {
  if (static_cast<int>(f_samples.size()) != plan.N_s)
    throw ConfigError("weeks_inverse: sample count does not match the plan");
  for (int i = 0; i < t_grid.size(); ++i)
    if (t_grid(i) < 0.0 || t_grid(i) > plan.T + 1e-12)
      throw ConfigError("weeks_inverse: t_grid must lie within [0, T]");

  const Eigen::VectorXd a = weeks_coefficients(f_samples, plan);
  WeeksSynthesis out;
  out.coefficient_tail = std::abs(a(plan.N_s - 1)) / a.cwiseAbs().maxCoeff();
  out.tail_warning = out.coefficient_tail > 1e-4;

  out.samples.resize(t_grid.size());
  Eigen::VectorXd lag;
  for (int i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid(i);
    laguerre_scaled(plan.b * t, plan.N_s, lag);
    out.samples(i) = std::exp(plan.sigma_w * t) * a.dot(lag);
  }
  return out;
}

namespace {

double pair_error(const WeeksPlan& plan,
                  const std::function<std::complex<double>(std::complex<double>)>& F,
                  const std::function<double(double)>& f) {
  std::vector<std::complex<double>> samples(plan.N_s);
  for (int j = 0; j < plan.N_s; ++j) samples[j] = F(plan.frequencies[j]);
  Eigen::VectorXd t(257);
  for (int i = 0; i < 257; ++i) t(i) = plan.T * i / 256.0;
  const auto synth = weeks_inverse(samples, plan, t);
  double peak = 0.0, err = 0.0;
  for (int i = 0; i < t.size(); ++i) peak = std::max(peak, std::abs(f(t(i))));
  if (peak == 0.0) peak = 1.0;
  for (int i = 0; i < t.size(); ++i)
    err = std::max(err, std::abs(synth.samples(i) - f(t(i))));
  return err / peak;
}

}  // namespace

WeeksPlan tune_weeks_plan(double T, double f_u, int N_s, double f_s) {
  const double w0 = 2.0 * M_PI * 50.0;
  const std::array<std::pair<std::function<std::complex<double>(std::complex<double>)>,
                             std::function<double(double)>>,
                   3>
      pairs = {{
          {[](std::complex<double> s) { return 1.0 / (s + 10.0); },
           [](double t) { return std::exp(-10.0 * t); }},
          {[](std::complex<double> s) { return 1.0 / (s * s); }, [](double t) { return t; }},
          {[w0](std::complex<double> s) { return w0 / ((s + 5.0) * (s + 5.0) + w0 * w0); },
           [w0](double t) { return std::exp(-5.0 * t) * std::sin(w0 * t); }},
      }};

  double best_err = std::numeric_limits<double>::infinity();
  double best_sigma = 5.0 / T, best_b = 2.0 * M_PI * f_u / 4.0;
  for (int i = 0; i < 16; ++i) {
    const double sigma = (1.0 / T) * std::pow(50.0, i / 15.0);
    for (int j = 0; j < 16; ++j) {
      const double b = (2.0 * M_PI * f_u / 50.0) * std::pow(100.0, j / 15.0);
      const WeeksPlan plan = make_weeks_plan(T, f_u, N_s, sigma, b, f_s);
      double err = 0.0;
      for (const auto& [F, f] : pairs) err = std::max(err, pair_error(plan, F, f));
      if (err < best_err) {
        best_err = err;
        best_sigma = sigma;
        best_b = b;
      }
    }
  }
  return make_weeks_plan(T, f_u, N_s, best_sigma, best_b, f_s);
}

void check_plan_against_poles(const WeeksPlan& plan, const AdmittanceMap& admittances) {
  for (const auto& [label, adm] : admittances)
    for (const auto& p : adm.poles())
      for (const auto& s : plan.frequencies)
        if (std::abs(s - p) < 1e-9) {
          std::ostringstream os;
          os << "plan frequency (" << s.real() << "," << s.imag()
             << ") coincides with an admittance pole of surface '" << label
             << "'; perturb sigma_w";
          throw NumericalError(os.str());
        }
}

}  // namespace roomrom
