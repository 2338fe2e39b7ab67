// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "roomrom/admittance.hpp"

namespace roomrom {

// Inverse-Laplace synthesis plan: N_s complex frequencies on the image of
// the unit circle under s(z) = sigma_w + (b/2)(1+z)/(1-z), z_j = e^{i theta_j},
// theta_j = 2 pi (j + 1/2) / N_s. The grid is conjugate-closed and the image
// lies on the vertical line Re(s) = sigma_w.
struct WeeksPlan {
  int N_s = 512;
  double sigma_w = 0.0;  // Laplace shift, 1/s
  double b = 0.0;        // Laguerre time scale, 1/s
  double T = 1.0;        // time window, s
  double f_s = 0.0;      // output sample rate, Hz
  std::vector<std::complex<double>> frequencies;

  Eigen::VectorXd time_grid() const;  // T*f_s samples starting at t=0
  // Indices with Im(s) < 0 (one member of each conjugate pair).
  std::vector<int> lower_half_indices() const;
  int conjugate_index(int j) const { return N_s - 1 - j; }
};

// sigma_w <= 0 or b <= 0 fall back to the defaults sigma_w = 5/T,
// b = 2*pi*f_u/4.
WeeksPlan make_weeks_plan(double T, double f_u, int N_s = 512, double sigma_w = 0.0,
                          double b = 0.0, double f_s = 0.0);

// Tune (sigma_w, b) by a 16x16 log-grid search minimizing the worst
// reconstruction error over three analytic transform pairs
// (e^{-10t}, t, sin(2 pi 50 t) e^{-5t}).
WeeksPlan tune_weeks_plan(double T, double f_u, int N_s = 512, double f_s = 0.0);

// Throws NumericalError when any plan frequency is within 1e-9 of an
// admittance pole (advising a sigma_w perturbation).
void check_plan_against_poles(const WeeksPlan& plan, const AdmittanceMap& admittances);

struct WeeksSynthesis {
  Eigen::VectorXd samples;
  double coefficient_tail = 0.0;  // |a_{N-1}| / max|a_n|
  bool tail_warning = false;      // tail > 1e-4: increase N_s or retune
};

// Laguerre-expansion inverse transform of samples F(s_n) on the plan grid.
WeeksSynthesis weeks_inverse(const std::vector<std::complex<double>>& f_samples,
                             const WeeksPlan& plan, const Eigen::VectorXd& t_grid);

}  // namespace roomrom
