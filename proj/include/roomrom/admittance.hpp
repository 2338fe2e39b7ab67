// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "roomrom/materials.hpp"

namespace roomrom {

// Real-coefficient rational admittance in partial-fraction form:
//   Y(s) = y_inf + sum_j A_j/(s - l_j)
//        + sum_l [ (B_l + iC_l)/(s - (a_l + i b_l)) + (B_l - iC_l)/(s - (a_l - i b_l)) ].
// All poles lie strictly in the left half-plane.
struct RationalAdmittance {
  struct RealPole {
    double pole = 0.0;
    double residue = 0.0;
  };
  struct ComplexPair {
    double alpha = 0.0;  // Re(pole) < 0
    double beta = 0.0;   // Im(pole) > 0
    double B = 0.0;      // Re(residue)
    double C = 0.0;      // Im(residue)
  };

  double y_inf = 0.0;
  std::vector<RealPole> real_poles;
  std::vector<ComplexPair> complex_pairs;

  int pole_count() const {
    return static_cast<int>(real_poles.size() + 2 * complex_pairs.size());
  }
  std::vector<std::complex<double>> poles() const;
  // Throws NumericalError when s is within 1e-12 of a pole.
  std::complex<double> evaluate(std::complex<double> s) const;

  nlohmann::json to_json() const;
  static RationalAdmittance from_json(const nlohmann::json& j);
};

// Admittance of a boundary surface: a constant (frequency-independent
// material, Y = 1/Z_s) or a fitted rational model.
struct SurfaceAdmittance {
  std::variant<double, RationalAdmittance> model;

  std::complex<double> evaluate(std::complex<double> s) const;
  std::vector<std::complex<double>> poles() const;
  bool is_constant() const { return std::holds_alternative<double>(model); }

  static SurfaceAdmittance constant(double y) { return {y}; }
  static SurfaceAdmittance rational(RationalAdmittance m) { return {std::move(m)}; }
};

using AdmittanceMap = std::map<std::string, SurfaceAdmittance>;

struct VectorFitOptions {
  int max_iterations = 20;
  double tolerance = 1e-3;  // max_i |Y_fit - Y_i| / max_i |Y_i|
};

struct VectorFitResult {
  RationalAdmittance model;
  double achieved_error = 0.0;
  int iterations = 0;
};

// Gustavsen-Semlyen pole relocation fit of admittance samples. Unstable
// poles are reflected into the left half-plane. Throws NumericalError
// (reporting the achieved error and pole set) when the tolerance is not
// reached within the iteration cap.
VectorFitResult vector_fit(const std::vector<std::complex<double>>& s_samples,
                           const std::vector<std::complex<double>>& y_samples, int n_poles,
                           const VectorFitOptions& options = {});

struct MaterialFit {
  SurfaceAdmittance admittance;
  int n_poles = 0;          // 0 for constant models
  double fit_error = 0.0;   // 0 for constant models
  double band_lo = 0.0;
  double band_hi = 0.0;
};

// Fit band: n_samples log-spaced frequencies on [f_lo, f_u]. Porous
// materials are fitted starting at n_poles, escalating by 2 up to
// max_poles when the fit tolerance cannot be met; frequency-independent
// materials bypass fitting.
MaterialFit fit_material_admittance(const MaterialSpec& spec, double f_u, double f_lo = 20.0,
                                    int n_poles = 6, int n_samples = 200, int max_poles = 16);

}  // namespace roomrom
