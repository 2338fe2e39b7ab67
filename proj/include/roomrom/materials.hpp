// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <string>

namespace roomrom {

inline constexpr double kSoundSpeed = 343.0;   // m/s
inline constexpr double kAirDensity = 1.2;     // kg/m^3
inline constexpr double kAirImpedance = kSoundSpeed * kAirDensity;  // rho*c

// Boundary material description. Either a frequency-independent surface
// impedance Z_s, or a porous layer (flow resistivity sigma_mat, thickness
// d_mat) over an air cavity of depth d0 against a rigid wall.
struct MaterialSpec {
  enum class Kind { FrequencyIndependent, PorousLayered };
  Kind kind = Kind::FrequencyIndependent;
  double z_s = 0.0;        // Ns/m^3 (FrequencyIndependent)
  double sigma_mat = 0.0;  // Ns/m^4 (PorousLayered)
  double d_mat = 0.0;      // m
  double d0 = 0.0;         // m

  void validate() const;
  // Stable identification string used for hashing/caching.
  std::string key() const;

  static MaterialSpec impedance(double z_s);
  static MaterialSpec porous(double sigma_mat, double d_mat, double d0);
};

bool operator==(const MaterialSpec& a, const MaterialSpec& b);

// Characteristic impedance and wavenumber of a porous medium (Miki's
// empirical power laws, e^{+i w t} convention, lossy: Im < 0).
struct PorousProperties {
  std::complex<double> Z_c;  // Ns/m^3
  std::complex<double> k;    // rad/m
};
PorousProperties miki_properties(double f, double sigma_mat);

// Surface impedance via the transfer-matrix chain
// rigid wall -> air cavity (d0) -> porous layer (d_mat).
// FrequencyIndependent specs return their constant z_s.
std::complex<double> surface_impedance_tmm(const MaterialSpec& spec, double f);

// Normal-incidence absorption coefficient in [0, 1].
double absorption_coefficient(const MaterialSpec& spec, double f);

}  // namespace roomrom
