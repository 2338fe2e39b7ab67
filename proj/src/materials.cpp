// SPDX-License-Identifier: Apache-2.0
#include "roomrom/materials.hpp"

#include <cmath>
#include <sstream>

#include "roomrom/errors.hpp"

namespace roomrom {

void MaterialSpec::validate() const {
  if (kind == Kind::FrequencyIndependent) {
    if (!(z_s > 0.0)) throw ConfigError("frequency-independent material needs z_s > 0");
  } else {
    if (!(sigma_mat > 0.0)) throw ConfigError("porous material needs sigma_mat > 0");
    if (!(d_mat > 0.0)) throw ConfigError("porous material needs d_mat > 0");
    if (!(d0 >= 0.0)) throw ConfigError("porous material needs d0 >= 0");
  }
}

std::string MaterialSpec::key() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::FrequencyIndependent) {
    os << "Z:" << z_s;
  } else {
    os << "P:" << sigma_mat << ":" << d_mat << ":" << d0;
  }
  return os.str();
}

MaterialSpec MaterialSpec::impedance(double z_s) {
  MaterialSpec m;
  m.kind = Kind::FrequencyIndependent;
  m.z_s = z_s;
  m.validate();
  return m;
}

MaterialSpec MaterialSpec::porous(double sigma_mat, double d_mat, double d0) {
  MaterialSpec m;
  m.kind = Kind::PorousLayered;
  m.sigma_mat = sigma_mat;
  m.d_mat = d_mat;
  m.d0 = d0;
  m.validate();
  return m;
}

bool operator==(const MaterialSpec& a, const MaterialSpec& b) { return a.key() == b.key(); }

PorousProperties miki_properties(double f, double sigma_mat) {
  if (!(f > 0.0)) throw ConfigError("miki_properties needs f > 0");
  if (!(sigma_mat > 0.0)) throw ConfigError("miki_properties needs sigma_mat > 0");
  const double x = 1e3 * f / sigma_mat;
  const double pz = std::pow(x, -0.632);
  const double pk = std::pow(x, -0.618);
  const double omega = 2.0 * M_PI * f;
  PorousProperties p;
  p.Z_c = kAirImpedance * std::complex<double>(1.0 + 5.50 * pz, -8.43 * pz);
  p.k = (omega / kSoundSpeed) * std::complex<double>(1.0 + 7.81 * pk, -11.41 * pk);
  return p;
}

namespace {

// Guard against evaluating tan/cot at a pole (real resonance of a lossless
// air cavity); callers should perturb the frequency sample.
void check_tan_pole(std::complex<double> arg, const char* what) {
  if (std::abs(std::cos(arg)) < 1e-9) {
    std::ostringstream os;
    os << what << " evaluated within 1e-9 of a tan pole; perturb the frequency sample";
    throw NumericalError(os.str());
  }
}

void check_cot_pole(std::complex<double> arg, const char* what) {
  if (std::abs(std::sin(arg)) < 1e-9) {
    std::ostringstream os;
    os << what << " evaluated within 1e-9 of a cot pole; perturb the frequency sample";
    throw NumericalError(os.str());
  }
}

}  // namespace

std::complex<double> surface_impedance_tmm(const MaterialSpec& spec, double f) {
  if (!(f > 0.0)) throw ConfigError("surface_impedance_tmm needs f > 0");
  if (spec.kind == MaterialSpec::Kind::FrequencyIndependent)
    return {spec.z_s, 0.0};

  const auto [Z_c, k] = miki_properties(f, spec.sigma_mat);
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> kd = k * spec.d_mat;
  if (spec.d0 <= 0.0) {
    // rigid-backed layer: Z_s = -i Z_c cot(k d)
    check_cot_pole(kd, "porous layer");
    return -i * Z_c / std::tan(kd);
  }
  const double k0d0 = (2.0 * M_PI * f / kSoundSpeed) * spec.d0;
  check_cot_pole(std::complex<double>(k0d0, 0.0), "air cavity");
  const std::complex<double> Z_b = -i * kAirImpedance / std::tan(k0d0);
  check_tan_pole(kd, "porous layer");
  const std::complex<double> t = std::tan(kd);
  return Z_c * (Z_b + i * Z_c * t) / (Z_c + i * Z_b * t);
}

double absorption_coefficient(const MaterialSpec& spec, double f) {
  const std::complex<double> Z_s = surface_impedance_tmm(spec, f);
  const double r = std::abs((Z_s - kAirImpedance) / (Z_s + kAirImpedance));
  return 1.0 - r * r;
}

}  // namespace roomrom
