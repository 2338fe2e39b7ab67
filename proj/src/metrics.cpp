// SPDX-License-Identifier: Apache-2.0
#include "roomrom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>

#include "roomrom/errors.hpp"

namespace roomrom {

double rms_relative_error(const Eigen::VectorXd& p_fom, const Eigen::VectorXd& p_rom) {
  if (p_fom.size() != p_rom.size())
    throw ConfigError("rms_relative_error needs equally sampled signals");
  const double rms_fom = std::sqrt(p_fom.squaredNorm() / p_fom.size());
  const double rms_rom = std::sqrt(p_rom.squaredNorm() / p_rom.size());
  if (rms_fom == 0.0) throw NumericalError("reference signal has zero rms");
  return (rms_rom - rms_fom) / rms_fom * 100.0;
}

namespace {

// Single-sided DFT magnitudes (rectangular window, bins k/T).
Eigen::VectorXcd half_spectrum(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  const int half = n / 2 + 1;
  Eigen::VectorXcd out(half);
  for (int k = 0; k < half; ++k) {
    const std::complex<double> rot = std::polar(1.0, -2.0 * M_PI * k / n);
    std::complex<double> phase(1.0, 0.0), acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      acc += x(i) * phase;
      phase *= rot;
    }
    out(k) = acc;
  }
  return out;
}

}  // namespace

SpectrumError spectrum_error(const ImpulseResponse& fom, const ImpulseResponse& rom) {
  if (fom.samples.size() != rom.samples.size() || fom.f_s != rom.f_s)
    throw ConfigError("spectrum_error needs signals on a common grid");
  const Eigen::VectorXcd F = half_spectrum(fom.samples);
  const Eigen::VectorXcd R = half_spectrum(rom.samples);
  SpectrumError out;
  const int half = static_cast<int>(F.size());
  out.frequencies.resize(half);
  out.delta_db.resize(half);
  out.fom_db.resize(half);
  out.rom_db.resize(half);
  const double peak = F.cwiseAbs().maxCoeff();
  const double mask = peak * std::pow(10.0, -80.0 / 20.0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < half; ++k) {
    out.frequencies(k) = k * fom.f_s / static_cast<double>(fom.samples.size());
    out.fom_db(k) = 20.0 * std::log10(std::max(std::abs(F(k)), 1e-300));
    out.rom_db(k) = 20.0 * std::log10(std::max(std::abs(R(k)), 1e-300));
    if (std::abs(F(k)) < mask) {
      out.delta_db(k) = nan;  // masked at anti-resonances
    } else if (std::abs(R(k)) == 0.0) {
      throw NumericalError("spectrum_error: zero denominator at an unmasked bin");
    } else {
      out.delta_db(k) = 20.0 * std::log10(std::abs(F(k)) / std::abs(R(k)));
    }
  }
  return out;
}

ImpulseResponse octave_band_filter(const ImpulseResponse& ir, double f_center) {
  if (!(f_center > 0.0)) throw ConfigError("octave_band_filter needs f_center > 0");
  if (f_center * std::sqrt(2.0) > ir.f_s / 2.0)
    throw ConfigError("octave band reaches above Nyquist; increase f_s or drop the band");
  const int n = static_cast<int>(ir.samples.size());
  int padded = 1;
  while (padded < 2 * n) padded *= 2;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(padded);
  x.head(n) = ir.samples;

  // full DFT of the padded signal
  Eigen::VectorXcd X(padded);
  for (int k = 0; k < padded; ++k) {
    const std::complex<double> rot = std::polar(1.0, -2.0 * M_PI * k / padded);
    std::complex<double> phase(1.0, 0.0), acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {  // only the first n samples are nonzero
      acc += x(i) * phase;
      phase *= rot;
    }
    X(k) = acc;
  }
  // raised-cosine gain in log2 frequency, half-power at the band edges
  auto gain = [&](double f) {
    if (f <= 0.0) return 0.0;
    const double u = std::abs(std::log2(f / f_center));
    const double flat = 0.5 - 1.0 / 12.0;
    const double edge = 0.5 + 1.0 / 12.0;
    if (u <= flat) return 1.0;
    if (u >= edge) return 0.0;
    return std::cos(M_PI * (u - flat) / (2.0 * (edge - flat)));
  };
  for (int k = 0; k <= padded / 2; ++k) {
    const double f = k * ir.f_s / padded;
    const double g = gain(f);
    X(k) *= g;
    if (k > 0 && k < padded / 2) X(padded - k) *= g;  // conjugate bin
  }
  // inverse DFT (real part)
  ImpulseResponse out;
  out.f_s = ir.f_s;
  out.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::complex<double> rot = std::polar(1.0, 2.0 * M_PI * i / padded);
    std::complex<double> phase(1.0, 0.0), acc(0.0, 0.0);
    for (int k = 0; k < padded; ++k) {
      acc += X(k) * phase;
      phase *= rot;
    }
    out.samples(i) = acc.real() / padded;
  }
  return out;
}

DecayCurve schroeder_decay(const ImpulseResponse& ir) {
  const int n = static_cast<int>(ir.samples.size());
  if (n == 0) throw ConfigError("schroeder_decay needs a nonempty signal");
  Eigen::VectorXd energy(n);
  double acc = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    acc += ir.samples(i) * ir.samples(i) / ir.f_s;
    energy(i) = acc;
  }
  if (energy(0) == 0.0) throw NumericalError("schroeder_decay: zero-energy signal");
  DecayCurve out;
  out.t.resize(n);
  out.db.resize(n);
  for (int i = 0; i < n; ++i) {
    out.t(i) = i / ir.f_s;
    out.db(i) = 10.0 * std::log10(std::max(energy(i) / energy(0), 1e-300));
  }
  return out;
}

double t20(const DecayCurve& decay) {
  const int n = static_cast<int>(decay.db.size());
  std::vector<int> seg;
  bool reached = false;
  for (int i = 0; i < n; ++i) {
    if (decay.db(i) <= -25.0) {
      // the backward integral always plunges at the truncation tail; only a
      // crossing clear of the window end counts as real decay
      reached = decay.t(i) <= 0.9 * decay.t(n - 1);
      break;
    }
    if (decay.db(i) <= -5.0) seg.push_back(i);
  }
  if (!reached || seg.size() < 2)
    throw NumericalError("decay does not reach -25 dB within the window; increase T");
  // least-squares line on the [-5, -25] dB segment
  double st = 0, sd = 0, stt = 0, std_ = 0;
  for (int i : seg) {
    st += decay.t(i);
    sd += decay.db(i);
    stt += decay.t(i) * decay.t(i);
    std_ += decay.t(i) * decay.db(i);
  }
  const double m = static_cast<double>(seg.size());
  const double slope = (m * std_ - st * sd) / (m * stt - st * st);
  if (!(slope < 0.0)) throw NumericalError("non-decaying [-5,-25] dB segment");
  return -60.0 / slope;
}

double jnd_count(double t20_fom, double t20_rom) {
  if (!(t20_fom > 0.0)) throw ConfigError("jnd_count needs T20_fom > 0");
  return std::abs(t20_rom - t20_fom) / (0.05 * t20_fom);
}

double speedup(double cpu_fom_seconds, double cpu_rom_seconds) {
  if (!(cpu_fom_seconds > 0.0) || !(cpu_rom_seconds > 0.0))
    throw ConfigError("speedup needs positive timings");
  return cpu_fom_seconds / cpu_rom_seconds;
}

std::vector<BandReverberation> band_reverberation_comparison(const ImpulseResponse& fom,
                                                             const ImpulseResponse& rom) {
  std::vector<BandReverberation> out;
  for (double fc : {125.0, 250.0, 500.0, 1000.0, 2000.0}) {
    if (fc * std::sqrt(2.0) > fom.f_s / 2.0) continue;
    try {
      BandReverberation band;
      band.f_center = fc;
      band.t20_fom = t20(schroeder_decay(octave_band_filter(fom, fc)));
      band.t20_rom = t20(schroeder_decay(octave_band_filter(rom, fc)));
      band.jnd = jnd_count(band.t20_fom, band.t20_rom);
      out.push_back(band);
    } catch (const NumericalError&) {
      // band not evaluable (insufficient decay); skip
    }
  }
  return out;
}

nlohmann::json MetricReport::to_json() const {
  nlohmann::json j;
  j["eps_rel_percent"] = eps_rel_percent;
  j["eps_rel_abs_percent"] = eps_rel_abs_percent;
  j["n_rb"] = n_rb;
  j["eps_pod"] = eps_pod;
  j["online_parameters"] = online_parameters;
  if (speedup_factor > 0.0) {
    j["timing"]["speedup"] = speedup_factor;
    j["timing"]["cpu_fom_seconds"] = cpu_fom_seconds;
    j["timing"]["cpu_rom_seconds"] = cpu_rom_seconds;
  }
  if (delta_l) {
    auto& arr = j["delta_l"];
    for (int k = 0; k < delta_l->frequencies.size(); ++k) {
      if (std::isnan(delta_l->delta_db(k))) continue;
      arr.push_back({delta_l->frequencies(k), delta_l->delta_db(k)});
    }
  }
  for (const auto& b : bands)
    j["bands"].push_back({{"f_center", b.f_center},
                          {"t20_fom", b.t20_fom},
                          {"t20_rom", b.t20_rom},
                          {"jnd", b.jnd}});
  return j;
}

void MetricReport::save_json(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << to_json().dump(2) << '\n';
}

void MetricReport::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os.precision(17);
  os << "key,value\n";
  os << "eps_rel_percent," << eps_rel_percent << '\n';
  os << "eps_rel_abs_percent," << eps_rel_abs_percent << '\n';
  os << "n_rb," << n_rb << '\n';
  os << "eps_pod," << eps_pod << '\n';
  if (speedup_factor > 0.0) {
    os << "speedup," << speedup_factor << '\n';
    os << "cpu_fom_seconds," << cpu_fom_seconds << '\n';
    os << "cpu_rom_seconds," << cpu_rom_seconds << '\n';
  }
  for (const auto& b : bands) {
    os << "t20_fom_" << b.f_center << ',' << b.t20_fom << '\n';
    os << "t20_rom_" << b.f_center << ',' << b.t20_rom << '\n';
    os << "jnd_" << b.f_center << ',' << b.jnd << '\n';
  }
}

}  // namespace roomrom
