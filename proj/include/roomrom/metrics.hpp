// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roomrom/fom.hpp"

namespace roomrom {

// Signed rms relative error in percent: (rms_rom - rms_fom)/rms_fom * 100.
double rms_relative_error(const Eigen::VectorXd& p_fom, const Eigen::VectorXd& p_rom);

struct SpectrumError {
  Eigen::VectorXd frequencies;    // Hz
  Eigen::VectorXd delta_db;       // 20 log10 |P_fom / P_rom|, NaN where masked
  Eigen::VectorXd fom_db;         // 20 log10 |P_fom|
  Eigen::VectorXd rom_db;
};

// Single-sided spectra via plain DFT of the IRs (rectangular window); bins
// where |P_fom| falls 80 dB below its peak are masked (anti-resonance guard).
SpectrumError spectrum_error(const ImpulseResponse& fom, const ImpulseResponse& rom);

// Raised-cosine brick-wall band filter around f_center (half-power band
// edges at f_center / sqrt(2) and f_center * sqrt(2), 1/6-octave transition).
ImpulseResponse octave_band_filter(const ImpulseResponse& ir, double f_center);

struct DecayCurve {
  Eigen::VectorXd t;
  Eigen::VectorXd db;  // 10 log10(E(t)/E(0)), non-increasing
};

DecayCurve schroeder_decay(const ImpulseResponse& ir);

// Reverberation time from the [-5, -25] dB segment of the decay curve.
// Throws NumericalError ("increase T") when the curve does not reach -25 dB
// before 0.9 T (the backward integral always plunges at the truncation tail).
double t20(const DecayCurve& decay);

// |T20_rom - T20_fom| / (0.05 * T20_fom)
double jnd_count(double t20_fom, double t20_rom);

double speedup(double cpu_fom_seconds, double cpu_rom_seconds);

struct BandReverberation {
  double f_center = 0.0;
  double t20_fom = 0.0;
  double t20_rom = 0.0;
  double jnd = 0.0;
};

struct MetricReport {
  double eps_rel_percent = 0.0;        // signed
  double eps_rel_abs_percent = 0.0;
  std::optional<SpectrumError> delta_l;
  std::vector<BandReverberation> bands;
  double speedup_factor = 0.0;
  double cpu_fom_seconds = 0.0;
  double cpu_rom_seconds = 0.0;
  // provenance
  int n_rb = 0;
  double eps_pod = 0.0;
  std::map<std::string, std::string> online_parameters;

  nlohmann::json to_json() const;
  void save_json(const std::string& path) const;
  void save_csv(const std::string& path) const;  // flattened key,value rows
};

// Octave-band T20 comparison over the standard centers {125, 250, 500,
// 1000, 2000} Hz where the band fits below Nyquist and both decays reach
// -25 dB. Bands that fail the decay precondition are skipped.
std::vector<BandReverberation> band_reverberation_comparison(const ImpulseResponse& fom,
                                                             const ImpulseResponse& rom);

}  // namespace roomrom
