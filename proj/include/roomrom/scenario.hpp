// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roomrom/admittance.hpp"
#include "roomrom/geometry.hpp"
#include "roomrom/materials.hpp"
#include "roomrom/weeks.hpp"

namespace roomrom {

// One scalar material parameter: a fixed value or a 3-value training grid.
// Parameters sharing a non-empty group id sweep jointly.
struct ParamSpec {
  std::vector<double> values;  // size 1 (fixed) or 3 (training grid)
  std::string group;

  bool parameterized() const { return values.size() == 3; }
  double middle() const { return values[values.size() / 2]; }
};

// A material family a surface can assume (a porous build-up or a
// frequency-independent impedance), with its trainable parameters.
struct MaterialOption {
  MaterialSpec::Kind kind = MaterialSpec::Kind::FrequencyIndependent;
  ParamSpec z_s;        // FrequencyIndependent
  ParamSpec sigma_mat;  // PorousLayered
  ParamSpec d_mat;
  ParamSpec d0;

  MaterialSpec materialize(const std::map<std::string, double>& overrides = {}) const;
  // parameters in canonical sweep order with their specs
  std::vector<std::pair<std::string, const ParamSpec*>> params() const;
};

struct SurfaceConfig {
  std::vector<MaterialOption> options;  // sweep order = listed order
  int default_option = 0;               // option pinned in the middle assignment
};

struct WeeksSettings {
  int N_s = 512;
  double T = 1.0;
  double f_s = 0.0;      // 0: 4*f_u
  double sigma_w = 0.0;  // 0: tuned / default
  double b = 0.0;
  bool auto_tune = true;
};

struct Scenario {
  std::string name;
  RoomGeometry geometry;
  std::array<double, 3> source{0, 0, 0};
  std::vector<std::array<double, 3>> receivers;
  int order = 4;
  double f_u = 1000.0;
  double ppw = 4.0;
  double sigma_g = 0.1;
  WeeksSettings weeks;
  std::vector<std::string> surface_order;  // sweep order for the training plan
  std::map<std::string, SurfaceConfig> surfaces;
  std::map<std::string, std::map<std::string, MaterialSpec>> online_cases;
  std::string online_case = "case1";
  std::vector<double> eps_pod_ladder{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  // restrict parameter sweeps to these surfaces (empty = all)
  std::vector<std::string> parameter_filter;

  void validate() const;
  // Middle-of-range material for every surface (default option).
  std::map<std::string, MaterialSpec> middle_assignment() const;
  std::map<std::string, MaterialSpec> online_assignment() const;
  // Warnings for online values outside the trained ranges.
  std::vector<std::string> hull_warnings() const;
  WeeksPlan make_plan() const;

  nlohmann::json to_json() const;
  static Scenario from_json(const nlohmann::json& j);
};

Scenario load_scenario(const std::string& path);

// Built-in presets: SQ1, SQ2, RC1, RC2, LS1, CO1, RECT-2D, CB, GR.
std::vector<std::string> preset_names();
Scenario preset_scenario(const std::string& name);

// One full parameter assignment of the one-at-a-time training design.
struct TrainingRow {
  std::string label;  // e.g. "CE.sigma_mat[0]"
  std::map<std::string, MaterialSpec> materials;
  std::string dedup_key;
};

// Each parameterized quantity sweeps its 3 values while every other
// parameterized quantity is pinned at its middle value. Rows repeat the
// all-middle assignment (the solver deduplicates by dedup_key).
std::vector<TrainingRow> training_plan(const Scenario& scenario);

// Admittance models for a concrete assignment; fits are cached by material.
AdmittanceMap admittances_for(const std::map<std::string, MaterialSpec>& materials, double f_u,
                              std::map<std::string, MaterialFit>* fit_cache = nullptr);

}  // namespace roomrom
