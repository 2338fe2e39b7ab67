// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "roomrom/artifacts.hpp"
#include "roomrom/metrics.hpp"
#include "roomrom/rom.hpp"
#include "roomrom/scenario.hpp"

namespace roomrom {

struct PipelineOptions {
  int workers = 1;
  std::vector<double> eps_ladder;  // overrides the scenario ladder when nonempty
  bool verbose = false;
};

// Offline stage: mesh, operators, training FOM runs (deduplicated by
// content hash), snapshots, POD basis, and one reduced model per eps_pod.
struct OfflineResult {
  Mesh mesh;
  FomOperators ops;
  WeeksPlan plan;
  std::vector<TrainingRow> rows;
  std::vector<std::string> run_hashes;           // per plan row
  std::vector<Eigen::MatrixXcd> run_receivers;   // per plan row (n_recv x N_s)
  std::vector<double> run_seconds;               // per plan row, per-frequency loop total
  Eigen::VectorXd sigma;                         // POD spectrum
  Eigen::MatrixXd modes;                         // orthonormal POD modes
  std::vector<double> eps_ladder;
  std::vector<int> n_rb;                         // per ladder entry
  std::vector<ReducedModel> models;              // per ladder entry
  std::map<std::string, MaterialFit> fit_cache;
};

OfflineResult run_offline(const Scenario& scenario, ArtifactStore& store,
                          const PipelineOptions& options = {});

struct OnlineOptions {
  double eps_pod = 1e-4;
  bool with_fom_verify = false;
  int timing_repeats = 3;
  int workers = 1;
  bool verbose = false;
};

struct OnlineResult {
  MetricReport report;
  ImpulseResponse ir_rom;
  std::optional<ImpulseResponse> ir_fom;
  std::filesystem::path dir;  // persisted online artifact
};

// Online stage for the scenario's selected online case. Requires the
// offline artifacts for the same scenario/eps to exist in the store.
OnlineResult run_online(const Scenario& scenario, ArtifactStore& store,
                        const OnlineOptions& options = {});

// Convenience: online against an in-memory offline result (no store reload).
OnlineResult run_online(const Scenario& scenario, ArtifactStore& store,
                        const OfflineResult& offline, const OnlineOptions& options);

// CSV tables + SVG plots: singular decay, N_rb vs eps_pod, and (when online
// metric artifacts exist) speedup vs error, Delta L, and band T20/JND.
void export_report(const Scenario& scenario, ArtifactStore& store,
                   const std::filesystem::path& out_dir);

// Config slices used for content addressing (exposed for tests).
nlohmann::json mesh_config(const Scenario& scenario);
nlohmann::json plan_config(const Scenario& scenario);
nlohmann::json run_config(const Scenario& scenario, const std::string& mesh_hash,
                          const std::map<std::string, MaterialSpec>& materials);

}  // namespace roomrom
