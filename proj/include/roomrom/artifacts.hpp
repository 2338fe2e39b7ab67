// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace roomrom {

std::string sha256_hex(const std::string& data);
// Hash of a canonical (sorted-key, compact) JSON dump.
std::string config_hash(const nlohmann::json& config);

// Binary array format "ARBIN1": magic, endianness tag, dtype (f64/c128),
// rank, int64 shape, column-major payload.
void save_array(const std::filesystem::path& path, const Eigen::MatrixXd& m);
void save_array(const std::filesystem::path& path, const Eigen::MatrixXcd& m);
Eigen::MatrixXd load_array_real(const std::filesystem::path& path);
Eigen::MatrixXcd load_array_complex(const std::filesystem::path& path);

// Content-addressed directory tree: root/<kind>/<hash-prefix>/.
// An artifact is complete once its manifest.json exists; the manifest holds
// only deterministic provenance. Timings and timestamps go to the
// timing.json sidecar, which is excluded from reproducibility comparisons.
class ArtifactStore {
 public:
  explicit ArtifactStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path dir_for(const std::string& kind, const nlohmann::json& config) const;
  bool exists(const std::string& kind, const nlohmann::json& config) const;
  // Creates the directory (without manifest); call finalize() when done.
  std::filesystem::path prepare(const std::string& kind, const nlohmann::json& config) const;
  void finalize(const std::string& kind, const nlohmann::json& config) const;
  void write_timing(const std::filesystem::path& dir, const nlohmann::json& timing) const;

 private:
  std::filesystem::path root_;
};

}  // namespace roomrom
