// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "roomrom/errors.hpp"
#include "roomrom/pipeline.hpp"

using namespace roomrom;
namespace fs = std::filesystem;

namespace {

// A deliberately tiny scenario so the whole chain runs in seconds.
Scenario tiny_scenario() {
  Scenario s;
  s.name = "tiny";
  s.geometry = RoomGeometry::rectangle(2.0, 1.5);
  s.source = {1.4, 0.8, 0.0};
  s.receivers = {{0.5, 0.6, 0.0}};
  s.f_u = 150.0;
  s.order = 4;
  s.ppw = 4.0;
  s.weeks.N_s = 32;
  s.weeks.T = 1.0;
  s.weeks.auto_tune = false;  // defaults suffice, keeps the test fast
  s.surface_order = {"CE", "FL", "WL", "WR"};

  SurfaceConfig ce;
  MaterialOption porous;
  porous.kind = MaterialSpec::Kind::PorousLayered;
  porous.sigma_mat = {{8e3, 12e3, 16e3}, ""};
  porous.d_mat = {{0.03}, ""};
  porous.d0 = {{0.0}, ""};
  ce.options.push_back(porous);
  s.surfaces.emplace("CE", ce);

  SurfaceConfig fl;
  MaterialOption imp;
  imp.kind = MaterialSpec::Kind::FrequencyIndependent;
  imp.z_s = {{10e3, 50e3, 90e3}, ""};
  fl.options.push_back(imp);
  s.surfaces.emplace("FL", fl);

  SurfaceConfig wall;
  MaterialOption fixed;
  fixed.kind = MaterialSpec::Kind::FrequencyIndependent;
  fixed.z_s = {{50e3}, ""};
  wall.options.push_back(fixed);
  s.surfaces.emplace("WL", wall);
  s.surfaces.emplace("WR", wall);

  // online at the exact all-middle training assignment
  s.online_cases["case1"] = {{"CE", MaterialSpec::porous(12e3, 0.03, 0.0)},
                             {"FL", MaterialSpec::impedance(50e3)},
                             {"WL", MaterialSpec::impedance(50e3)},
                             {"WR", MaterialSpec::impedance(50e3)}};
  s.eps_pod_ladder = {1e-2, 1e-4, 0.0};
  s.validate();
  return s;
}

std::map<std::string, std::string> store_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "timing.json") continue;  // measurement sidecar
    std::ifstream is(entry.path(), std::ios::binary);
    out[fs::relative(entry.path(), root).string()] = {std::istreambuf_iterator<char>(is),
                                                      std::istreambuf_iterator<char>()};
  }
  return out;
}

}  // namespace

TEST_CASE("offline pipeline") {
  const fs::path root = "/tmp/roomrom_pipe_offline";
  fs::remove_all(root);
  ArtifactStore store(root);
  const Scenario s = tiny_scenario();

  const OfflineResult first = run_offline(s, store);
  CHECK(first.rows.size() == 6);  // two parameterized quantities
  CHECK(first.n_rb.size() == 3);
  CHECK(first.n_rb[0] <= first.n_rb[1]);
  CHECK(first.n_rb[2] == first.modes.cols());  // eps 0 keeps the rank
  CHECK(first.sigma.size() > 0);

  SUBCASE("rerun reuses artifacts bitwise") {
    const auto before = store_bytes(root);
    const OfflineResult second = run_offline(s, store);
    CHECK(second.n_rb == first.n_rb);
    CHECK((second.modes - first.modes).cwiseAbs().maxCoeff() == 0.0);
    CHECK(store_bytes(root) == before);
  }
  SUBCASE("deleting a downstream artifact regenerates only it") {
    const auto before = store_bytes(root);
    // wipe every reduced model, keep runs and basis
    fs::remove_all(root / "rom");
    run_offline(s, store);
    CHECK(store_bytes(root) == before);
  }
}

TEST_CASE("online stage at a training assignment is Galerkin-exact") {
  const fs::path root = "/tmp/roomrom_pipe_online";
  fs::remove_all(root);
  ArtifactStore store(root);
  const Scenario s = tiny_scenario();

  OnlineOptions opts;
  opts.eps_pod = 0.0;  // untruncated
  opts.with_fom_verify = true;
  opts.timing_repeats = 1;
  const OnlineResult res = run_online(s, store, opts);

  CHECK(std::abs(res.report.eps_rel_percent) <= 1e-6);
  CHECK(res.report.n_rb > 0);
  CHECK(res.ir_fom.has_value());
  CHECK(res.report.speedup_factor > 0.0);
  CHECK(fs::exists(res.dir / "metrics.json"));
  CHECK(fs::exists(res.dir / "ir_rom.csv"));
  CHECK(fs::exists(res.dir / "ir_fom.csv"));

  SUBCASE("truncated models increase the error but stay small") {
    OnlineOptions loose;
    loose.eps_pod = 1e-2;
    loose.with_fom_verify = true;
    loose.timing_repeats = 1;
    const OnlineResult coarse = run_online(s, store, loose);
    CHECK(std::abs(coarse.report.eps_rel_percent) >= std::abs(res.report.eps_rel_percent));
  }
  SUBCASE("missing ladder entry is a config error") {
    OnlineOptions bad;
    bad.eps_pod = 3e-3;
    CHECK_THROWS_WITH_AS(run_online(s, store, bad), doctest::Contains("offline"),
                         ConfigError);
  }
}

TEST_CASE("pipeline is bitwise reproducible") {
  const Scenario s = tiny_scenario();
  const fs::path root_a = "/tmp/roomrom_pipe_repro_a";
  const fs::path root_b = "/tmp/roomrom_pipe_repro_b";
  fs::remove_all(root_a);
  fs::remove_all(root_b);

  OnlineOptions opts;
  opts.eps_pod = 1e-4;
  opts.with_fom_verify = true;
  opts.timing_repeats = 1;

  ArtifactStore store_a(root_a);
  run_online(s, store_a, opts);
  ArtifactStore store_b(root_b);
  run_online(s, store_b, opts);

  const auto a = store_bytes(root_a);
  const auto b = store_bytes(root_b);
  REQUIRE(a.size() == b.size());
  for (const auto& [rel, bytes] : a) {
    REQUIRE_MESSAGE(b.count(rel) == 1, rel);
    if (rel.find("metrics") != std::string::npos) continue;  // holds timing fields
    CHECK_MESSAGE(b.at(rel) == bytes, rel);
  }
  // metric JSON matches once timing fields are stripped
  for (const auto& [rel, bytes] : a) {
    if (rel.find("metrics.json") == std::string::npos) continue;
    auto ja = nlohmann::json::parse(bytes);
    auto jb = nlohmann::json::parse(b.at(rel));
    ja.erase("timing");
    jb.erase("timing");
    CHECK(ja == jb);
  }
}

TEST_CASE("workers do not change pipeline artifacts") {
  const Scenario s = tiny_scenario();
  const fs::path root_a = "/tmp/roomrom_pipe_workers_a";
  const fs::path root_b = "/tmp/roomrom_pipe_workers_b";
  fs::remove_all(root_a);
  fs::remove_all(root_b);
  ArtifactStore store_a(root_a);
  ArtifactStore store_b(root_b);
  PipelineOptions serial;
  serial.workers = 1;
  PipelineOptions parallel;
  parallel.workers = 4;
  run_offline(s, store_a, serial);
  run_offline(s, store_b, parallel);
  CHECK(store_bytes(root_a) == store_bytes(root_b));
}

TEST_CASE("report export") {
  const fs::path root = "/tmp/roomrom_pipe_report";
  fs::remove_all(root);
  ArtifactStore store(root);
  Scenario s = tiny_scenario();
  s.eps_pod_ladder = {1e-2, 1e-4};
  export_report(s, store, root / "report");

  for (const auto& name :
       {"singular_decay.csv", "singular_decay.svg", "nrb_vs_eps.csv", "nrb_vs_eps.svg",
        "speedup_vs_error.csv", "delta_l.csv", "delta_l.svg", "t20_jnd.csv"}) {
    CAPTURE(name);
    CHECK(fs::exists(root / "report" / name));
  }
  // decay table is monotone non-increasing
  std::ifstream is(root / "report" / "singular_decay.csv");
  std::string line;
  std::getline(is, line);
  double prev = 1e300;
  int rows = 0;
  while (std::getline(is, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const double sigma = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    CHECK(sigma <= prev * (1.0 + 1e-12));
    prev = sigma;
    ++rows;
  }
  CHECK(rows > 10);
}
