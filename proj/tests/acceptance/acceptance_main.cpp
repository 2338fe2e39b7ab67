// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, desk-scale resolutions.
// Exit code = number of failed criteria.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <vector>

#include "roomrom/errors.hpp"
#include "roomrom/pipeline.hpp"

using namespace roomrom;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kBase = "/tmp/roomrom_acceptance";

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %2d: %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double elapsed(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Scenario rect_desk() {
  Scenario s = preset_scenario("RECT-2D");
  s.f_u = 1000.0;
  s.eps_pod_ladder = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  return s;
}

Scenario cb_desk() {
  Scenario s = preset_scenario("CB");
  s.f_u = 700.0;
  s.eps_pod_ladder = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  return s;
}

std::string fmt(double v, const char* spec = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. FOM modal oracle
// ---------------------------------------------------------------------------
void criterion_1() {
  const auto t0 = Clock::now();
  const double f_u = 1000.0;
  const Mesh mesh = build_room_mesh(RoomGeometry::rectangle(4.0, 2.5), 4, f_u, 4.0);
  const SparseMat M = assemble_mass(mesh);
  const SparseMat S = assemble_stiffness(mesh);
  const long N = mesh.num_nodes();

  Eigen::VectorXd dinv(N);
  for (long i = 0; i < N; ++i) dinv(i) = 1.0 / std::sqrt(M.coeff(i, i));
  Eigen::MatrixXd A = dinv.asDiagonal() * Eigen::MatrixXd(S) * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));

  std::vector<double> ref;
  for (int nx = 0; nx < 80; ++nx)
    for (int ny = 0; ny < 80; ++ny) {
      const double f = 0.5 * kSoundSpeed * std::hypot(nx / 4.0, ny / 2.5);
      if (f <= f_u) ref.push_back(f);
    }
  std::sort(ref.begin(), ref.end());

  double max_err = 0.0;
  int within = 0;
  for (size_t k = 1; k < ref.size(); ++k) {
    const double f_num =
        kSoundSpeed * std::sqrt(std::max(0.0, es.eigenvalues()(static_cast<long>(k)))) /
        (2.0 * M_PI);
    const double err = std::abs(f_num - ref[k]) / ref[k];
    max_err = std::max(max_err, err);
    if (err <= 0.005) ++within;
  }
  const double secs = elapsed(t0);
  const bool pass = max_err <= 0.005 && secs < 60.0;
  report(1, "FOM modal oracle", pass,
         "N=" + std::to_string(N) + ", " + std::to_string(ref.size() - 1) +
             " modes <= f_u, max dev " + fmt(100.0 * max_err, "%.2f") + "% vs 0.5%, " +
             std::to_string(within) + " within",
         secs);
}

// ---------------------------------------------------------------------------
// 2. Inverse-Laplace oracle
// ---------------------------------------------------------------------------
void criterion_2() {
  const auto t0 = Clock::now();
  const WeeksPlan plan = tune_weeks_plan(1.0, 1000.0, 512);
  const double w0 = 2.0 * M_PI * 50.0;
  struct Pair {
    std::function<std::complex<double>(std::complex<double>)> F;
    std::function<double(double)> f;
    const char* name;
  };
  const std::vector<Pair> pairs = {
      {[](std::complex<double> s) { return 1.0 / (s + 10.0); },
       [](double t) { return std::exp(-10.0 * t); }, "exp(-10t)"},
      {[](std::complex<double> s) { return 1.0 / (s * s); }, [](double t) { return t; }, "t"},
      {[w0](std::complex<double> s) { return w0 / ((s + 5.0) * (s + 5.0) + w0 * w0); },
       [w0](double t) { return std::exp(-5.0 * t) * std::sin(w0 * t); },
       "sin(2pi 50 t) exp(-5t)"},
  };
  double worst = 0.0;
  for (const auto& p : pairs) {
    std::vector<std::complex<double>> samples(plan.N_s);
    for (int j = 0; j < plan.N_s; ++j) samples[j] = p.F(plan.frequencies[j]);
    const Eigen::VectorXd t = plan.time_grid();
    const auto synth = weeks_inverse(samples, plan, t);
    double peak = 0.0, err = 0.0;
    for (int i = 0; i < t.size(); ++i) peak = std::max(peak, std::abs(p.f(t(i))));
    for (int i = 0; i < t.size(); ++i)
      err = std::max(err, std::abs(synth.samples(i) - p.f(t(i))));
    worst = std::max(worst, err / peak);
  }
  report(2, "inverse-Laplace oracle", worst <= 1e-6,
         "tuned plan sigma_w=" + fmt(plan.sigma_w, "%.2f") + " b=" + fmt(plan.b, "%.1f") +
             ", worst error " + fmt(worst) + " of peak vs 1e-6",
         elapsed(t0));
}

// ---------------------------------------------------------------------------
// 3. Boundary-model oracle
// ---------------------------------------------------------------------------
void criterion_3() {
  const auto t0 = Clock::now();
  const double f_u = 2800.0;
  const std::vector<std::pair<std::string, MaterialSpec>> table = {
      {"CE_A", MaterialSpec::porous(10e3, 0.02, 0.02)},
      {"CE_B", MaterialSpec::porous(30e3, 0.12, 0.12)},
      {"CE_C", MaterialSpec::porous(10e3, 0.12, 0.22)},
      {"CE_D", MaterialSpec::porous(30e3, 0.02, 0.22)},
      {"FL_A", MaterialSpec::porous(10e3, 0.02, 0.0)},
      {"FL_B", MaterialSpec::porous(30e3, 0.02, 0.0)},
      {"FL_C", MaterialSpec::porous(50e3, 0.02, 0.0)},
      {"FL_D", MaterialSpec::impedance(10e3)},
      {"FL_E", MaterialSpec::impedance(90e3)},
      {"W_A", MaterialSpec::porous(5e3, 0.03, 0.0)},
      {"W_B", MaterialSpec::porous(12e3, 0.03, 0.0)},
      {"W_C", MaterialSpec::porous(19e3, 0.03, 0.0)},
  };
  int ok = 0;
  bool stable = true;
  std::string fails;
  for (const auto& [name, spec] : table) {
    if (spec.kind == MaterialSpec::Kind::FrequencyIndependent) {
      ++ok;  // constant admittance is exact
      continue;
    }
    std::vector<std::complex<double>> s(200), y(200);
    for (int i = 0; i < 200; ++i) {
      const double f = 20.0 * std::pow(f_u / 20.0, i / 199.0);
      s[i] = std::complex<double>(0.0, 2.0 * M_PI * f);
      y[i] = 1.0 / surface_impedance_tmm(spec, f);
    }
    try {
      const auto fit = vector_fit(s, y, 6);
      for (const auto& p : fit.model.poles()) stable &= p.real() < 0.0;
      ++ok;
    } catch (const NumericalError& e) {
      // extract the achieved error from the message for the report
      const std::string msg = e.what();
      const auto pos = msg.find("achieved ");
      fails += " " + name + "=" +
               (pos == std::string::npos ? "?" : msg.substr(pos + 9, msg.find(')', pos) - pos - 9));
    }
  }
  // absorption trend: wall panels rise with frequency
  bool rising = true;
  for (const auto& name : {"W_A", "W_B", "W_C"}) {
    const auto& spec = std::find_if(table.begin(), table.end(), [&](const auto& kv) {
                         return kv.first == name;
                       })->second;
    double prev = -1.0;
    for (double f : {125.0, 250.0, 500.0, 1000.0, 2000.0, 2800.0}) {
      const double a = absorption_coefficient(spec, f);
      rising &= a > prev;
      prev = a;
    }
  }
  const bool pass = ok == static_cast<int>(table.size()) && stable && rising;
  report(3, "boundary-model oracle (6 poles, 1e-3, 20 Hz..2.8 kHz)", pass,
         std::to_string(ok) + "/" + std::to_string(table.size()) +
             " materials within 1e-3, poles stable, alpha trend rising" +
             (fails.empty() ? "" : "; over tolerance:" + fails),
         elapsed(t0));
}

// ---------------------------------------------------------------------------
// 4. Galerkin exactness (untruncated basis, training assignment)
// ---------------------------------------------------------------------------
void criterion_4(ArtifactStore& store) {
  const auto t0 = Clock::now();
  Scenario s = rect_desk();
  const Mesh mesh = build_room_mesh(s.geometry, s.order, s.f_u, s.ppw);
  const FomOperators ops = assemble_fom_operators(mesh, s.source, s.sigma_g);
  const WeeksPlan plan = s.make_plan();
  const auto middle = s.middle_assignment();
  const AdmittanceMap adm = admittances_for(middle, s.f_u);
  const std::vector<Interpolant> receivers = {interpolation_at(mesh, s.receivers[0])};

  FomSolveOptions fopts;
  fopts.workers = 8;
  const LaplaceSolutionSet fom = solve_fom(ops, adm, plan, receivers, fopts);

  const SnapshotSet snaps = collect_snapshots({&fom});
  const PodBasis basis = pod_basis(snaps);
  const ReducedBasis rb = truncate_basis(basis, 0.0);
  const ReducedModel model = project_operators(rb.Phi, ops, receivers);
  const RomSolution rom = solve_rom(model, adm, plan);

  const double scale = fom.receiver_values.cwiseAbs().maxCoeff();
  const double dev =
      (rom.receiver_values - fom.receiver_values).cwiseAbs().maxCoeff() / scale;
  const double secs = elapsed(t0);
  report(4, "Galerkin exactness on the training snapshot span", dev <= 1e-8 && secs < 300.0,
         "N_rb=" + std::to_string(model.N_rb) + " (untruncated), max receiver deviation " +
             fmt(dev) + " of spectrum peak vs 1e-8",
         secs);
  (void)store;
}

// ---------------------------------------------------------------------------
// 5 + 6. 2D end-to-end accuracy ladder and speedups
// ---------------------------------------------------------------------------
struct LadderOutcome {
  std::vector<double> eps;
  std::vector<double> err;
  std::vector<double> sp;
  std::vector<int> n_rb;
};

LadderOutcome run_ladder(const Scenario& s, ArtifactStore& store,
                         const OfflineResult& offline) {
  LadderOutcome out;
  for (double eps : offline.eps_ladder) {
    OnlineOptions opts;
    opts.eps_pod = eps;
    opts.with_fom_verify = true;
    const OnlineResult res = run_online(s, store, offline, opts);
    out.eps.push_back(eps);
    out.err.push_back(res.report.eps_rel_abs_percent);
    out.sp.push_back(res.report.speedup_factor);
    out.n_rb.push_back(res.report.n_rb);
  }
  return out;
}

void criteria_5_6_9(ArtifactStore& store, LadderOutcome& rect_ladder_out) {
  // ---- 2D ladder ----
  auto t0 = Clock::now();
  const Scenario rect = rect_desk();
  PipelineOptions popts;
  popts.workers = 8;
  const OfflineResult rect_off = run_offline(rect, store, popts);
  const LadderOutcome rect_ladder = run_ladder(rect, store, rect_off);
  rect_ladder_out = rect_ladder;

  double err_at_1e4 = -1.0, sp_at_1e4 = -1.0;
  bool monotone = true;
  std::string ladder_str;
  for (size_t i = 0; i < rect_ladder.eps.size(); ++i) {
    if (rect_ladder.eps[i] == 1e-4) {
      err_at_1e4 = rect_ladder.err[i];
      sp_at_1e4 = rect_ladder.sp[i];
    }
    if (i > 0) monotone &= rect_ladder.err[i] <= 1.10 * rect_ladder.err[i - 1];
    ladder_str += fmt(rect_ladder.err[i]) + (i + 1 < rect_ladder.eps.size() ? "," : "");
  }
  report(5, "2D end-to-end accuracy (RECT, case 1, f_u=1 kHz)",
         err_at_1e4 >= 0.0 && err_at_1e4 <= 0.5 && monotone,
         "|eps_rel| at 1e-4: " + fmt(err_at_1e4) + "% vs 0.5%; ladder [" + ladder_str +
             "]% monotone(10%)=" + (monotone ? "yes" : "no"),
         elapsed(t0));

  // ---- speedups (2D at the 1e-4 model; 3D CB at its 1e-4 model) ----
  t0 = Clock::now();
  const Scenario cb = cb_desk();
  const OfflineResult cb_off = run_offline(cb, store, popts);
  OnlineOptions cb_opts;
  cb_opts.eps_pod = 1e-4;
  cb_opts.with_fom_verify = true;
  const OnlineResult cb_mid = run_online(cb, store, cb_off, cb_opts);
  const bool pass6 = sp_at_1e4 >= 20.0 && cb_mid.report.speedup_factor >= 50.0;
  report(6, "online speedup floors", pass6,
         "2D " + fmt(sp_at_1e4, "%.1f") + "x vs 20x (N_rb=" +
             std::to_string(rect_ladder.n_rb[2]) + "); CB " +
             fmt(cb_mid.report.speedup_factor, "%.1f") + "x vs 50x (N_rb=" +
             std::to_string(cb_mid.report.n_rb) + ")",
         elapsed(t0));

  // ---- 9: reverberation-time JND on the CB preset ----
  t0 = Clock::now();
  OnlineOptions cb_fine;
  cb_fine.eps_pod = 1e-6;
  cb_fine.with_fom_verify = true;
  const OnlineResult cb_res = run_online(cb, store, cb_off, cb_fine);
  bool pass9 = !cb_res.report.bands.empty();
  std::string bands_str;
  for (const auto& b : cb_res.report.bands) {
    pass9 &= b.jnd < 1.0;
    bands_str += fmt(b.f_center, "%.0f") + "Hz:" + fmt(b.jnd, "%.3f") + " ";
  }
  report(9, "reverberation time within one JND (CB, eps_pod=1e-6)", pass9,
         bands_str.empty() ? "no evaluable octave bands" : "JND per band: " + bands_str,
         elapsed(t0));
}

// ---------------------------------------------------------------------------
// 7. source-position decay ordering
// ---------------------------------------------------------------------------
void criterion_7(ArtifactStore& store) {
  const auto t0 = Clock::now();
  PipelineOptions popts;
  popts.workers = 8;
  popts.eps_ladder = {1e-3, 1e-4, 1e-5, 1e-6};
  std::map<std::string, std::vector<int>> n_rb;
  for (const auto& name : {"SQ1", "SQ2"}) {
    Scenario s = preset_scenario(name);
    s.f_u = 1000.0;
    const OfflineResult off = run_offline(s, store, popts);
    n_rb[name] = off.n_rb;
  }
  bool pass = true;
  std::string detail;
  for (size_t i = 0; i < popts.eps_ladder.size(); ++i) {
    pass &= n_rb["SQ2"][i] <= n_rb["SQ1"][i];
    detail += fmt(popts.eps_ladder[i]) + ": " + std::to_string(n_rb["SQ2"][i]) + "<=" +
              std::to_string(n_rb["SQ1"][i]) + " ";
  }
  report(7, "centered source needs no larger basis than corner source", pass, detail,
         elapsed(t0));
}

// ---------------------------------------------------------------------------
// 8. parameter-count decay behavior
// ---------------------------------------------------------------------------
void criterion_8(ArtifactStore& store, const Eigen::VectorXd& sigma_full) {
  const auto t0 = Clock::now();
  Scenario ce_only = rect_desk();
  ce_only.parameter_filter = {"CE"};
  PipelineOptions popts;
  popts.workers = 8;
  const OfflineResult off = run_offline(ce_only, store, popts);

  const Eigen::VectorXd e_full = sigma_full / sigma_full.sum();
  const Eigen::VectorXd e_ce = off.sigma / off.sigma.sum();
  const int n = static_cast<int>(std::min(e_full.size(), e_ce.size()));

  double head_dev = 0.0;
  for (int i = 0; i < 50 && i < n; ++i)
    head_dev = std::max(head_dev, std::abs(e_full(i) / e_ce(i) - 1.0));

  // beyond the crossover the larger training set decays slower
  int crossover = -1;
  for (int i = 1; i < n; ++i)
    if (e_full(i) > e_ce(i)) {
      crossover = i;
      break;
    }
  int above = 0, total = 0;
  const double floor = 1e-12 * e_full(0);
  for (int i = std::max(crossover, 50); i < n; ++i) {
    if (e_full(i) < floor || e_ce(i) < floor) break;
    ++total;
    if (e_full(i) >= e_ce(i)) ++above;
  }
  const double frac = total > 0 ? static_cast<double>(above) / total : 0.0;
  const bool pass = head_dev <= 0.05 && crossover > 0 && frac >= 0.9;
  report(8, "adding parameters keeps the early decay, slows the tail", pass,
         "first-50 max dev " + fmt(100.0 * head_dev, "%.2f") + "% vs 5%; crossover at " +
             std::to_string(crossover) + "; tail above-fraction " + fmt(100.0 * frac, "%.1f") +
             "% of " + std::to_string(total),
         elapsed(t0));
}

// ---------------------------------------------------------------------------
// 10. determinism
// ---------------------------------------------------------------------------
std::map<std::string, std::string> store_files(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "timing.json") continue;
    std::ifstream is(entry.path(), std::ios::binary);
    out[fs::relative(entry.path(), root).string()] = {std::istreambuf_iterator<char>(is),
                                                      std::istreambuf_iterator<char>()};
  }
  return out;
}

void criterion_10(const fs::path& store_a_root) {
  const auto t0 = Clock::now();
  const fs::path root_b = kBase / "store_b";
  fs::remove_all(root_b);
  ArtifactStore store_b(root_b);
  const Scenario rect = rect_desk();
  PipelineOptions popts;
  popts.workers = 8;
  const OfflineResult off = run_offline(rect, store_b, popts);
  run_ladder(rect, store_b, off);

  const auto a = store_files(store_a_root);
  const auto b = store_files(root_b);
  size_t compared = 0, mismatched = 0, missing = 0, metrics_checked = 0;
  bool metrics_equal = true;
  for (const auto& [rel, bytes] : b) {
    auto it = a.find(rel);
    if (it == a.end()) {
      ++missing;
      continue;
    }
    if (rel.find("metrics") != std::string::npos) {
      // metric JSON must match once timing fields are stripped
      if (rel.find("metrics.json") != std::string::npos) {
        auto ja = nlohmann::json::parse(it->second);
        auto jb = nlohmann::json::parse(bytes);
        ja.erase("timing");
        jb.erase("timing");
        metrics_equal &= ja == jb;
        ++metrics_checked;
      }
      continue;
    }
    ++compared;
    if (it->second != bytes) ++mismatched;
  }
  const bool pass = missing == 0 && mismatched == 0 && metrics_equal && metrics_checked > 0;
  report(10, "end-to-end determinism (bitwise artifacts)", pass,
         std::to_string(compared) + " files bitwise-identical, " + std::to_string(mismatched) +
             " mismatched, " + std::to_string(missing) + " missing; " +
             std::to_string(metrics_checked) + " metric JSONs equal after timing strip",
         elapsed(t0));
}

}  // namespace

int main() {
  std::printf("roomrom acceptance suite (desk scale)\n");
  fs::create_directories(kBase);
  ArtifactStore store(kBase / "store_a");

  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4(store);
    LadderOutcome rect_ladder;
    criteria_5_6_9(store, rect_ladder);
    criterion_7(store);
    {
      // criterion 8 reuses the full-plan spectrum persisted by criterion 5
      const Scenario rect = rect_desk();
      PipelineOptions popts;
      popts.workers = 8;
      const OfflineResult off = run_offline(rect, store, popts);
      criterion_8(store, off.sigma);
    }
    criterion_10(kBase / "store_a");
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 99;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
