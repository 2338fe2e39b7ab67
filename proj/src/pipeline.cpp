// SPDX-License-Identifier: Apache-2.0
#include "roomrom/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include "roomrom/errors.hpp"
#include "roomrom/svg.hpp"

namespace roomrom {

namespace {

nlohmann::json materials_json(const std::map<std::string, MaterialSpec>& materials) {
  nlohmann::json j;
  for (const auto& [label, m] : materials) j[label] = m.key();
  return j;
}

std::vector<Interpolant> receiver_interpolants(const Mesh& mesh, const Scenario& scenario) {
  std::vector<Interpolant> out;
  for (const auto& r : scenario.receivers) out.push_back(interpolation_at(mesh, r));
  return out;
}

void log_line(bool verbose, const std::string& msg) {
  if (verbose) std::cerr << "[roomrom] " << msg << '\n';
}

}  // namespace

nlohmann::json mesh_config(const Scenario& scenario) {
  nlohmann::json j;
  j["geometry"]["shape"] = room_shape_name(scenario.geometry.shape);
  j["geometry"]["dims"] = scenario.geometry.dims;
  if (scenario.geometry.patch)
    j["geometry"]["patch"] = {{"parent", scenario.geometry.patch->parent},
                              {"name", scenario.geometry.patch->name},
                              {"lo", scenario.geometry.patch->lo},
                              {"hi", scenario.geometry.patch->hi}};
  j["order"] = scenario.order;
  j["f_u"] = scenario.f_u;
  j["ppw"] = scenario.ppw;
  return j;
}

nlohmann::json plan_config(const Scenario& scenario) {
  nlohmann::json j;
  j["N_s"] = scenario.weeks.N_s;
  j["T"] = scenario.weeks.T;
  j["f_s"] = scenario.weeks.f_s;
  j["sigma_w"] = scenario.weeks.sigma_w;
  j["b"] = scenario.weeks.b;
  j["auto_tune"] = scenario.weeks.auto_tune;
  j["f_u"] = scenario.f_u;
  return j;
}

nlohmann::json run_config(const Scenario& scenario, const std::string& mesh_hash,
                          const std::map<std::string, MaterialSpec>& materials) {
  nlohmann::json j;
  j["mesh"] = mesh_hash;
  j["plan"] = plan_config(scenario);
  j["materials"] = materials_json(materials);
  j["source"] = std::vector<double>(scenario.source.begin(),
                                    scenario.source.begin() + scenario.geometry.dim());
  j["sigma_g"] = scenario.sigma_g;
  for (const auto& r : scenario.receivers)
    j["receivers"].push_back(
        std::vector<double>(r.begin(), r.begin() + scenario.geometry.dim()));
  return j;
}

OfflineResult run_offline(const Scenario& scenario, ArtifactStore& store,
                          const PipelineOptions& options) {
  scenario.validate();
  OfflineResult out;
  out.rows = training_plan(scenario);
  out.eps_ladder = options.eps_ladder.empty() ? scenario.eps_pod_ladder : options.eps_ladder;

  // mesh
  const nlohmann::json mesh_cfg = mesh_config(scenario);
  const std::string mesh_hash = config_hash(mesh_cfg);
  {
    const auto dir = store.prepare("mesh", mesh_cfg);
    if (store.exists("mesh", mesh_cfg)) {
      out.mesh = load_mesh((dir / "mesh.bin").string());
    } else {
      out.mesh = build_room_mesh(scenario.geometry, scenario.order, scenario.f_u, scenario.ppw);
      save_mesh(out.mesh, (dir / "mesh.bin").string());
      store.finalize("mesh", mesh_cfg);
    }
    log_line(options.verbose, "mesh: N = " + std::to_string(out.mesh.num_nodes()));
  }

  // operators
  {
    nlohmann::json ops_cfg;
    ops_cfg["mesh"] = mesh_hash;
    ops_cfg["source"] = std::vector<double>(scenario.source.begin(),
                                            scenario.source.begin() + scenario.geometry.dim());
    ops_cfg["sigma_g"] = scenario.sigma_g;
    const auto dir = store.prepare("operators", ops_cfg);
    out.ops = assemble_fom_operators(out.mesh, scenario.source, scenario.sigma_g);
    if (!store.exists("operators", ops_cfg)) {
      save_sparse(out.ops.M, (dir / "M.coo").string());
      save_sparse(out.ops.S, (dir / "S.coo").string());
      for (const auto& [label, g] : out.ops.boundary_mass)
        save_sparse(g, (dir / ("Gamma_" + label + ".coo")).string());
      save_array(dir / "p0.arr", Eigen::MatrixXd(out.ops.p0));
      store.finalize("operators", ops_cfg);
    }
  }

  out.plan = scenario.make_plan();
  const auto receivers = receiver_interpolants(out.mesh, scenario);

  // training FOM runs, deduplicated by assignment
  std::map<std::string, int> unique_index;           // dedup_key -> run slot
  std::vector<Eigen::MatrixXcd> unique_fields;       // per unique run
  std::vector<Eigen::MatrixXcd> unique_receivers;
  std::vector<double> unique_seconds;
  std::vector<std::string> unique_hashes;
  for (const auto& row : out.rows) {
    auto it = unique_index.find(row.dedup_key);
    if (it == unique_index.end()) {
      const nlohmann::json cfg = run_config(scenario, mesh_hash, row.materials);
      const std::string run_hash = config_hash(cfg);
      const auto dir = store.prepare("fom", cfg);
      Eigen::MatrixXcd fields, recv;
      double seconds = 0.0;
      if (store.exists("fom", cfg)) {
        fields = load_array_complex(dir / "fields.arr");
        recv = load_array_complex(dir / "receivers.arr");
        log_line(options.verbose, "fom run " + row.label + ": reused " + run_hash.substr(0, 16));
      } else {
        const AdmittanceMap adm =
            admittances_for(row.materials, scenario.f_u, &out.fit_cache);
        FomSolveOptions solve_opts;
        solve_opts.workers = options.workers;
        const LaplaceSolutionSet sol = solve_fom(out.ops, adm, out.plan, receivers, solve_opts);
        fields = sol.fields;
        recv = sol.receiver_values;
        seconds = sol.solve_seconds.sum();
        save_array(dir / "fields.arr", fields);
        save_array(dir / "receivers.arr", recv);
        nlohmann::json timing;
        timing["per_frequency_total_seconds"] = seconds;
        store.write_timing(dir, timing);
        store.finalize("fom", cfg);
        log_line(options.verbose, "fom run " + row.label + ": solved in " +
                                      std::to_string(seconds) + " s");
      }
      it = unique_index.emplace(row.dedup_key, static_cast<int>(unique_fields.size())).first;
      unique_fields.push_back(std::move(fields));
      unique_receivers.push_back(std::move(recv));
      unique_seconds.push_back(seconds);
      unique_hashes.push_back(run_hash);
    }
    out.run_hashes.push_back(unique_hashes[it->second]);
    out.run_receivers.push_back(unique_receivers[it->second]);
    out.run_seconds.push_back(unique_seconds[it->second]);
  }

  // snapshots in row order (the all-middle run re-enters per row)
  nlohmann::json basis_cfg;
  basis_cfg["runs"] = out.run_hashes;
  {
    const auto dir = store.prepare("basis", basis_cfg);
    if (store.exists("basis", basis_cfg)) {
      out.sigma = load_array_real(dir / "sigma.arr").col(0);
      out.modes = load_array_real(dir / "phi.arr");
    } else {
      // one solution-set shell per unique run, repeated per plan row
      std::vector<LaplaceSolutionSet> unique_runs(unique_fields.size());
      for (size_t u = 0; u < unique_fields.size(); ++u) {
        unique_runs[u].fields = std::move(unique_fields[u]);
        unique_runs[u].N = static_cast<int>(out.mesh.num_nodes());
        unique_runs[u].N_s = out.plan.N_s;
      }
      std::vector<const LaplaceSolutionSet*> ptrs;
      for (const auto& row : out.rows)
        ptrs.push_back(&unique_runs[unique_index.at(row.dedup_key)]);
      const SnapshotSet snaps = collect_snapshots(ptrs);
      unique_runs.clear();
      const PodBasis basis = pod_basis(snaps);
      out.sigma = basis.sigma;
      out.modes = basis.U;
      save_array(dir / "sigma.arr", Eigen::MatrixXd(out.sigma));
      save_array(dir / "phi.arr", out.modes);
      store.finalize("basis", basis_cfg);
    }
    log_line(options.verbose,
             "basis: rank " + std::to_string(out.modes.cols()) + " of " +
                 std::to_string(2 * out.plan.N_s * out.rows.size()) + " snapshot columns");
  }

  // reduced models per eps_pod
  PodBasis basis;
  basis.sigma = out.sigma;
  basis.U = out.modes;
  for (double eps : out.eps_ladder) {
    const ReducedBasis rb = truncate_basis(basis, eps);
    nlohmann::json model_cfg;
    model_cfg["basis"] = config_hash(basis_cfg);
    model_cfg["eps_pod"] = eps;
    model_cfg["n_rb"] = rb.N_rb;
    model_cfg["plan"] = plan_config(scenario);
    model_cfg["runs"] = out.run_hashes;
    const auto dir = store.prepare("rom", model_cfg);
    ReducedModel model = project_operators(rb.Phi, out.ops, receivers);
    model.eps_pod = eps;
    if (!store.exists("rom", model_cfg)) {
      save_array(dir / "M_r.arr", model.M_r);
      save_array(dir / "S_r.arr", model.S_r);
      for (const auto& [label, B] : model.boundary)
        save_array(dir / ("B_" + label + ".arr"), B);
      save_array(dir / "g.arr", Eigen::MatrixXd(model.g));
      save_array(dir / "recv.arr", model.receivers);
      save_array(dir / "sigma.arr", Eigen::MatrixXd(out.sigma));
      store.finalize("rom", model_cfg);
    }
    log_line(options.verbose, "model eps " + std::to_string(eps) + ": N_rb = " +
                                  std::to_string(rb.N_rb));
    out.n_rb.push_back(rb.N_rb);
    out.models.push_back(std::move(model));
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

OnlineResult run_online_impl(const Scenario& scenario, ArtifactStore& store,
                             const OfflineResult& offline, const OnlineOptions& options) {
  const auto online_materials = scenario.online_assignment();
  for (const auto& w : scenario.hull_warnings())
    std::cerr << "[roomrom] warning: " << w << '\n';

  // select the ladder model
  int model_idx = -1;
  for (size_t i = 0; i < offline.eps_ladder.size(); ++i)
    if (offline.eps_ladder[i] == options.eps_pod) model_idx = static_cast<int>(i);
  if (model_idx < 0)
    throw ConfigError("no reduced model for eps_pod = " + std::to_string(options.eps_pod) +
                      "; run the offline stage with it in the ladder");
  const ReducedModel& model = offline.models[model_idx];

  std::map<std::string, MaterialFit> fit_cache = offline.fit_cache;
  const AdmittanceMap adm = admittances_for(online_materials, scenario.f_u, &fit_cache);

  // timing protocol: median of timing_repeats runs of the solve loop
  std::vector<double> rom_seconds;
  RomSolution rom_sol;
  for (int rep = 0; rep < std::max(1, options.timing_repeats); ++rep) {
    rom_sol = solve_rom(model, adm, offline.plan);
    rom_seconds.push_back(rom_sol.solve_seconds.sum());
  }

  OnlineResult out;
  out.ir_rom = impulse_response(rom_sol.receiver_values.row(0), offline.plan);
  out.report.n_rb = model.N_rb;
  out.report.eps_pod = options.eps_pod;
  for (const auto& [label, m] : online_materials)
    out.report.online_parameters[label] = m.key();

  if (options.with_fom_verify) {
    const auto receivers = receiver_interpolants(offline.mesh, scenario);
    FomSolveOptions fom_opts;
    fom_opts.workers = 1;  // identical parallelism for both timing loops
    fom_opts.keep_fields = false;
    std::vector<double> fom_seconds;
    LaplaceSolutionSet fom_sol;
    for (int rep = 0; rep < std::max(1, options.timing_repeats); ++rep) {
      fom_sol = solve_fom(offline.ops, adm, offline.plan, receivers, fom_opts);
      fom_seconds.push_back(fom_sol.solve_seconds.sum());
    }
    out.ir_fom = impulse_response(fom_sol.receiver_values.row(0), offline.plan);

    out.report.eps_rel_percent = rms_relative_error(out.ir_fom->samples, out.ir_rom.samples);
    out.report.eps_rel_abs_percent = std::abs(out.report.eps_rel_percent);
    out.report.delta_l = spectrum_error(*out.ir_fom, out.ir_rom);
    out.report.bands = band_reverberation_comparison(*out.ir_fom, out.ir_rom);
    out.report.cpu_fom_seconds = median(fom_seconds);
    out.report.cpu_rom_seconds = median(rom_seconds);
    out.report.speedup_factor =
        speedup(out.report.cpu_fom_seconds, out.report.cpu_rom_seconds);
  }

  // persist
  nlohmann::json online_cfg;
  online_cfg["materials"] = materials_json(online_materials);
  online_cfg["eps_pod"] = options.eps_pod;
  online_cfg["runs"] = offline.run_hashes;
  online_cfg["with_fom_verify"] = options.with_fom_verify;
  online_cfg["scenario"] = scenario.name;
  const auto dir = store.prepare("online", online_cfg);
  save_impulse_response_csv(out.ir_rom, (dir / "ir_rom.csv").string());
  if (out.ir_fom) save_impulse_response_csv(*out.ir_fom, (dir / "ir_fom.csv").string());
  out.report.save_json((dir / "metrics.json").string());
  out.report.save_csv((dir / "metrics.csv").string());
  store.finalize("online", online_cfg);
  out.dir = dir;
  log_line(options.verbose, "online artifacts in " + dir.string());
  return out;
}

}  // namespace

OnlineResult run_online(const Scenario& scenario, ArtifactStore& store,
                        const OfflineResult& offline, const OnlineOptions& options) {
  return run_online_impl(scenario, store, offline, options);
}

OnlineResult run_online(const Scenario& scenario, ArtifactStore& store,
                        const OnlineOptions& options) {
  PipelineOptions pipeline_opts;
  pipeline_opts.workers = options.workers;
  pipeline_opts.verbose = options.verbose;
  // resumable: completed artifacts are loaded, not recomputed
  const OfflineResult offline = run_offline(scenario, store, pipeline_opts);
  return run_online_impl(scenario, store, offline, options);
}

void export_report(const Scenario& scenario, ArtifactStore& store,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  PipelineOptions opts;
  const OfflineResult offline = run_offline(scenario, store, opts);

  // singular decay table + plot
  {
    std::ofstream os(out_dir / "singular_decay.csv");
    os.precision(17);
    os << "index,sigma,energy_fraction\n";
    const double total = offline.sigma.sum();
    for (int i = 0; i < offline.sigma.size(); ++i)
      os << i + 1 << ',' << offline.sigma(i) << ',' << offline.sigma(i) / total << '\n';
    SvgSeries s;
    s.label = scenario.name;
    const int n = static_cast<int>(offline.sigma.size());
    s.x.resize(n);
    s.y.resize(n);
    for (int i = 0; i < n; ++i) {
      s.x(i) = i + 1;
      s.y(i) = offline.sigma(i) / total;
    }
    write_svg_plot((out_dir / "singular_decay.svg").string(), {s},
                   {"Singular value energy decay", "mode index", "E/E0", false, true});
  }
  // N_rb vs eps_pod
  {
    std::ofstream os(out_dir / "nrb_vs_eps.csv");
    os << "eps_pod,n_rb\n";
    os.precision(17);
    for (size_t i = 0; i < offline.eps_ladder.size(); ++i)
      os << offline.eps_ladder[i] << ',' << offline.n_rb[i] << '\n';
    SvgSeries s;
    s.label = scenario.name;
    s.x.resize(static_cast<long>(offline.eps_ladder.size()));
    s.y.resize(static_cast<long>(offline.eps_ladder.size()));
    for (size_t i = 0; i < offline.eps_ladder.size(); ++i) {
      s.x(static_cast<long>(i)) = offline.eps_ladder[i];
      s.y(static_cast<long>(i)) = offline.n_rb[i];
    }
    write_svg_plot((out_dir / "nrb_vs_eps.svg").string(), {s},
                   {"Basis size vs truncation tolerance", "eps_pod", "N_rb", true, false});
  }
  // ladder online runs: speedup vs error, Delta L, T20/JND for the last model
  {
    std::ofstream os(out_dir / "speedup_vs_error.csv");
    os << "eps_pod,n_rb,eps_rel_percent,speedup\n";
    os.precision(12);
    OnlineOptions online_opts;
    online_opts.with_fom_verify = true;
    std::optional<OnlineResult> last;
    for (double eps : offline.eps_ladder) {
      online_opts.eps_pod = eps;
      const OnlineResult res = run_online(scenario, store, offline, online_opts);
      os << eps << ',' << res.report.n_rb << ',' << res.report.eps_rel_percent << ','
         << res.report.speedup_factor << '\n';
      last = res;
    }
    if (last && last->report.delta_l) {
      const auto& dl = *last->report.delta_l;
      std::ofstream dos(out_dir / "delta_l.csv");
      dos << "f_hz,delta_db\n";
      dos.precision(12);
      for (int k = 0; k < dl.frequencies.size(); ++k) {
        if (std::isnan(dl.delta_db(k))) continue;
        dos << dl.frequencies(k) << ',' << dl.delta_db(k) << '\n';
      }
      SvgSeries s{"|Delta L|", dl.frequencies, dl.delta_db.cwiseAbs()};
      write_svg_plot((out_dir / "delta_l.svg").string(), {s},
                     {"Spectrum error", "f (Hz)", "|Delta L| (dB)", false, false});
      std::ofstream tos(out_dir / "t20_jnd.csv");
      tos << "f_center,t20_fom,t20_rom,jnd\n";
      tos.precision(12);
      for (const auto& b : last->report.bands)
        tos << b.f_center << ',' << b.t20_fom << ',' << b.t20_rom << ',' << b.jnd << '\n';
    }
  }
}

}  // namespace roomrom
