// SPDX-License-Identifier: Apache-2.0
//
// roomrom: room-acoustics wave simulation with reduced-basis acceleration.
//
//   roomrom presets [--dump NAME]
//   roomrom mesh    --preset CB --out DIR
//   roomrom fom     --preset RECT-2D --out DIR [--workers N]
//   roomrom offline --preset RECT-2D --out DIR [--eps-pod LIST] [--workers N]
//   roomrom online  --preset RECT-2D --out DIR [--eps-pod LIST] [--with-fom-verify]
//   roomrom metrics --out DIR --fom IR.csv --rom IR.csv
//   roomrom report  --preset RECT-2D --out DIR

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "roomrom/errors.hpp"
#include "roomrom/pipeline.hpp"

using namespace roomrom;

namespace {

struct CommonArgs {
  std::string config;
  std::string preset;
  std::string out = "roomrom_out";
  std::vector<double> eps_pod;
  int workers = 1;
};

void add_scenario_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "scenario JSON file");
  cmd->add_option("--preset", args.preset, "built-in scenario name");
  cmd->add_option("--out", args.out, "artifact/output directory");
  cmd->add_option("--eps-pod", args.eps_pod, "basis truncation tolerance list");
  cmd->add_option("--workers", args.workers, "parallel workers for FOM frequency solves");
}

Scenario resolve_scenario(const CommonArgs& args) {
  if (!args.config.empty() && !args.preset.empty())
    throw ConfigError("give either --config or --preset, not both");
  if (!args.config.empty()) return load_scenario(args.config);
  if (!args.preset.empty()) return preset_scenario(args.preset);
  throw ConfigError("a scenario is required: --config PATH or --preset NAME");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"room-acoustics wave solver with a reduced-basis online stage"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string dump_name;
  bool with_fom_verify = false;
  std::string metrics_fom, metrics_rom;

  auto* presets_cmd = app.add_subcommand("presets", "list built-in scenarios");
  presets_cmd->add_option("--dump", dump_name, "print one preset as JSON");

  auto* mesh_cmd = app.add_subcommand("mesh", "build and export the scenario mesh");
  add_scenario_options(mesh_cmd, args);

  auto* fom_cmd = app.add_subcommand("fom", "solve the full-order model at the online values");
  add_scenario_options(fom_cmd, args);

  auto* offline_cmd = app.add_subcommand("offline", "training runs, basis, reduced models");
  add_scenario_options(offline_cmd, args);

  auto* online_cmd = app.add_subcommand("online", "reduced online solve and metrics");
  add_scenario_options(online_cmd, args);
  online_cmd->add_flag("--with-fom-verify", with_fom_verify,
                       "also solve the FOM at the online values and compare");

  auto* metrics_cmd = app.add_subcommand("metrics", "recompute metrics from exported IRs");
  add_scenario_options(metrics_cmd, args);
  metrics_cmd->add_option("--fom", metrics_fom, "reference IR CSV")->required();
  metrics_cmd->add_option("--rom", metrics_rom, "reduced-model IR CSV")->required();

  auto* report_cmd = app.add_subcommand("report", "CSV tables and SVG plots");
  add_scenario_options(report_cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets_cmd->parsed()) {
      if (!dump_name.empty()) {
        std::cout << preset_scenario(dump_name).to_json().dump(2) << '\n';
      } else {
        for (const auto& name : preset_names()) std::cout << name << '\n';
      }
      return 0;
    }

    if (mesh_cmd->parsed()) {
      const Scenario sc = resolve_scenario(args);
      const Mesh mesh = build_room_mesh(sc.geometry, sc.order, sc.f_u, sc.ppw);
      std::filesystem::create_directories(args.out);
      const auto path = std::filesystem::path(args.out) / (sc.name + "_mesh.bin");
      save_mesh(mesh, path.string());
      std::cout << "mesh: N = " << mesh.num_nodes() << ", elements = " << mesh.num_elements()
                << ", labels =";
      for (const auto& l : mesh.labels()) std::cout << ' ' << l;
      std::cout << "\nwrote " << path.string() << '\n';
      return 0;
    }

    if (fom_cmd->parsed()) {
      const Scenario sc = resolve_scenario(args);
      const Mesh mesh = build_room_mesh(sc.geometry, sc.order, sc.f_u, sc.ppw);
      const FomOperators ops = assemble_fom_operators(mesh, sc.source, sc.sigma_g);
      const WeeksPlan plan = sc.make_plan();
      const AdmittanceMap adm = admittances_for(sc.online_assignment(), sc.f_u);
      std::vector<Interpolant> receivers;
      for (const auto& r : sc.receivers) receivers.push_back(interpolation_at(mesh, r));
      FomSolveOptions opts;
      opts.workers = args.workers;
      opts.keep_fields = false;
      const LaplaceSolutionSet sol = solve_fom(ops, adm, plan, receivers, opts);
      const ImpulseResponse ir = impulse_response(sol.receiver_values.row(0), plan);
      std::filesystem::create_directories(args.out);
      const auto path = std::filesystem::path(args.out) / (sc.name + "_fom_ir.csv");
      save_impulse_response_csv(ir, path.string());
      std::cout << "fom: N = " << mesh.num_nodes() << ", solve loop "
                << sol.solve_seconds.sum() << " s\nwrote " << path.string() << '\n';
      return 0;
    }

    if (offline_cmd->parsed()) {
      const Scenario sc = resolve_scenario(args);
      ArtifactStore store(args.out);
      PipelineOptions opts;
      opts.workers = args.workers;
      opts.eps_ladder = args.eps_pod;
      opts.verbose = true;
      const OfflineResult res = run_offline(sc, store, opts);
      std::cout << "offline: " << res.rows.size() << " training rows, basis rank "
                << res.modes.cols() << '\n';
      for (size_t i = 0; i < res.eps_ladder.size(); ++i)
        std::cout << "  eps_pod " << res.eps_ladder[i] << " -> N_rb " << res.n_rb[i] << '\n';
      return 0;
    }

    if (online_cmd->parsed()) {
      const Scenario sc = resolve_scenario(args);
      ArtifactStore store(args.out);
      OnlineOptions opts;
      opts.with_fom_verify = with_fom_verify;
      opts.workers = args.workers;
      opts.verbose = true;
      std::vector<double> ladder = args.eps_pod.empty() ? sc.eps_pod_ladder : args.eps_pod;
      for (double eps : ladder) {
        opts.eps_pod = eps;
        const OnlineResult res = run_online(sc, store, opts);
        std::cout << "online eps_pod " << eps << ": N_rb = " << res.report.n_rb;
        if (with_fom_verify)
          std::cout << ", eps_rel = " << res.report.eps_rel_percent
                    << " %, speedup = " << res.report.speedup_factor;
        std::cout << "\n  artifacts: " << res.dir.string() << '\n';
      }
      return 0;
    }

    if (metrics_cmd->parsed()) {
      const ImpulseResponse fom = load_impulse_response_csv(metrics_fom);
      const ImpulseResponse rom = load_impulse_response_csv(metrics_rom);
      MetricReport report;
      report.eps_rel_percent = rms_relative_error(fom.samples, rom.samples);
      report.eps_rel_abs_percent = std::abs(report.eps_rel_percent);
      report.delta_l = spectrum_error(fom, rom);
      report.bands = band_reverberation_comparison(fom, rom);
      std::filesystem::create_directories(args.out);
      const auto path = std::filesystem::path(args.out) / "metrics.json";
      report.save_json(path.string());
      std::cout << "eps_rel = " << report.eps_rel_percent << " %\n";
      for (const auto& b : report.bands)
        std::cout << "T20 @ " << b.f_center << " Hz: fom " << b.t20_fom << " s, rom "
                  << b.t20_rom << " s, " << b.jnd << " JND\n";
      std::cout << "wrote " << path.string() << '\n';
      return 0;
    }

    if (report_cmd->parsed()) {
      const Scenario sc = resolve_scenario(args);
      ArtifactStore store(args.out);
      const auto dir = std::filesystem::path(args.out) / "report";
      export_report(sc, store, dir);
      std::cout << "report written to " << dir.string() << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
