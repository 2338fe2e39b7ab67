// SPDX-License-Identifier: Apache-2.0
#include "roomrom/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "roomrom/errors.hpp"

namespace roomrom {

MaterialSpec MaterialOption::materialize(const std::map<std::string, double>& overrides) const {
  auto value = [&](const char* name, const ParamSpec& p) {
    auto it = overrides.find(name);
    if (it != overrides.end()) return it->second;
    if (p.values.empty())
      throw ConfigError(std::string("material parameter '") + name + "' has no value");
    return p.middle();
  };
  if (kind == MaterialSpec::Kind::FrequencyIndependent)
    return MaterialSpec::impedance(value("z_s", z_s));
  return MaterialSpec::porous(value("sigma_mat", sigma_mat), value("d_mat", d_mat),
                              value("d0", d0));
}

std::vector<std::pair<std::string, const ParamSpec*>> MaterialOption::params() const {
  if (kind == MaterialSpec::Kind::FrequencyIndependent) return {{"z_s", &z_s}};
  return {{"sigma_mat", &sigma_mat}, {"d_mat", &d_mat}, {"d0", &d0}};
}

void Scenario::validate() const {
  geometry.validate();
  if (!(f_u > 0.0)) throw ConfigError("scenario field 'f_u' must be positive");
  if (!(ppw >= 2.0)) throw ConfigError("scenario field 'ppw' must be >= 2");
  if (order < 1) throw ConfigError("scenario field 'order' must be >= 1");
  if (!(sigma_g > 0.0)) throw ConfigError("scenario field 'sigma_g' must be positive");
  if (!(weeks.T > 0.0)) throw ConfigError("scenario field 'weeks.T' must be positive");
  if (weeks.N_s < 2 || (weeks.N_s & (weeks.N_s - 1)) != 0)
    throw ConfigError("scenario field 'weeks.N_s' must be a power of two");
  if (!geometry.contains(source, -1e-9))
    throw ConfigError("scenario field 'source' must lie strictly inside the room");
  if (receivers.empty()) throw ConfigError("scenario needs at least one receiver");
  for (const auto& r : receivers)
    if (!geometry.contains(r, -1e-9))
      throw ConfigError("scenario receivers must lie strictly inside the room");

  const auto labels = geometry.surface_labels();
  for (const auto& label : labels)
    if (surfaces.find(label) == surfaces.end())
      throw ConfigError("scenario is missing surface '" + label + "'");
  for (const auto& [label, cfg] : surfaces) {
    if (std::find(labels.begin(), labels.end(), label) == labels.end())
      throw ConfigError("scenario surface '" + label + "' does not exist in the geometry");
    if (cfg.options.empty())
      throw ConfigError("surface '" + label + "' needs at least one material option");
    if (cfg.default_option < 0 || cfg.default_option >= static_cast<int>(cfg.options.size()))
      throw ConfigError("surface '" + label + "' has an out-of-range default option");
    for (const auto& opt : cfg.options)
      for (const auto& [pname, p] : opt.params()) {
        if (p->values.empty())
          throw ConfigError("surface '" + label + "' parameter '" + pname + "' has no values");
        if (p->values.size() != 1 && p->values.size() != 3)
          throw ConfigError("surface '" + label + "' parameter '" + pname +
                            "' needs 1 value or a 3-value training grid");
        // materializing validates positivity constraints
      }
    for (const auto& opt : cfg.options) opt.materialize();
  }
  if (!surface_order.empty())
    for (const auto& label : surface_order)
      if (surfaces.find(label) == surfaces.end())
        throw ConfigError("surface_order names unknown surface '" + label + "'");
  for (const auto& s : parameter_filter)
    if (surfaces.find(s) == surfaces.end())
      throw ConfigError("parameter_filter names unknown surface '" + s + "'");
  if (!online_cases.empty()) {
    if (online_cases.find(online_case) == online_cases.end())
      throw ConfigError("online_case '" + online_case + "' is not defined");
    for (const auto& [cname, assignment] : online_cases)
      for (const auto& label : labels)
        if (assignment.find(label) == assignment.end())
          throw ConfigError("online case '" + cname + "' is missing surface '" + label + "'");
  }
  for (double e : eps_pod_ladder)  // 0 keeps the untruncated basis
    if (!(e >= 0.0 && e < 1.0)) throw ConfigError("eps_pod values must lie in [0, 1)");
}

std::map<std::string, MaterialSpec> Scenario::middle_assignment() const {
  std::map<std::string, MaterialSpec> out;
  for (const auto& [label, cfg] : surfaces)
    out.emplace(label, cfg.options[cfg.default_option].materialize());
  return out;
}

std::map<std::string, MaterialSpec> Scenario::online_assignment() const {
  auto it = online_cases.find(online_case);
  if (it == online_cases.end())
    throw ConfigError("scenario has no online case '" + online_case + "'");
  return it->second;
}

std::vector<std::string> Scenario::hull_warnings() const {
  std::vector<std::string> out;
  if (online_cases.find(online_case) == online_cases.end()) return out;
  for (const auto& [label, mat] : online_cases.at(online_case)) {
    const auto& cfg = surfaces.at(label);
    // compare against the option of the same kind, when present
    const MaterialOption* opt = nullptr;
    for (const auto& o : cfg.options)
      if (o.kind == mat.kind) opt = &o;
    if (!opt) {
      out.push_back("surface '" + label + "': online material kind was not trained");
      continue;
    }
    auto check = [&](const char* pname, const ParamSpec& p, double v) {
      if (p.values.empty()) return;
      const double lo = *std::min_element(p.values.begin(), p.values.end());
      const double hi = *std::max_element(p.values.begin(), p.values.end());
      if (v < lo - 1e-12 || v > hi + 1e-12) {
        std::ostringstream os;
        os << "surface '" << label << "': online " << pname << " = " << v
           << " lies outside the trained range [" << lo << ", " << hi << "]";
        out.push_back(os.str());
      }
    };
    if (mat.kind == MaterialSpec::Kind::FrequencyIndependent) {
      check("z_s", opt->z_s, mat.z_s);
    } else {
      check("sigma_mat", opt->sigma_mat, mat.sigma_mat);
      check("d_mat", opt->d_mat, mat.d_mat);
      check("d0", opt->d0, mat.d0);
    }
  }
  return out;
}

WeeksPlan Scenario::make_plan() const {
  if (!weeks.auto_tune || (weeks.sigma_w > 0.0 && weeks.b > 0.0))
    return make_weeks_plan(weeks.T, f_u, weeks.N_s, weeks.sigma_w, weeks.b, weeks.f_s);
  // Band-matched plan: b = 2 pi f_u puts roughly two thirds of the contour
  // samples below f_u and keeps the Laguerre coefficient tail small for
  // band-limited room responses; sigma_w = 5/T bounds the e^{sigma t}
  // amplification. (The low-frequency analytic-pair optimum of
  // tune_weeks_plan under-samples the band badly.)
  return make_weeks_plan(weeks.T, f_u, weeks.N_s, 5.0 / weeks.T, 2.0 * M_PI * f_u,
                         weeks.f_s);
}

std::vector<TrainingRow> training_plan(const Scenario& scenario) {
  scenario.validate();
  const auto middle = scenario.middle_assignment();
  const std::vector<std::string> order =
      scenario.surface_order.empty()
          ? [&] {
              std::vector<std::string> keys;
              for (const auto& [k, v] : scenario.surfaces) keys.push_back(k);
              return keys;
            }()
          : scenario.surface_order;
  const std::set<std::string> filter(scenario.parameter_filter.begin(),
                                     scenario.parameter_filter.end());

  auto dedup_key = [](const std::map<std::string, MaterialSpec>& mats) {
    std::string key;
    for (const auto& [label, m] : mats) key += label + "=" + m.key() + ";";
    return key;
  };

  std::vector<TrainingRow> rows;
  std::set<std::string> seen_groups;
  for (const auto& label : order) {
    if (!filter.empty() && filter.find(label) == filter.end()) continue;
    const auto& cfg = scenario.surfaces.at(label);
    for (size_t oi = 0; oi < cfg.options.size(); ++oi) {
      const auto& opt = cfg.options[oi];
      for (const auto& [pname, p] : opt.params()) {
        if (!p->parameterized()) continue;
        if (!p->group.empty()) {
          if (seen_groups.count(p->group)) continue;
          seen_groups.insert(p->group);
        }
        for (int vi = 0; vi < 3; ++vi) {
          TrainingRow row;
          row.label = p->group.empty()
                          ? label + "." + pname + "[" + std::to_string(vi) + "]"
                          : p->group + "[" + std::to_string(vi) + "]";
          row.materials = middle;
          if (p->group.empty()) {
            row.materials[label] = opt.materialize({{pname, p->values[vi]}});
          } else {
            // grouped parameters move together across all member surfaces
            for (const auto& [label2, cfg2] : scenario.surfaces)
              for (const auto& opt2 : cfg2.options)
                for (const auto& [pname2, p2] : opt2.params())
                  if (p2->group == p->group)
                    row.materials[label2] = opt2.materialize({{pname2, p2->values[vi]}});
          }
          row.dedup_key = dedup_key(row.materials);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  if (rows.empty()) throw ConfigError("scenario has no parameterized surfaces to train on");
  return rows;
}

AdmittanceMap admittances_for(const std::map<std::string, MaterialSpec>& materials, double f_u,
                              std::map<std::string, MaterialFit>* fit_cache) {
  AdmittanceMap out;
  std::map<std::string, MaterialFit> local;
  auto& cache = fit_cache ? *fit_cache : local;
  for (const auto& [label, mat] : materials) {
    const std::string key = mat.key();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, fit_material_admittance(mat, f_u)).first;
    out.emplace(label, it->second.admittance);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::json param_to_json(const ParamSpec& p) {
  nlohmann::json j;
  if (p.values.size() == 1) {
    j = p.values[0];
  } else {
    j = nlohmann::json{{"values", p.values}};
    if (!p.group.empty()) j["group"] = p.group;
  }
  return j;
}

ParamSpec param_from_json(const nlohmann::json& j, const std::string& where) {
  ParamSpec p;
  if (j.is_number()) {
    p.values = {j.get<double>()};
    return p;
  }
  if (!j.is_object() || !j.contains("values"))
    throw ConfigError("field '" + where + "' must be a number or {values: [...]}");
  p.values = j.at("values").get<std::vector<double>>();
  if (j.contains("group")) p.group = j.at("group").get<std::string>();
  return p;
}

nlohmann::json material_spec_to_json(const MaterialSpec& m) {
  if (m.kind == MaterialSpec::Kind::FrequencyIndependent)
    return {{"kind", "impedance"}, {"z_s", m.z_s}};
  return {{"kind", "porous"}, {"sigma_mat", m.sigma_mat}, {"d_mat", m.d_mat}, {"d0", m.d0}};
}

MaterialSpec material_spec_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("field '" + where + "' must be a material object with 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  auto need = [&](const char* f) {
    if (!j.contains(f))
      throw ConfigError("field '" + where + "' (" + kind + ") is missing '" + f + "'");
    return j.at(f).get<double>();
  };
  if (kind == "impedance") return MaterialSpec::impedance(need("z_s"));
  if (kind == "porous") return MaterialSpec::porous(need("sigma_mat"), need("d_mat"), need("d0"));
  throw ConfigError("field '" + where + "': unknown material kind '" + kind + "'");
}

}  // namespace

nlohmann::json Scenario::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["geometry"]["shape"] = room_shape_name(geometry.shape);
  j["geometry"]["dims"] = geometry.dims;
  if (geometry.patch)
    j["geometry"]["patch"] = {{"parent", geometry.patch->parent},
                              {"name", geometry.patch->name},
                              {"lo", geometry.patch->lo},
                              {"hi", geometry.patch->hi}};
  j["source"] = std::vector<double>(source.begin(), source.begin() + geometry.dim());
  for (const auto& r : receivers)
    j["receivers"].push_back(std::vector<double>(r.begin(), r.begin() + geometry.dim()));
  j["order"] = order;
  j["f_u"] = f_u;
  j["ppw"] = ppw;
  j["sigma_g"] = sigma_g;
  j["weeks"] = {{"N_s", weeks.N_s}, {"T", weeks.T},       {"f_s", weeks.f_s},
                {"sigma_w", weeks.sigma_w}, {"b", weeks.b}, {"auto_tune", weeks.auto_tune}};
  j["surface_order"] = surface_order;
  for (const auto& [label, cfg] : surfaces) {
    nlohmann::json js;
    js["default_option"] = cfg.default_option;
    for (const auto& opt : cfg.options) {
      nlohmann::json jo;
      if (opt.kind == MaterialSpec::Kind::FrequencyIndependent) {
        jo["kind"] = "impedance";
        jo["z_s"] = param_to_json(opt.z_s);
      } else {
        jo["kind"] = "porous";
        jo["sigma_mat"] = param_to_json(opt.sigma_mat);
        jo["d_mat"] = param_to_json(opt.d_mat);
        jo["d0"] = param_to_json(opt.d0);
      }
      js["options"].push_back(jo);
    }
    j["surfaces"][label] = js;
  }
  for (const auto& [cname, assignment] : online_cases) {
    nlohmann::json jc;
    for (const auto& [label, m] : assignment) jc[label] = material_spec_to_json(m);
    j["online_cases"][cname] = jc;
  }
  j["online_case"] = online_case;
  j["eps_pod_ladder"] = eps_pod_ladder;
  if (!parameter_filter.empty()) j["parameter_filter"] = parameter_filter;
  return j;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
  Scenario s;
  try {
    s.name = j.value("name", std::string("scenario"));
    const auto& jg = j.at("geometry");
    s.geometry.shape = room_shape_from_name(jg.at("shape").get<std::string>());
    s.geometry.dims = jg.at("dims").get<std::vector<double>>();
    if (jg.contains("patch")) {
      SurfacePatch p;
      p.parent = jg.at("patch").at("parent").get<std::string>();
      p.name = jg.at("patch").at("name").get<std::string>();
      p.lo = jg.at("patch").at("lo").get<std::array<double, 2>>();
      p.hi = jg.at("patch").at("hi").get<std::array<double, 2>>();
      s.geometry.patch = p;
    }
    const auto src = j.at("source").get<std::vector<double>>();
    for (size_t a = 0; a < src.size() && a < 3; ++a) s.source[a] = src[a];
    for (const auto& jr : j.at("receivers")) {
      const auto r = jr.get<std::vector<double>>();
      std::array<double, 3> rr{0, 0, 0};
      for (size_t a = 0; a < r.size() && a < 3; ++a) rr[a] = r[a];
      s.receivers.push_back(rr);
    }
    s.order = j.value("order", 4);
    s.f_u = j.at("f_u").get<double>();
    s.ppw = j.value("ppw", 4.0);
    s.sigma_g = j.value("sigma_g", 0.1);
    if (j.contains("weeks")) {
      const auto& jw = j.at("weeks");
      s.weeks.N_s = jw.value("N_s", 512);
      s.weeks.T = jw.value("T", s.geometry.dim() == 2 ? 1.0 : 0.6);
      s.weeks.f_s = jw.value("f_s", 0.0);
      s.weeks.sigma_w = jw.value("sigma_w", 0.0);
      s.weeks.b = jw.value("b", 0.0);
      s.weeks.auto_tune = jw.value("auto_tune", true);
    } else {
      s.weeks.T = s.geometry.dim() == 2 ? 1.0 : 0.6;
    }
    if (j.contains("surface_order"))
      s.surface_order = j.at("surface_order").get<std::vector<std::string>>();
    for (const auto& [label, js] : j.at("surfaces").items()) {
      SurfaceConfig cfg;
      cfg.default_option = js.value("default_option", 0);
      if (!js.contains("options"))
        throw ConfigError("surface '" + label + "' is missing 'options'");
      for (const auto& jo : js.at("options")) {
        MaterialOption opt;
        const std::string kind = jo.at("kind").get<std::string>();
        const std::string where = "surfaces." + label;
        if (kind == "impedance") {
          opt.kind = MaterialSpec::Kind::FrequencyIndependent;
          opt.z_s = param_from_json(jo.at("z_s"), where + ".z_s");
        } else if (kind == "porous") {
          opt.kind = MaterialSpec::Kind::PorousLayered;
          if (!jo.contains("sigma_mat"))
            throw ConfigError(where + ": porous option is missing 'sigma_mat'");
          opt.sigma_mat = param_from_json(jo.at("sigma_mat"), where + ".sigma_mat");
          if (!jo.contains("d_mat"))
            throw ConfigError(where + ": porous option is missing 'd_mat'");
          opt.d_mat = param_from_json(jo.at("d_mat"), where + ".d_mat");
          if (!jo.contains("d0"))
            throw ConfigError(where + ": porous option is missing 'd0'");
          opt.d0 = param_from_json(jo.at("d0"), where + ".d0");
        } else {
          throw ConfigError(where + ": unknown material kind '" + kind + "'");
        }
        cfg.options.push_back(std::move(opt));
      }
      s.surfaces.emplace(label, std::move(cfg));
    }
    if (j.contains("online_cases"))
      for (const auto& [cname, jc] : j.at("online_cases").items()) {
        std::map<std::string, MaterialSpec> assignment;
        for (const auto& [label, jm] : jc.items())
          assignment.emplace(label,
                             material_spec_from_json(jm, "online_cases." + cname + "." + label));
        s.online_cases.emplace(cname, std::move(assignment));
      }
    s.online_case = j.value("online_case", std::string("case1"));
    if (j.contains("eps_pod_ladder"))
      s.eps_pod_ladder = j.at("eps_pod_ladder").get<std::vector<double>>();
    if (j.contains("parameter_filter"))
      s.parameter_filter = j.at("parameter_filter").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario schema violation: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open scenario file '" + path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file '" + path + "' is not valid JSON: " + e.what());
  }
  return Scenario::from_json(j);
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

ParamSpec fixed(double v) { return {{v}, ""}; }
ParamSpec grid3(double a, double b, double c, std::string group = "") {
  return {{a, b, c}, std::move(group)};
}

MaterialOption porous_option(ParamSpec sigma, ParamSpec d, ParamSpec d0) {
  MaterialOption o;
  o.kind = MaterialSpec::Kind::PorousLayered;
  o.sigma_mat = std::move(sigma);
  o.d_mat = std::move(d);
  o.d0 = std::move(d0);
  return o;
}

MaterialOption impedance_option(ParamSpec z) {
  MaterialOption o;
  o.kind = MaterialSpec::Kind::FrequencyIndependent;
  o.z_s = std::move(z);
  return o;
}

// Uniform frequency-independent walls swept jointly over [500, 5250, 10000].
Scenario uniform_2d_preset(const std::string& name, RoomGeometry geom,
                           std::array<double, 3> source, std::array<double, 3> receiver) {
  Scenario s;
  s.name = name;
  s.geometry = std::move(geom);
  s.source = source;
  s.receivers = {receiver};
  s.f_u = 2800.0;
  s.weeks.T = 1.0;
  s.surface_order = {"CE", "FL", "WL", "WR"};
  for (const auto& label : s.surface_order) {
    SurfaceConfig cfg;
    cfg.options.push_back(impedance_option(grid3(500.0, 5250.0, 10000.0, "Z_all")));
    s.surfaces.emplace(label, cfg);
  }
  std::map<std::string, MaterialSpec> online;
  for (const auto& label : s.surface_order)
    online.emplace(label, MaterialSpec::impedance(2000.0));
  s.online_cases.emplace("case1", std::move(online));
  return s;
}

Scenario rect2d_preset() {
  Scenario s;
  s.name = "RECT-2D";
  s.geometry = RoomGeometry::rectangle(4.0, 2.5);
  s.source = {3.0, 1.2, 0.0};
  s.receivers = {{1.0, 1.2, 0.0}};
  s.f_u = 2000.0;
  s.weeks.T = 1.0;
  s.surface_order = {"CE", "FL", "WL", "WR"};

  SurfaceConfig ce;
  ce.options.push_back(porous_option(grid3(10e3, 30e3, 50e3), grid3(0.02, 0.12, 0.22),
                                     grid3(0.02, 0.12, 0.22)));
  s.surfaces.emplace("CE", ce);

  SurfaceConfig fl;  // hard-floor variant first, carpet is the pinned default
  fl.options.push_back(impedance_option(grid3(10e3, 50e3, 90e3)));
  fl.options.push_back(porous_option(grid3(10e3, 30e3, 50e3), fixed(0.02), fixed(0.0)));
  fl.default_option = 1;
  s.surfaces.emplace("FL", fl);

  SurfaceConfig wall;
  wall.options.push_back(porous_option(grid3(5e3, 12e3, 19e3), fixed(0.03), fixed(0.0)));
  s.surfaces.emplace("WL", wall);
  s.surfaces.emplace("WR", wall);

  std::map<std::string, MaterialSpec> case1{
      {"CE", MaterialSpec::porous(2e3, 0.1, 0.1)},
      {"FL", MaterialSpec::porous(12e3, 0.02, 0.0)},
      {"WL", MaterialSpec::porous(10e3, 0.03, 0.0)},
      {"WR", MaterialSpec::porous(15e3, 0.03, 0.0)},
  };
  std::map<std::string, MaterialSpec> case2{
      {"CE", MaterialSpec::porous(45e3, 0.05, 0.2)},
      {"FL", MaterialSpec::impedance(7e3)},
      {"WL", MaterialSpec::porous(10e3, 0.2, 0.0)},
      {"WR", MaterialSpec::porous(6e3, 0.03, 0.0)},
  };
  s.online_cases.emplace("case1", std::move(case1));
  s.online_cases.emplace("case2", std::move(case2));
  return s;
}

Scenario box3d_preset(const std::string& name, double Lx, double Ly, double Lz,
                      std::array<double, 3> source, std::array<double, 3> receiver, double f_u,
                      const std::map<std::string, MaterialSpec>& online) {
  Scenario s;
  s.name = name;
  s.geometry = RoomGeometry::box(Lx, Ly, Lz);
  SurfacePatch panel;
  panel.parent = "WN";
  panel.name = "WN_panel";
  panel.lo = {0.5 * (Lx - 0.5), 0.5 * (Lz - 0.5)};
  panel.hi = {0.5 * (Lx + 0.5), 0.5 * (Lz + 0.5)};
  s.geometry.patch = panel;
  s.source = source;
  s.receivers = {receiver};
  s.f_u = f_u;
  s.weeks.T = 0.6;
  s.surface_order = {"CE", "FL", "WE", "WS", "WW", "WN", "WN_panel"};

  SurfaceConfig ce;
  ce.options.push_back(
      porous_option(grid3(10e3, 30e3, 50e3), fixed(0.05), grid3(0.02, 0.12, 0.22)));
  s.surfaces.emplace("CE", ce);
  SurfaceConfig hard;
  hard.options.push_back(impedance_option(fixed(50e3)));
  s.surfaces.emplace("FL", hard);
  s.surfaces.emplace("WE", hard);
  s.surfaces.emplace("WN", hard);
  SurfaceConfig ws;
  ws.options.push_back(porous_option(fixed(7e3), fixed(0.02), fixed(0.0)));
  s.surfaces.emplace("WS", ws);
  SurfaceConfig ww;
  ww.options.push_back(porous_option(grid3(5e3, 12e3, 19e3), fixed(0.05), fixed(0.0)));
  s.surfaces.emplace("WW", ww);
  SurfaceConfig pnl;
  pnl.options.push_back(porous_option(fixed(30e3), fixed(0.1), grid3(0.02, 0.12, 0.22)));
  s.surfaces.emplace("WN_panel", pnl);

  s.online_cases.emplace("case1", online);
  return s;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"SQ1", "SQ2", "RC1", "RC2", "LS1", "CO1", "RECT-2D", "CB", "GR"};
}

Scenario preset_scenario(const std::string& name) {
  Scenario s;
  if (name == "SQ1") {
    s = uniform_2d_preset(name, RoomGeometry::square(4.0), {0.2, 0.2, 0}, {2.8, 2.8, 0});
  } else if (name == "SQ2") {
    s = uniform_2d_preset(name, RoomGeometry::square(4.0), {2.0, 2.0, 0}, {2.8, 2.8, 0});
  } else if (name == "RC1") {
    s = uniform_2d_preset(name, RoomGeometry::rectangle(4.0, 2.5), {0.2, 0.2, 0}, {1.0, 1.2, 0});
  } else if (name == "RC2") {
    s = uniform_2d_preset(name, RoomGeometry::rectangle(4.0, 2.5), {2.0, 1.25, 0}, {1.0, 1.2, 0});
  } else if (name == "LS1") {
    s = uniform_2d_preset(name, RoomGeometry::lshape(4.0, 2.0), {0.2, 0.2, 0}, {3.0, 1.0, 0});
  } else if (name == "CO1") {
    s = uniform_2d_preset(name, RoomGeometry::corridor(10.0, 1.0), {0.2, 0.2, 0}, {7.0, 0.5, 0});
  } else if (name == "RECT-2D") {
    s = rect2d_preset();
  } else if (name == "CB") {
    s = box3d_preset("CB", 1.0, 1.0, 1.0, {0.7, 0.5, 0.5}, {0.25, 0.25, 0.5}, 2800.0,
                     {{"CE", MaterialSpec::porous(12e3, 0.05, 0.06)},
                      {"FL", MaterialSpec::impedance(50e3)},
                      {"WE", MaterialSpec::impedance(50e3)},
                      {"WS", MaterialSpec::porous(7e3, 0.02, 0.0)},
                      {"WW", MaterialSpec::porous(10e3, 0.05, 0.0)},
                      {"WN", MaterialSpec::impedance(50e3)},
                      {"WN_panel", MaterialSpec::porous(30e3, 0.1, 0.1)}});
  } else if (name == "GR") {
    s = box3d_preset("GR", 1.615, 1.190, 0.850, {1.200, 0.600, 0.425}, {0.500, 0.200, 0.425},
                     1700.0,
                     {{"CE", MaterialSpec::porous(10.5e3, 0.05, 0.025)},
                      {"FL", MaterialSpec::impedance(50e3)},
                      {"WE", MaterialSpec::impedance(50e3)},
                      {"WS", MaterialSpec::porous(7e3, 0.02, 0.0)},
                      {"WW", MaterialSpec::porous(5.5e3, 0.05, 0.0)},
                      {"WN", MaterialSpec::impedance(50e3)},
                      {"WN_panel", MaterialSpec::porous(30e3, 0.1, 0.03)}});
  } else {
    std::ostringstream os;
    os << "unknown preset '" << name << "'; available:";
    for (const auto& p : preset_names()) os << ' ' << p;
    throw ConfigError(os.str());
  }
  s.validate();
  return s;
}

}  // namespace roomrom
