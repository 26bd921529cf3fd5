#include "optopix/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "optopix/error.hpp"

namespace optopix {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Error config_error(const std::string& msg) { return validation_error("invalid-config", msg); }

// Reads keys from one JSON object and complains about anything left over.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw config_error(where_ + " must be a JSON object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return number(key);
  }
  double number(const std::string& key) {
    if (!has(key)) throw config_error(where_ + "." + key + " is required");
    const json& v = raw(key);
    if (!v.is_number()) throw config_error(where_ + "." + key + " must be a number");
    return v.get<double>();
  }
  int integer(const std::string& key) {
    if (!has(key)) throw config_error(where_ + "." + key + " is required");
    const json& v = raw(key);
    if (!v.is_number_integer()) throw config_error(where_ + "." + key + " must be an integer");
    return v.get<int>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw config_error(where_ + "." + key + " must be a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) {
        throw config_error("unknown key '" + it.key() + "' in " + where_);
      }
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw validation_error("config-not-found", "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error("malformed-json", what + ": " + e.what());
  }
}

ConductivityModel read_conductivity(const json& v, const std::string& where) {
  if (v.is_number()) return ConductivityModel::constant(v.get<double>());
  Reader r(v, where);
  const std::string model = r.string("model", "constant");
  const double coef = r.number("coefficient");
  r.finish();
  if (model == "constant") return ConductivityModel::constant(coef);
  if (model == "inverse_temperature") return ConductivityModel::inverse_temperature(coef);
  throw config_error(where + ".model must be 'constant' or 'inverse_temperature'");
}

json conductivity_json(const ConductivityModel& k) {
  return {{"model", k.kind() == ConductivityModel::Kind::constant ? "constant"
                                                                   : "inverse_temperature"},
          {"coefficient", k.coefficient()}};
}

MaterialProperties read_material(const json& v, const fs::path& dir, const std::string& where,
                                 std::vector<std::string>& sources);

MaterialProperties material_from_file(const std::string& name, const fs::path& dir,
                                      std::vector<std::string>& sources) {
  const fs::path p = resolve_preset(name, dir);
  sources.push_back(p.string());
  const json j = parse_json(read_file(p), p.string());
  return read_material(j, p.parent_path(), p.filename().string(), sources);
}

MaterialProperties read_material(const json& v, const fs::path& dir, const std::string& where,
                                 std::vector<std::string>& sources) {
  if (v.is_string()) return material_from_file(v.get<std::string>(), dir, sources);
  Reader r(v, where);
  MaterialProperties m;
  if (r.has("preset")) {
    m = material_from_file(r.string("preset", ""), dir, sources);
  }
  m.name = r.string("name", m.name);
  m.specific_heat = r.number("specific_heat", m.specific_heat);
  m.density = r.number("density", m.density);
  if (r.has("thermal_conductivity_in_plane")) {
    m.thermal_conductivity_in_plane = read_conductivity(
        r.raw("thermal_conductivity_in_plane"), where + ".thermal_conductivity_in_plane");
  }
  m.thermal_conductivity_cross_plane =
      r.number("thermal_conductivity_cross_plane", m.thermal_conductivity_cross_plane);
  if (r.has("youngs_modulus")) m.youngs_modulus = r.number("youngs_modulus");
  if (r.has("poisson_ratio")) m.poisson_ratio = r.number("poisson_ratio");
  r.finish();
  return m;
}

json material_json(const MaterialProperties& m) {
  json j = {{"name", m.name},
            {"specific_heat", m.specific_heat},
            {"density", m.density},
            {"thermal_conductivity_in_plane", conductivity_json(m.thermal_conductivity_in_plane)},
            {"thermal_conductivity_cross_plane", m.thermal_conductivity_cross_plane}};
  if (m.youngs_modulus) j["youngs_modulus"] = *m.youngs_modulus;
  if (m.poisson_ratio) j["poisson_ratio"] = *m.poisson_ratio;
  return j;
}

}  // namespace

ThermalNetwork PixelConfig::network() const {
  return derive_network(geometry, absorber, gas, eval_temperature);
}

MechanicsContext PixelConfig::mechanics() const {
  MechanicsContext ctx;
  ctx.geometry = geometry;
  ctx.gas = gas;
  ctx.membrane = MembraneModel::from(geometry, membrane, compliance_scale);
  ctx.pressure_model = pressure_model;
  ctx.validate();
  return ctx;
}

std::vector<fs::path> preset_search_path(const fs::path& referring_dir) {
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("OPTOPIX_CONFIG_DIR"); env && *env) dirs.emplace_back(env);
  if (!referring_dir.empty()) dirs.push_back(referring_dir);
  dirs.emplace_back(OPTOPIX_PRESET_DIR);
  return dirs;
}

fs::path resolve_preset(const std::string& name, const fs::path& referring_dir) {
  const fs::path direct(name);
  std::error_code ec;
  if (fs::is_regular_file(direct, ec)) return direct;
  if (!referring_dir.empty() && direct.is_relative() &&
      fs::is_regular_file(referring_dir / direct, ec)) {
    return referring_dir / direct;
  }
  if (!direct.has_parent_path()) {
    for (const auto& dir : preset_search_path(referring_dir)) {
      for (const fs::path& cand : {dir / name, dir / (name + ".json")}) {
        if (fs::is_regular_file(cand, ec)) return cand;
      }
    }
  }
  throw validation_error("config-not-found", "no config or preset named '" + name + "'");
}

MaterialProperties load_material(const std::string& path_or_name, const fs::path& referring_dir) {
  std::vector<std::string> sources;
  MaterialProperties m = material_from_file(path_or_name, referring_dir, sources);
  m.validate();
  return m;
}

PixelConfig parse_pixel_config(const std::string& json_text, const fs::path& base_dir) {
  const json j = parse_json(json_text, "config");
  PixelConfig cfg;
  try {
    Reader top(j, "config");
    if (top.has("geometry")) {
      Reader g(top.raw("geometry"), "geometry");
      auto& geo = cfg.geometry;
      geo.cavity_radius = g.number("cavity_radius", geo.cavity_radius);
      geo.cavity_height = g.number("cavity_height", geo.cavity_height);
      geo.bridge_width = g.number("bridge_width", geo.bridge_width);
      geo.bridge_length = g.number("bridge_length", geo.bridge_length);
      geo.absorber_area = g.number("absorber_area", geo.absorber_area);
      geo.absorber_thickness = g.number("absorber_thickness", geo.absorber_thickness);
      geo.membrane_thickness = g.number("membrane_thickness", geo.membrane_thickness);
      g.finish();
    }
    if (top.has("materials")) {
      Reader m(top.raw("materials"), "materials");
      if (m.has("absorber")) {
        cfg.absorber = read_material(m.raw("absorber"), base_dir, "materials.absorber", cfg.sources);
      }
      if (m.has("membrane")) {
        cfg.membrane = read_material(m.raw("membrane"), base_dir, "materials.membrane", cfg.sources);
      }
      cfg.compliance_scale = m.number("compliance_scale", cfg.compliance_scale);
      cfg.eval_temperature = m.number("eval_temperature", cfg.eval_temperature);
      const std::string pm = m.string("pressure_model", "isometric");
      if (pm == "isometric") {
        cfg.pressure_model = PressureModel::isometric;
      } else if (pm == "finite_volume") {
        cfg.pressure_model = PressureModel::finite_volume;
      } else {
        throw config_error("materials.pressure_model must be 'isometric' or 'finite_volume'");
      }
      m.finish();
    }
    if (top.has("gas")) {
      Reader g(top.raw("gas"), "gas");
      auto& gas = cfg.gas;
      gas.ambient_pressure = g.number("ambient_pressure", gas.ambient_pressure);
      gas.ambient_temperature = g.number("ambient_temperature", gas.ambient_temperature);
      gas.specific_gas_constant = g.number("specific_gas_constant", gas.specific_gas_constant);
      gas.density = g.number(
          "density", gas.ambient_pressure / (gas.specific_gas_constant * gas.ambient_temperature));
      gas.thermal_conductivity = g.number("thermal_conductivity", gas.thermal_conductivity);
      gas.specific_heat_cv = g.number("specific_heat_cv", gas.specific_heat_cv);
      gas.specific_heat_cp = g.number("specific_heat_cp", gas.specific_heat_cp);
      g.finish();
    }
    if (top.has("optics")) {
      Reader o(top.raw("optics"), "optics");
      cfg.optics.incident_power = o.number("incident_power", cfg.optics.incident_power);
      cfg.optics.absorbed_fraction = o.number("absorbed_fraction", cfg.optics.absorbed_fraction);
      o.finish();
    }
    top.finish();
  } catch (const json::exception& e) {
    throw config_error(e.what());
  }
  cfg.geometry.validate();
  cfg.absorber.validate();
  cfg.membrane.validate();
  cfg.gas.validate();
  cfg.optics.validate();
  if (!(cfg.compliance_scale > 0.0)) throw config_error("compliance_scale must be > 0");
  // Surfaces an out-of-range evaluation temperature at load time.
  (void)cfg.absorber.thermal_conductivity_in_plane.at(cfg.eval_temperature);
  return cfg;
}

PixelConfig load_pixel_config(const std::string& path_or_name) {
  const fs::path p = resolve_preset(path_or_name);
  PixelConfig cfg = parse_pixel_config(read_file(p), p.parent_path());
  cfg.sources.insert(cfg.sources.begin(), p.string());
  return cfg;
}

std::string pixel_config_to_json(const PixelConfig& c) {
  const auto& g = c.geometry;
  const json j = {
      {"geometry",
       {{"cavity_radius", g.cavity_radius},
        {"cavity_height", g.cavity_height},
        {"bridge_width", g.bridge_width},
        {"bridge_length", g.bridge_length},
        {"absorber_area", g.absorber_area},
        {"absorber_thickness", g.absorber_thickness},
        {"membrane_thickness", g.membrane_thickness}}},
      {"materials",
       {{"absorber", material_json(c.absorber)},
        {"membrane", material_json(c.membrane)},
        {"compliance_scale", c.compliance_scale},
        {"eval_temperature", c.eval_temperature},
        {"pressure_model",
         c.pressure_model == PressureModel::isometric ? "isometric" : "finite_volume"}}},
      {"gas",
       {{"ambient_pressure", c.gas.ambient_pressure},
        {"ambient_temperature", c.gas.ambient_temperature},
        {"specific_gas_constant", c.gas.specific_gas_constant},
        {"density", c.gas.density},
        {"thermal_conductivity", c.gas.thermal_conductivity},
        {"specific_heat_cv", c.gas.specific_heat_cv},
        {"specific_heat_cp", c.gas.specific_heat_cp}}},
      {"optics",
       {{"incident_power", c.optics.incident_power},
        {"absorbed_fraction", c.optics.absorbed_fraction}}}};
  return j.dump(2) + "\n";
}

PatternFile parse_pattern(const std::string& json_text) {
  const json j = parse_json(json_text, "pattern");
  PatternFile pf;
  try {
    Reader top(j, "pattern");
    {
      Reader l(top.raw("layout"), "layout");
      pf.layout.rows = l.integer("rows");
      pf.layout.cols = l.integer("cols");
      pf.layout.pitch = l.number("pitch_m", pf.layout.pitch);
      pf.layout.pixel_config = l.string("pixel_config", "");
      if (l.has("mask")) {
        const json& mask = l.raw("mask");
        if (!mask.is_array()) throw config_error("layout.mask must be an array");
        // Either a flat list of cells or a list of rows; 0/1 or booleans.
        for (const auto& item : mask) {
          if (item.is_array()) {
            for (const auto& v : item) pf.layout.active_mask.push_back(v.get<int>() != 0);
          } else if (item.is_boolean()) {
            pf.layout.active_mask.push_back(item.get<bool>());
          } else {
            pf.layout.active_mask.push_back(item.get<int>() != 0);
          }
        }
      }
      l.finish();
      pf.layout.validate();
    }
    const json& events = top.raw("events");
    if (!events.is_array()) throw config_error("events must be an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string where = "events[" + std::to_string(i) + "]";
      Reader e(events[i], where);
      TactilePattern::Event ev;
      const json& px = e.raw("pixel");
      if (px.is_array() && px.size() == 2) {
        const int r = px[0].get<int>(), c = px[1].get<int>();
        if (r < 0 || c < 0 || r >= pf.layout.rows || c >= pf.layout.cols) {
          throw validation_error("unknown-pixel", where + ".pixel lies outside the layout");
        }
        ev.pixel = pf.layout.index(r, c);
      } else if (px.is_number_integer() && px.get<long long>() >= 0) {
        ev.pixel = px.get<std::size_t>();
      } else {
        throw config_error(where + ".pixel must be a cell index or [row, col]");
      }
      ev.start = e.number("t0_s");
      Reader t(e.raw("train"), where + ".train");
      ev.train.pulse_power = t.number("P_W");
      ev.train.pulse_duration = t.number("tp_s");
      ev.train.gap_duration = t.number("tg_s", 0.0);
      ev.train.pulse_count = t.has("n") ? t.integer("n") : 1;
      ev.train.absorbed_fraction = t.number("eps", 0.66);
      t.finish();
      e.finish();
      pf.pattern.events.push_back(ev);
    }
    pf.pattern.total_duration = top.number("total_duration_s", pf.pattern.last_event_end());
    top.finish();
  } catch (const json::exception& e) {
    throw config_error(e.what());
  }
  pf.pattern.validate(pf.layout);
  return pf;
}

PatternFile load_pattern_file(const std::string& path) { return parse_pattern(read_file(path)); }

std::string pattern_to_json(const DisplayLayout& layout, const TactilePattern& pattern) {
  json lay = {{"rows", layout.rows}, {"cols", layout.cols}, {"pitch_m", layout.pitch}};
  if (!layout.pixel_config.empty()) lay["pixel_config"] = layout.pixel_config;
  if (!layout.active_mask.empty()) {
    json mask = json::array();
    for (bool b : layout.active_mask) mask.push_back(b ? 1 : 0);
    lay["mask"] = mask;
  }
  json events = json::array();
  for (const auto& e : pattern.events) {
    events.push_back({{"pixel", e.pixel},
                      {"t0_s", e.start},
                      {"train",
                       {{"P_W", e.train.pulse_power},
                        {"tp_s", e.train.pulse_duration},
                        {"tg_s", e.train.gap_duration},
                        {"n", e.train.pulse_count},
                        {"eps", e.train.absorbed_fraction}}}});
  }
  const json j = {{"layout", lay}, {"events", events}, {"total_duration_s", pattern.total_duration}};
  return j.dump(2) + "\n";
}

}  // namespace optopix
