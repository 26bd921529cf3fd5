#include "json.hpp"
#include "optopix/io.hpp"

namespace optopix {

using nlohmann::ordered_json;

std::string fit_result_to_json(const FitResult& fit) {
  ordered_json params = ordered_json::object();
  for (const auto& p : fit.parameters) {
    params[p.name] = {{"value", p.value}, {"std_error", p.std_error}, {"unit", p.unit}};
  }
  ordered_json j = {{"parameters", params},
                    {"r_squared", fit.r_squared},
                    {"residual_rms", fit.residual_rms},
                    {"iterations", fit.iterations},
                    {"converged", fit.converged}};
  j["window_s"] = fit.window ? ordered_json(*fit.window) : ordered_json(nullptr);
  j["seed"] = fit.seed ? ordered_json(*fit.seed) : ordered_json(nullptr);
  return j.dump(2) + "\n";
}

std::string efficiency_report_to_json(const EfficiencyReport& r) {
  const ordered_json j = {
      {"stroke_work_J", r.stroke_work},
      {"stroke_power_W", r.stroke_power},
      {"stroke_efficiency", r.stroke_efficiency},
      {"heat_to_gas_efficiency", r.heat_to_gas_efficiency},
      {"thermo_mech_efficiency", r.thermo_mech_efficiency},
      {"air_energy_J", r.air_energy},
      {"air_temp_rise_K", r.air_temp_rise},
      {"air_specific_heat_J_per_kgK", r.air_specific_heat},
      {"air_specific_heat_basis", r.air_specific_heat_basis},
      {"cavity_volume_m3", r.cavity_volume}};
  return j.dump(2) + "\n";
}

}  // namespace optopix
