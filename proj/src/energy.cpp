#include "optopix/energy.hpp"

#include <cmath>

#include "optopix/error.hpp"
#include "optopix/mechanics.hpp"

namespace optopix {

EfficiencyReport stroke_metrics(double peak_force, double peak_displacement,
                                double pulse_duration, double incident_power,
                                double absorbed_fraction) {
  if (!(peak_force >= 0.0) || !(peak_displacement >= 0.0)) {
    throw validation_error("domain", "force and displacement must be >= 0");
  }
  if (!(pulse_duration > 0.0) || !(incident_power > 0.0) ||
      !(absorbed_fraction > 0.0 && absorbed_fraction <= 1.0)) {
    throw validation_error("domain", "pulse duration, power and absorbed fraction must be > 0");
  }
  EfficiencyReport r;
  r.stroke_work = 0.5 * peak_force * peak_displacement;
  r.stroke_power = r.stroke_work / pulse_duration;
  r.stroke_efficiency = r.stroke_power / (absorbed_fraction * incident_power);
  return r;
}

EfficiencyReport gas_energy_metrics(const PixelGeometry& geometry, const GasState& gas,
                                    double peak_force, double pulse_duration,
                                    double absorbed_power, const GasEnergyOptions& options) {
  if (!(pulse_duration > 0.0) || !(absorbed_power > 0.0)) {
    throw validation_error("domain", "pulse duration and absorbed power must be > 0");
  }
  EfficiencyReport r;
  r.cavity_volume = options.cavity_volume.value_or(geometry.cavity_volume());
  if (!(r.cavity_volume > 0.0)) throw validation_error("domain", "cavity volume must be > 0");
  if (options.specific_heat) {
    r.air_specific_heat = *options.specific_heat;
    r.air_specific_heat_basis = r.air_specific_heat == gas.specific_heat_cp   ? "cp"
                                : r.air_specific_heat == gas.specific_heat_cv ? "cv"
                                                                              : "custom";
  } else {
    r.air_specific_heat = gas.specific_heat_cp;
    r.air_specific_heat_basis = "cp";
  }
  if (!(r.air_specific_heat > 0.0)) throw validation_error("domain", "specific heat must be > 0");

  r.air_temp_rise =
      air_temperature_from_force(geometry, gas, peak_force) - gas.ambient_temperature;
  r.air_energy = r.air_specific_heat * gas.density * r.cavity_volume * r.air_temp_rise;
  r.heat_to_gas_efficiency = r.air_energy / (absorbed_power * pulse_duration);
  if (options.stroke_work) {
    r.stroke_work = *options.stroke_work;
    r.thermo_mech_efficiency = r.air_energy > 0.0 ? r.stroke_work / r.air_energy : 0.0;
  }
  return r;
}

EfficiencyReport efficiency_report(const PixelGeometry& geometry, const GasState& gas,
                                   double peak_force, double peak_displacement,
                                   double pulse_duration, double incident_power,
                                   double absorbed_fraction, GasEnergyOptions options) {
  const EfficiencyReport s = stroke_metrics(peak_force, peak_displacement, pulse_duration,
                                            incident_power, absorbed_fraction);
  options.stroke_work = s.stroke_work;
  EfficiencyReport r = gas_energy_metrics(geometry, gas, peak_force, pulse_duration,
                                          absorbed_fraction * incident_power, options);
  r.stroke_power = s.stroke_power;
  r.stroke_efficiency = s.stroke_efficiency;
  return r;
}

double scaling_efficiency_loss(double length_scale, double reference_scale,
                               double reference_loss, HeatingMode mode) {
  if (!(length_scale > 0.0) || !(reference_scale > 0.0)) {
    throw validation_error("domain", "length scales must be > 0");
  }
  if (!(reference_loss > 0.0 && reference_loss < 1.0)) {
    throw validation_error("domain", "reference_loss must lie in (0, 1)");
  }
  const double ratio = reference_scale / length_scale;
  return reference_loss * (mode == HeatingMode::surface ? ratio : ratio * ratio);
}

}  // namespace optopix
