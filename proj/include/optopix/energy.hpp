#pragma once

#include <optional>
#include <string>

#include "optopix/core_model.hpp"

namespace optopix {

/// Actuation energy figures for one pulse. SI throughout; efficiencies are
/// fractions, not percent. Fields left at zero when not computed.
struct EfficiencyReport {
  double stroke_work = 0.0;             // J, F d / 2
  double stroke_power = 0.0;            // W
  double stroke_efficiency = 0.0;       // eta_s
  double heat_to_gas_efficiency = 0.0;  // eta_qt
  double thermo_mech_efficiency = 0.0;  // eta_tm
  double air_energy = 0.0;              // J, dQ_air
  double air_temp_rise = 0.0;           // K
  /// Specific heat used for dQ_air and which one it is ("cp", "cv" or
  /// "custom").
  double air_specific_heat = 0.0;
  std::string air_specific_heat_basis;
  double cavity_volume = 0.0;  // m^3 used for dQ_air
};

EfficiencyReport stroke_metrics(double peak_force, double peak_displacement,
                                double pulse_duration, double incident_power,
                                double absorbed_fraction);

struct GasEnergyOptions {
  /// J/(kg K). Defaults to the gas's c_p.
  std::optional<double> specific_heat;
  /// m^3. Defaults to the geometry's cavity volume.
  std::optional<double> cavity_volume;
  /// Stroke work from stroke_metrics; enables eta_tm.
  std::optional<double> stroke_work;
};

EfficiencyReport gas_energy_metrics(const PixelGeometry& geometry, const GasState& gas,
                                    double peak_force, double pulse_duration,
                                    double absorbed_power, const GasEnergyOptions& options = {});

/// Full chain from one operating point: stroke figures plus gas figures
/// with eta_tm filled in.
EfficiencyReport efficiency_report(const PixelGeometry& geometry, const GasState& gas,
                                   double peak_force, double peak_displacement,
                                   double pulse_duration, double incident_power,
                                   double absorbed_fraction, GasEnergyOptions options = {});

enum class HeatingMode { surface, volume };

/// reference_loss * (reference_scale / length_scale)^alpha, alpha = 1 for
/// surface heating and 2 for volume heating.
double scaling_efficiency_loss(double length_scale, double reference_scale,
                               double reference_loss, HeatingMode mode);

}  // namespace optopix
