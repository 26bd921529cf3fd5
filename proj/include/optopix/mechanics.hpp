#pragma once

#include "optopix/core_model.hpp"
#include "optopix/thermal_sim.hpp"

namespace optopix {

/// Linear-elastic clamped membrane closing the cavity.
struct MembraneModel {
  double youngs_modulus = 50e3;  // Pa
  double poisson_ratio = 0.49;
  double thickness = 0.25e-3;  // m
  double radius = 1.5e-3;      // m
  /// Empirical multiplier on the plate formula, calibrated against measured
  /// displacement. 1.0 is the bare formula.
  double compliance_scale = 1.0;

  /// Throws Error{validation, "invalid-membrane"}.
  void validate() const;

  /// Membrane over the cavity of `geometry`, made of `material`.
  static MembraneModel from(const PixelGeometry& geometry, const MaterialProperties& material,
                            double compliance_scale = 1.0);

  /// Displacement per unit gauge pressure, m/Pa.
  double compliance() const;
};

/// Absolute cavity pressure at constant volume, Pa.
double isometric_pressure(const GasState& gas, double air_temperature);
inline double isometric_gauge_pressure(const GasState& gas, double air_temperature) {
  return isometric_pressure(gas, air_temperature) - gas.ambient_pressure;
}

/// Gauge pressure of a gas at mean temperature T in a volume changed from
/// V0 to V: P_atm [(T/T_atm)(V0/V) - 1].
double finite_volume_pressure(const GasState& gas, double mean_air_temperature,
                              double initial_volume, double current_volume);

/// Force on the held-fixed membrane, N.
double blocked_force(const PixelGeometry& geometry, double gauge_pressure);

/// Small-deflection centre displacement, m. Linear in pressure.
double membrane_displacement(const MembraneModel& membrane, double gauge_pressure);

/// Inverts the blocked-force chain: absolute air temperature producing
/// `force` at constant volume.
double air_temperature_from_force(const PixelGeometry& geometry, const GasState& gas,
                                  double force);

enum class PressureModel {
  isometric,     // constant cavity volume (default)
  finite_volume  // cavity grows by the swept volume of the deflected membrane
};

/// Everything needed to turn an air-temperature trace into mechanics.
struct MechanicsContext {
  PixelGeometry geometry;
  GasState gas;
  MembraneModel membrane;
  PressureModel pressure_model = PressureModel::isometric;

  void validate() const;

  /// (gauge pressure, force, displacement) at one air temperature.
  struct Sample {
    double pressure;
    double force;
    double displacement;
  };
  Sample evaluate(double air_temperature) const;
};

/// Fills the pressure/force/displacement columns of `trace` in place.
void append_mechanics(const MechanicsContext& context, TraceSeries& trace);

}  // namespace optopix
