#pragma once

#include <optional>
#include <string>
#include <utility>

namespace optopix {

/// Physical dimensions of one pixel. All lengths in m, areas in m^2.
struct PixelGeometry {
  double cavity_radius = 1.5e-3;
  double cavity_height = 1.0e-3;
  double bridge_width = 0.4e-3;
  /// Characteristic length of heat transfer along the bridges. Defaults to
  /// the absorber-edge-to-wall distance when nothing better is known.
  double bridge_length = 0.5e-3;
  double absorber_area = 2.0e-3 * 1.5e-3;
  double absorber_thickness = 16.7e-6;
  double membrane_thickness = 0.25e-3;

  /// Throws Error{validation, "invalid-geometry"}.
  void validate() const;

  double aperture_area() const;  // pi r^2
  double cavity_volume() const;  // pi r^2 H
  double absorber_volume() const;
};

/// In-plane conductivity k(T). Graphite sheet follows k = b / T; other
/// materials are adequately constant.
class ConductivityModel {
 public:
  enum class Kind { constant, inverse_temperature };

  static ConductivityModel constant(double k) { return {Kind::constant, k}; }
  static ConductivityModel inverse_temperature(double b) {
    return {Kind::inverse_temperature, b};
  }

  /// Temperature range over which the model is trusted, K.
  static constexpr double min_temperature = 250.0;
  static constexpr double max_temperature = 3300.0;

  /// Throws Error{validation, "out-of-range"} outside the validity range.
  double at(double temperature) const;

  Kind kind() const { return kind_; }
  double coefficient() const { return coefficient_; }

 private:
  ConductivityModel(Kind kind, double c) : kind_(kind), coefficient_(c) {}
  Kind kind_;
  double coefficient_;
};

struct MaterialProperties {
  std::string name;
  double specific_heat = 0.0;  // J/(kg K)
  double density = 0.0;        // kg/m^3
  ConductivityModel thermal_conductivity_in_plane = ConductivityModel::constant(1.0);
  double thermal_conductivity_cross_plane = 0.0;  // W/(m K)
  std::optional<double> youngs_modulus;           // Pa, membranes only
  std::optional<double> poisson_ratio;

  void validate() const;

  /// Pyrolytic graphite sheet, measured density, k_xy = 3.6e5 / T.
  static MaterialProperties pgs();
  /// EcoFlex 00-10 silicone membrane.
  static MaterialProperties ecoflex0010();
};

/// Ambient cavity gas (air by default).
struct GasState {
  double ambient_pressure = 101325.0;     // Pa
  double ambient_temperature = 300.0;     // K, also the wall reservoir
  double specific_gas_constant = 287.05;  // J/(kg K)
  double density = 101325.0 / (287.05 * 300.0);
  double thermal_conductivity = 0.0263;  // W/(m K) at 300 K
  double specific_heat_cv = 718.0;       // J/(kg K)
  double specific_heat_cp = 1005.0;      // J/(kg K)

  /// Ideal-gas consistency tolerance at ambient.
  static constexpr double consistency_tolerance = 5e-3;

  void validate() const;

  /// Air at the given ambient state with density from the ideal-gas law.
  static GasState air(double pressure = 101325.0, double temperature = 300.0);
};

struct OpticalInput {
  double incident_power = 0.0;     // W
  double absorbed_fraction = 0.66;  // dimensionless, (0, 1]

  void validate() const;
  double absorbed_power() const { return incident_power * absorbed_fraction; }
};

/// Lumped two-node thermal network: absorber and cavity air against a wall
/// reservoir. Time constants are derived on construction.
class ThermalNetwork {
 public:
  /// Throws Error{validation, "invalid-network"} on non-positive values.
  ThermalNetwork(double r_abs, double r_air, double c_abs, double c_air,
                 double wall_temperature);

  double r_abs() const { return r_abs_; }
  double r_air() const { return r_air_; }
  double c_abs() const { return c_abs_; }
  double c_air() const { return c_air_; }
  double tau_abs() const { return tau_abs_; }
  double tau_air() const { return tau_air_; }
  double wall_temperature() const { return wall_temperature_; }

  /// Time constants (fast, slow) of the coupled two-node system, i.e. the
  /// reciprocals of the eigenvalue magnitudes of its state matrix.
  std::pair<double, double> eigen_time_constants() const;

  /// Steady-state rises (absorber, air) above the wall for constant
  /// absorbed power.
  std::pair<double, double> steady_state_rise(double absorbed_power) const;

 private:
  double r_abs_, r_air_, c_abs_, c_air_;
  double tau_abs_, tau_air_;
  double wall_temperature_;
};

/// Closed-form (decoupled) evaluation is allowed below this ratio.
inline constexpr double decoupling_threshold = 1e-2;

/// Builds the lumped network from geometry and materials, evaluating the
/// in-plane conductivity once at `eval_temperature`. Cavity air uses the
/// constant-volume specific heat.
ThermalNetwork derive_network(const PixelGeometry& geometry,
                              const MaterialProperties& absorber,
                              const GasState& gas,
                              double eval_temperature = 300.0);

/// r_abs / r_air. Small values mean heat leaves the absorber mostly through
/// the bridges, so the absorber equation decouples from the air node.
double decoupling_ratio(const ThermalNetwork& network);

inline bool closed_form_admissible(const ThermalNetwork& network) {
  return decoupling_ratio(network) < decoupling_threshold;
}

}  // namespace optopix
