#include "optopix/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optopix/error.hpp"
#include "optopix/units.hpp"

namespace optopix {

namespace {

void require_positive(double v, const char* name, const char* code) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be strictly positive and finite (got " << v << ")";
    throw validation_error(code, os.str());
  }
}

}  // namespace

void PixelGeometry::validate() const {
  constexpr const char* code = "invalid-geometry";
  require_positive(cavity_radius, "cavity_radius", code);
  require_positive(cavity_height, "cavity_height", code);
  require_positive(bridge_width, "bridge_width", code);
  require_positive(bridge_length, "bridge_length", code);
  require_positive(absorber_area, "absorber_area", code);
  require_positive(absorber_thickness, "absorber_thickness", code);
  require_positive(membrane_thickness, "membrane_thickness", code);
  if (bridge_width > cavity_radius) {
    throw validation_error(code, "bridge_width exceeds cavity_radius");
  }
  // Absorber must fit inside the pixel footprint bounded by the wall frame.
  if (absorber_area > 4.0 * units::pi * cavity_radius * cavity_radius) {
    throw validation_error(code, "absorber_area exceeds the pixel footprint");
  }
}

double PixelGeometry::aperture_area() const {
  return units::pi * cavity_radius * cavity_radius;
}

double PixelGeometry::cavity_volume() const { return aperture_area() * cavity_height; }

double PixelGeometry::absorber_volume() const { return absorber_area * absorber_thickness; }

double ConductivityModel::at(double temperature) const {
  if (!(temperature >= min_temperature && temperature <= max_temperature)) {
    std::ostringstream os;
    os << "temperature " << temperature << " K outside conductivity validity range ["
       << min_temperature << ", " << max_temperature << "] K";
    throw validation_error("out-of-range", os.str());
  }
  switch (kind_) {
    case Kind::constant:
      return coefficient_;
    case Kind::inverse_temperature:
      return coefficient_ / temperature;
  }
  return coefficient_;
}

void MaterialProperties::validate() const {
  constexpr const char* code = "invalid-material";
  require_positive(specific_heat, "specific_heat", code);
  require_positive(density, "density", code);
  // Both model kinds are monotone in T, so checking the range ends suffices.
  if (!(thermal_conductivity_in_plane.coefficient() > 0.0)) {
    throw validation_error(code, "in-plane conductivity must be positive");
  }
  if (thermal_conductivity_cross_plane < 0.0) {
    throw validation_error(code, "cross-plane conductivity must be nonnegative");
  }
  if (youngs_modulus) require_positive(*youngs_modulus, "youngs_modulus", code);
  if (poisson_ratio && !(*poisson_ratio >= 0.0 && *poisson_ratio < 0.5)) {
    throw validation_error(code, "poisson_ratio must lie in [0, 0.5)");
  }
}

MaterialProperties MaterialProperties::pgs() {
  MaterialProperties m;
  m.name = "pgs";
  m.specific_heat = 850.0;
  m.density = 1962.0;
  m.thermal_conductivity_in_plane = ConductivityModel::inverse_temperature(3.6e5);
  m.thermal_conductivity_cross_plane = 15.0;
  return m;
}

MaterialProperties MaterialProperties::ecoflex0010() {
  MaterialProperties m;
  m.name = "ecoflex0010";
  m.specific_heat = 1000.0;
  m.density = 1060.0;
  m.thermal_conductivity_in_plane = ConductivityModel::constant(29.0);
  m.thermal_conductivity_cross_plane = 29.0;
  m.youngs_modulus = 50e3;
  m.poisson_ratio = 0.49;
  return m;
}

void GasState::validate() const {
  constexpr const char* code = "invalid-gas";
  require_positive(ambient_pressure, "ambient_pressure", code);
  require_positive(ambient_temperature, "ambient_temperature", code);
  require_positive(specific_gas_constant, "specific_gas_constant", code);
  require_positive(density, "density", code);
  require_positive(thermal_conductivity, "thermal_conductivity", code);
  require_positive(specific_heat_cv, "specific_heat_cv", code);
  require_positive(specific_heat_cp, "specific_heat_cp", code);
  const double p = density * specific_gas_constant * ambient_temperature;
  if (std::abs(p - ambient_pressure) > consistency_tolerance * ambient_pressure) {
    std::ostringstream os;
    os << "gas state violates ideal-gas consistency: rho*R_s*T = " << p
       << " Pa vs ambient_pressure = " << ambient_pressure << " Pa";
    throw validation_error(code, os.str());
  }
}

GasState GasState::air(double pressure, double temperature) {
  GasState g;
  g.ambient_pressure = pressure;
  g.ambient_temperature = temperature;
  g.density = pressure / (g.specific_gas_constant * temperature);
  return g;
}

void OpticalInput::validate() const {
  if (!(incident_power >= 0.0) || !std::isfinite(incident_power)) {
    throw validation_error("invalid-optics", "incident_power must be >= 0");
  }
  if (!(absorbed_fraction > 0.0 && absorbed_fraction <= 1.0)) {
    throw validation_error("invalid-optics", "absorbed_fraction must lie in (0, 1]");
  }
}

ThermalNetwork::ThermalNetwork(double r_abs, double r_air, double c_abs, double c_air,
                               double wall_temperature)
    : r_abs_(r_abs),
      r_air_(r_air),
      c_abs_(c_abs),
      c_air_(c_air),
      tau_abs_(r_abs * c_abs),
      tau_air_(r_air * c_air),
      wall_temperature_(wall_temperature) {
  constexpr const char* code = "invalid-network";
  require_positive(r_abs, "r_abs", code);
  require_positive(r_air, "r_air", code);
  require_positive(c_abs, "c_abs", code);
  require_positive(c_air, "c_air", code);
  require_positive(wall_temperature, "wall_temperature", code);
}

std::pair<double, double> ThermalNetwork::eigen_time_constants() const {
  const double a11 = -(1.0 / r_air_ + 1.0 / r_abs_) / c_abs_;
  const double a12 = 1.0 / (r_air_ * c_abs_);
  const double a21 = 1.0 / (r_air_ * c_air_);
  const double a22 = -2.0 / (r_air_ * c_air_);
  const double tr = a11 + a22;
  const double det = a11 * a22 - a12 * a21;
  // Off-diagonal product is positive, so the discriminant is too.
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double fast = 0.5 * (tr - disc);  // most negative
  // Stable evaluation of the small-magnitude root.
  const double slow = det / fast;
  return {-1.0 / fast, -1.0 / slow};
}

std::pair<double, double> ThermalNetwork::steady_state_rise(double absorbed_power) const {
  const double abs_rise = absorbed_power / (1.0 / r_abs_ + 0.5 / r_air_);
  return {abs_rise, 0.5 * abs_rise};
}

ThermalNetwork derive_network(const PixelGeometry& geometry,
                              const MaterialProperties& absorber, const GasState& gas,
                              double eval_temperature) {
  geometry.validate();
  absorber.validate();
  gas.validate();
  const double k_abs = absorber.thermal_conductivity_in_plane.at(eval_temperature);
  const double r_abs =
      geometry.bridge_length / (k_abs * geometry.bridge_width * geometry.absorber_thickness);
  const double r_air =
      geometry.cavity_height / (gas.thermal_conductivity * geometry.absorber_area);
  const double c_abs = geometry.absorber_volume() * absorber.density * absorber.specific_heat;
  const double c_air = geometry.cavity_volume() * gas.density * gas.specific_heat_cv;
  return ThermalNetwork(r_abs, r_air, c_abs, c_air, gas.ambient_temperature);
}

double decoupling_ratio(const ThermalNetwork& network) {
  return network.r_abs() / network.r_air();
}

}  // namespace optopix
