#include "optopix/mechanics.hpp"

#include <cmath>
#include <sstream>

#include "optopix/error.hpp"
#include "optopix/units.hpp"

namespace optopix {

void MembraneModel::validate() const {
  constexpr const char* code = "invalid-membrane";
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << name << " must be strictly positive (got " << v << ")";
      throw validation_error(code, os.str());
    }
  };
  positive(youngs_modulus, "youngs_modulus");
  positive(thickness, "membrane thickness");
  positive(radius, "membrane radius");
  positive(compliance_scale, "compliance_scale");
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5)) {
    throw validation_error(code, "poisson_ratio must lie in [0, 0.5)");
  }
}

MembraneModel MembraneModel::from(const PixelGeometry& geometry,
                                  const MaterialProperties& material, double compliance_scale) {
  if (!material.youngs_modulus || !material.poisson_ratio) {
    throw validation_error("invalid-membrane",
                           "membrane material '" + material.name +
                               "' lacks youngs_modulus/poisson_ratio");
  }
  MembraneModel m;
  m.youngs_modulus = *material.youngs_modulus;
  m.poisson_ratio = *material.poisson_ratio;
  m.thickness = geometry.membrane_thickness;
  m.radius = geometry.cavity_radius;
  m.compliance_scale = compliance_scale;
  m.validate();
  return m;
}

double MembraneModel::compliance() const {
  const double r2 = radius * radius;
  return compliance_scale * (3.0 / 1280.0) * (1.0 - poisson_ratio * poisson_ratio) * r2 * r2 /
         (youngs_modulus * thickness * thickness * thickness);
}

double isometric_pressure(const GasState& gas, double air_temperature) {
  if (!(air_temperature > 0.0)) {
    throw validation_error("domain", "air temperature must be > 0 K");
  }
  return gas.density * gas.specific_gas_constant * air_temperature;
}

double finite_volume_pressure(const GasState& gas, double mean_air_temperature,
                              double initial_volume, double current_volume) {
  if (!(initial_volume > 0.0) || !(current_volume > 0.0)) {
    throw validation_error("domain", "volumes must be > 0");
  }
  if (!(mean_air_temperature > 0.0)) {
    throw validation_error("domain", "air temperature must be > 0 K");
  }
  return gas.ambient_pressure *
         ((mean_air_temperature / gas.ambient_temperature) * (initial_volume / current_volume) -
          1.0);
}

double blocked_force(const PixelGeometry& geometry, double gauge_pressure) {
  return geometry.aperture_area() * gauge_pressure;
}

double membrane_displacement(const MembraneModel& membrane, double gauge_pressure) {
  return membrane.compliance() * gauge_pressure;
}

double air_temperature_from_force(const PixelGeometry& geometry, const GasState& gas,
                                  double force) {
  if (!(force >= 0.0)) throw validation_error("domain", "force must be >= 0");
  const double gauge = force / geometry.aperture_area();
  return gas.ambient_temperature * (1.0 + gauge / gas.ambient_pressure);
}

void MechanicsContext::validate() const {
  geometry.validate();
  gas.validate();
  membrane.validate();
}

MechanicsContext::Sample MechanicsContext::evaluate(double air_temperature) const {
  if (pressure_model == PressureModel::isometric) {
    const double p = isometric_gauge_pressure(gas, air_temperature);
    return {p, blocked_force(geometry, p), membrane_displacement(membrane, p)};
  }
  // Paraboloid-squared deflection sweeps pi r^2 z / 3. Solve
  //   p = P_atm [(T/T_atm) V0 / (V0 + k p) - 1],  k = pi r^2 compliance / 3
  // which is a quadratic in p with one root above -P_atm.
  const double v0 = geometry.cavity_volume();
  const double k = units::pi * membrane.radius * membrane.radius * membrane.compliance() / 3.0;
  const double pa = gas.ambient_pressure;
  const double theta = air_temperature / gas.ambient_temperature;
  // k p^2 + (V0 + k pa) p + pa V0 (1 - theta) = 0
  const double a = k;
  const double b = v0 + k * pa;
  const double c = pa * v0 * (1.0 - theta);
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  // Cancellation-free form of (-b + disc) / 2a.
  const double p = -2.0 * c / (b + disc);
  return {p, blocked_force(geometry, p), membrane_displacement(membrane, p)};
}

void append_mechanics(const MechanicsContext& context, TraceSeries& trace) {
  const std::size_t n = trace.size();
  trace.pressure.resize(n);
  trace.force.resize(n);
  trace.displacement.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = context.evaluate(trace.air_temperature[i]);
    trace.pressure[i] = s.pressure;
    trace.force[i] = s.force;
    trace.displacement[i] = s.displacement;
  }
}

}  // namespace optopix
