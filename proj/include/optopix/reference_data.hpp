#pragma once

#include <vector>

// Published measurements the toolkit is checked against. SI units.

namespace optopix::reference {

struct BridgeMeasurement {
  double width;        // m
  double resistance;   // K/W
  double capacity;     // J/K
  double time_constant;  // s, as reported (rounded)
};

/// Absorber-to-wall resistance and heat capacity measured for five bridge
/// widths at 1.63 W absorbed.
const std::vector<BridgeMeasurement>& bridge_measurements();

/// Fitted bridge-law constant a in R = a / w, K m / W.
inline constexpr double bridge_law_constant = 73.3e-3;  // 73.3 mm K/W
inline constexpr double bridge_law_r_squared = 0.98;

/// Mean heat capacity over the five pixels and its spread, J/K.
inline constexpr double mean_capacity = 101e-6;
inline constexpr double capacity_spread = 16e-6;

/// Single-pulse operating point with w = 0.2 mm.
struct OperatingPoint {
  double bridge_width = 0.2e-3;
  double incident_power = 2.47;
  double absorbed_fraction = 0.66;
  double pulse_duration = 50e-3;
  double temperature_rise = 507.0;   // K at the end of the pulse
  double peak_temperature_c = 527.0; // deg C
  double displacement = 0.97e-3;     // m at the end of the pulse
  double blocked_force = 55e-3;      // N, largest measured
  double cavity_volume = 7.8e-9;     // m^3
  double reported_air_rise = 20.5;   // K
};
inline constexpr OperatingPoint operating_point{};

/// Cyclic-stimulation pixel: w = 0.55 mm with tau of about 23 ms.
inline constexpr double cyclic_pixel_tau = 23e-3;

/// Efficiency figures at the operating point (fractions).
inline constexpr double stroke_efficiency = 0.0003;
inline constexpr double heat_to_gas_efficiency = 0.0022;
inline constexpr double thermo_mech_efficiency = 0.143;

/// Sequential scan rates reached at 2.5 W.
inline constexpr double scan_rate_50um = 217.0;   // px/s at 50 um
inline constexpr double scan_rate_400um = 26.5;   // px/s at 400 um

/// Ripple amplitude at 200 Hz, m.
inline constexpr double ripple_200hz = 8.4e-6;

/// Isolated-pulse displacement at w = 0.4 mm, t_p = 8 ms, m.
inline constexpr double isolated_pulse_w040 = 155.2e-6;

}  // namespace optopix::reference
