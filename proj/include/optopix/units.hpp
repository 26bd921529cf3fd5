#pragma once

// Everything inside the library is SI (s, m, K, W, J, Pa). These helpers
// exist for I/O boundaries only.

namespace optopix::units {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double zero_celsius = 273.15;

constexpr double mm(double v) { return v * 1e-3; }
constexpr double um(double v) { return v * 1e-6; }
constexpr double ms(double v) { return v * 1e-3; }
constexpr double uJ_per_K(double v) { return v * 1e-6; }
constexpr double kPa(double v) { return v * 1e3; }
constexpr double mN(double v) { return v * 1e-3; }
constexpr double uL(double v) { return v * 1e-9; }

constexpr double to_mm(double m) { return m * 1e3; }
constexpr double to_um(double m) { return m * 1e6; }
constexpr double to_ms(double s) { return s * 1e3; }
constexpr double to_uJ_per_K(double j_per_k) { return j_per_k * 1e6; }
constexpr double to_mN(double n) { return n * 1e3; }

constexpr double celsius_to_kelvin(double c) { return c + zero_celsius; }
constexpr double kelvin_to_celsius(double k) { return k - zero_celsius; }

}  // namespace optopix::units
