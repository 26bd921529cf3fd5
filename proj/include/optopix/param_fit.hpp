#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optopix/error.hpp"
#include "optopix/thermal_sim.hpp"

namespace optopix {

struct FitParameter {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  std::string unit;
};

struct FitResult {
  std::vector<FitParameter> parameters;
  double r_squared = 0.0;
  double residual_rms = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<std::uint64_t> seed;  // set by synthetic studies
  std::optional<double> window;       // s, for fit_rc

  /// Throws std::out_of_range for an unknown name.
  const FitParameter& parameter(const std::string& name) const;
  double value(const std::string& name) const { return parameter(name).value; }
};

/// Non-convergence; carries the last iterate.
class FitError : public Error {
 public:
  FitError(const std::string& message, FitResult last)
      : Error(ErrorKind::numerical, "non-convergence", message), last_(std::move(last)) {}
  const FitResult& last_iterate() const { return last_; }

 private:
  FitResult last_;
};

struct RcFitOptions {
  double window = 30e-3;  // s from onset
  double onset = 0.0;     // s, pulse start within the trace
  /// Temperature before heating. Defaults to the sample at onset.
  std::optional<double> baseline;
  int max_iterations = 100;
  double step_tolerance = 1e-8;
};

/// Fits dT = P R (1 - exp(-t/tau)) to the absorber column over the window.
/// Parameters "R" (K/W), "tau" (s) and derived "C" (J/K).
FitResult fit_rc(const TraceSeries& trace, double absorbed_power,
                 const RcFitOptions& options = {});

/// R = a / w through the origin. Parameter "a" (K m / W).
FitResult fit_bridge_law(std::vector<std::pair<double, double>> width_resistance);

enum class RatioModel { exponential, hyperbolic };

/// One-parameter fit of ratio(t_g) = 1 - exp(-t_g/tau) or tau / t_g.
/// Parameter "tau" (s).
FitResult fit_cyclic_ratios(std::vector<std::pair<double, double>> gap_ratio, RatioModel model);

/// 1 - SS_res / SS_tot, single pass over the data.
double r_squared(const std::vector<double>& observed, const std::vector<double>& predicted);

/// Noise-free absorber trace from the decoupled step response, starting at
/// the wall temperature, with the pulse switched on at t = 0.
TraceSeries synthetic_rc_trace(double r, double c, double absorbed_power, double duration,
                               double sample_period, double wall_temperature = 300.0);

/// Adds N(0, sigma) to the absorber column using a seeded generator.
void add_gaussian_noise(TraceSeries& trace, double sigma, std::uint64_t seed);

}  // namespace optopix
