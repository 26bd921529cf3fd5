#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "optopix/core_model.hpp"

namespace optopix {

/// Piecewise-constant absorbed power. Power before the first breakpoint
/// and after `duration` is zero.
class DriveSignal {
 public:
  struct Breakpoint {
    double start;  // s
    double power;  // W absorbed
  };

  DriveSignal() = default;
  /// Throws Error{validation, "invalid-drive"} unless breakpoints are
  /// strictly increasing, powers nonnegative and duration >= last start.
  DriveSignal(std::vector<Breakpoint> breakpoints, double duration);

  /// A single rectangular pulse of `power` over [0, width).
  static DriveSignal pulse(double power, double width, double duration);
  static DriveSignal constant(double power, double duration);

  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  double duration() const { return duration_; }

  double power_at(double t) const;
  /// Integral of power over [0, t_end].
  double energy(double t_end) const;
  double energy() const { return energy(duration_); }

 private:
  std::vector<Breakpoint> breakpoints_;
  double duration_ = 0.0;
};

/// Uniformly sampled model state. Mechanics columns are empty until the
/// mechanics chain fills them.
struct TraceSeries {
  double sample_period = 0.0;
  std::vector<double> time;                  // s
  std::vector<double> absorber_temperature;  // K
  std::vector<double> air_temperature;       // K
  std::vector<double> pressure;              // Pa, gauge
  std::vector<double> force;                 // N
  std::vector<double> displacement;          // m

  std::size_t size() const { return time.size(); }
  bool empty() const { return time.empty(); }
  bool has_mechanics() const { return !displacement.empty(); }
};

/// Initial node temperatures; defaults to equilibrium at the wall.
struct InitialState {
  double absorber;
  double air;
};

/// Energy bookkeeping accumulated alongside a coupled run, J.
struct EnergyLedger {
  double absorbed = 0.0;
  double loss_absorber_to_wall = 0.0;
  double loss_air_to_wall = 0.0;
  double stored_absorber = 0.0;  // C_abs * (T_end - T_start)
  double stored_air = 0.0;

  double imbalance() const {
    return absorbed - stored_absorber - stored_air - loss_absorber_to_wall - loss_air_to_wall;
  }
};

struct CoupledRun {
  TraceSeries trace;
  EnergyLedger ledger;
};

struct CoupledOptions {
  /// Upper bound on the internal RK4 step as a fraction of the smallest
  /// network time constant.
  double step_fraction = 1e-2;
  /// Extra refinement; the internal step is divided by this factor.
  int refinement = 1;
};

/// Absorber temperature from the decoupled closed form, chained across
/// drive breakpoints. Throws Error{validation, "domain"} for t < 0 and
/// Error{validation, "mode-not-admissible"} when the network is too
/// strongly coupled for the decoupled form.
double absorber_temperature_closed_form(const ThermalNetwork& network,
                                        const DriveSignal& drive, double t,
                                        std::optional<double> initial_temperature = {});

/// Fixed-step RK4 integration of the coupled absorber/air equations. The
/// step never exceeds min(sample_period, tau_min / 100) and is split so
/// that drive breakpoints fall on step boundaries.
CoupledRun simulate_coupled_detailed(const ThermalNetwork& network, const DriveSignal& drive,
                                     double duration, double sample_period,
                                     std::optional<InitialState> initial = {},
                                     const CoupledOptions& options = {});

TraceSeries simulate_coupled(const ThermalNetwork& network, const DriveSignal& drive,
                             double duration, double sample_period,
                             std::optional<InitialState> initial = {});

/// Air temperature driven by a given absorber trace via the exponential
/// convolution solution, assuming air and wall start at the network wall
/// temperature. O(n) recursive update, exact for a piecewise-linear
/// absorber trace. Returns a copy of the input with the air column replaced.
TraceSeries air_temperature_convolution(const ThermalNetwork& network,
                                        const TraceSeries& absorber_trace);

}  // namespace optopix
