#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "optopix/core_model.hpp"
#include "optopix/mechanics.hpp"
#include "optopix/thermal_sim.hpp"

namespace optopix {

struct PulseTrain {
  double pulse_power = 0.0;     // W incident (P_L)
  double pulse_duration = 0.0;  // s (t_p)
  double gap_duration = 0.0;    // s (t_g)
  int pulse_count = 1;
  double absorbed_fraction = 0.66;

  /// Throws Error{validation, "invalid-train"}.
  void validate() const;

  double period() const { return pulse_duration + gap_duration; }
  double duty_cycle() const { return pulse_duration / period(); }
  double frequency() const { return 1.0 / period(); }
  double duration() const { return pulse_count * period(); }
  double absorbed_power() const { return absorbed_fraction * pulse_power; }
};

/// Absorbed-power drive for the train. Back-to-back pulses (t_g = 0)
/// collapse into one constant segment.
DriveSignal render_pulse_train(const PulseTrain& train);

/// Mean absorbed power, duty * eps * P_L.
double average_absorbed_power(const PulseTrain& train);

/// Thermal + mechanics chain for a pulse train. `duration` defaults to the
/// train's own duration.
TraceSeries simulate_cyclic(const ThermalNetwork& network, const MechanicsContext& mechanics,
                            const PulseTrain& train, double sample_period,
                            std::optional<double> duration = {});

struct CyclicDecomposition {
  TraceSeries slow_component;         // d(t) in the displacement column
  TraceSeries oscillating_component;  // delta(t)
  double first_pulse_amplitude = 0.0; // d_1, m
  double steady_peak_to_peak = 0.0;   // delta_pp, m
  double steady_slow_level = 0.0;     // d, m
};

/// Splits z(t) into a lower envelope through the per-period minima and the
/// residual ripple. Steady figures come from the final 20% of the trace.
/// Throws Error{validation, "insufficient-data"} below three periods.
CyclicDecomposition decompose_cyclic(const TraceSeries& trace, const PulseTrain& train);

/// Reference curves (tau/t_g, 1 - exp(-t_g/tau)).
std::pair<double, double> steady_state_ratios(double tau, double gap_duration);

struct SweepPoint {
  double frequency;       // Hz
  double peak_to_peak;    // m
};

/// Steady ripple amplitude at duty 0.5 for each frequency. Each run covers
/// at least max(20 periods, 10 slow time constants).
std::vector<SweepPoint> frequency_sweep(const ThermalNetwork& network,
                                        const MechanicsContext& mechanics, double incident_power,
                                        const std::vector<double>& frequencies,
                                        double absorbed_fraction = 0.66, unsigned threads = 0);

/// Largest displacement reached by a single pulse of `absorbed_power` and
/// width `pulse_duration`, including the post-pulse overshoot of the air.
double single_pulse_peak(const ThermalNetwork& network, const MechanicsContext& mechanics,
                         double absorbed_power, double pulse_duration, double sample_period);

/// Displacement of an infinitely long pulse.
double asymptotic_displacement(const ThermalNetwork& network, const MechanicsContext& mechanics,
                               double absorbed_power);

struct ScanRate {
  double pulse_duration;       // s, minimal t_p reaching the target
  double pixels_per_second;    // 1 / t_p
};

inline constexpr double scan_rate_sample_period = 10e-6;

/// Minimal single-pulse width (1 us resolution) reaching the target
/// displacement. Throws Error{validation, "infeasible"} when the target is
/// at or above the asymptotic displacement.
ScanRate max_scan_rate(const ThermalNetwork& network, const MechanicsContext& mechanics,
                       double incident_power, double target_displacement,
                       double absorbed_fraction = 0.66);

/// Compliance scale making a single pulse reach `target_displacement` at
/// time `t_eval` (linear in the scale, so one evaluation suffices).
double calibrate_compliance(const ThermalNetwork& network, const MechanicsContext& mechanics,
                            double absorbed_power, double pulse_duration, double t_eval,
                            double target_displacement, double sample_period = 1e-4);

}  // namespace optopix
