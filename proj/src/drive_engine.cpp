#include "optopix/drive_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optopix/error.hpp"
#include "optopix/parallel.hpp"

namespace optopix {

void PulseTrain::validate() const {
  constexpr const char* code = "invalid-train";
  if (!(pulse_duration > 0.0) || !std::isfinite(pulse_duration)) {
    throw validation_error(code, "pulse_duration must be > 0");
  }
  if (!(gap_duration >= 0.0) || !std::isfinite(gap_duration)) {
    throw validation_error(code, "gap_duration must be >= 0");
  }
  if (pulse_count < 1) throw validation_error(code, "pulse_count must be >= 1");
  if (!(pulse_power >= 0.0) || !std::isfinite(pulse_power)) {
    throw validation_error(code, "pulse_power must be >= 0");
  }
  if (!(absorbed_fraction > 0.0 && absorbed_fraction <= 1.0)) {
    throw validation_error(code, "absorbed_fraction must lie in (0, 1]");
  }
}

DriveSignal render_pulse_train(const PulseTrain& train) {
  train.validate();
  const double p = train.absorbed_power();
  const double period = train.period();
  std::vector<DriveSignal::Breakpoint> bps;
  if (train.gap_duration == 0.0) {
    bps.push_back({0.0, p});
  } else {
    bps.reserve(2 * static_cast<std::size_t>(train.pulse_count));
    for (int k = 0; k < train.pulse_count; ++k) {
      const double start = k * period;
      bps.push_back({start, p});
      bps.push_back({start + train.pulse_duration, 0.0});
    }
  }
  return DriveSignal(std::move(bps), train.duration());
}

double average_absorbed_power(const PulseTrain& train) {
  train.validate();
  return train.duty_cycle() * train.absorbed_fraction * train.pulse_power;
}

TraceSeries simulate_cyclic(const ThermalNetwork& network, const MechanicsContext& mechanics,
                            const PulseTrain& train, double sample_period,
                            std::optional<double> duration) {
  const DriveSignal drive = render_pulse_train(train);
  TraceSeries trace =
      simulate_coupled(network, drive, duration.value_or(train.duration()), sample_period);
  append_mechanics(mechanics, trace);
  return trace;
}

CyclicDecomposition decompose_cyclic(const TraceSeries& trace, const PulseTrain& train) {
  train.validate();
  if (!trace.has_mechanics()) {
    throw validation_error("insufficient-data", "trace has no displacement column");
  }
  const std::size_t n = trace.size();
  const double period = train.period();
  const double t0 = trace.time.front();
  const double span = trace.time.back() - t0;
  if (n < 2 || span + 1e-12 < 3.0 * period) {
    std::ostringstream os;
    os << "trace spans " << span << " s, need at least three periods (" << 3.0 * period
       << " s)";
    throw validation_error("insufficient-data", os.str());
  }
  const auto& z = trace.displacement;

  // Minimum of each period, anchored where it occurs.
  std::vector<std::pair<double, double>> anchors;
  std::size_t i = 0;
  while (i < n) {
    const auto k = std::floor((trace.time[i] - t0) / period + 1e-9);
    const double period_end = t0 + (k + 1.0) * period;
    std::size_t best = i;
    std::size_t j = i;
    while (j < n && trace.time[j] < period_end - 1e-9 * period) {
      if (z[j] < z[best]) best = j;
      ++j;
    }
    anchors.emplace_back(trace.time[best], z[best]);
    i = std::max(j, i + 1);
  }

  CyclicDecomposition out;
  out.slow_component = trace;
  out.oscillating_component = trace;
  auto& slow = out.slow_component.displacement;
  auto& osc = out.oscillating_component.displacement;
  std::size_t a = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const double t = trace.time[s];
    double d;
    if (t <= anchors.front().first) {
      d = anchors.front().second;
    } else if (t >= anchors.back().first) {
      d = anchors.back().second;
    } else {
      while (a + 1 < anchors.size() && anchors[a + 1].first < t) ++a;
      const auto& [ta, za] = anchors[a];
      const auto& [tb, zb] = anchors[a + 1];
      d = za + (zb - za) * (t - ta) / (tb - ta);
    }
    slow[s] = d;
    osc[s] = z[s] - d;
  }

  const double first_end = t0 + period;
  double d1 = z.front();
  for (std::size_t s = 0; s < n && trace.time[s] <= first_end + 1e-9 * period; ++s) {
    d1 = std::max(d1, z[s]);
  }
  out.first_pulse_amplitude = d1 - z.front();

  const double steady_from = trace.time.back() - 0.2 * span;
  double lo = 0.0, hi = 0.0, sum = 0.0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (trace.time[s] < steady_from) continue;
    if (count == 0) lo = hi = osc[s];
    lo = std::min(lo, osc[s]);
    hi = std::max(hi, osc[s]);
    sum += slow[s];
    ++count;
  }
  out.steady_peak_to_peak = hi - lo;
  out.steady_slow_level = sum / static_cast<double>(count) - z.front();
  return out;
}

std::pair<double, double> steady_state_ratios(double tau, double gap_duration) {
  if (!(tau > 0.0) || !(gap_duration > 0.0)) {
    throw validation_error("domain", "tau and gap_duration must be > 0");
  }
  return {tau / gap_duration, -std::expm1(-gap_duration / tau)};
}

std::vector<SweepPoint> frequency_sweep(const ThermalNetwork& network,
                                        const MechanicsContext& mechanics, double incident_power,
                                        const std::vector<double>& frequencies,
                                        double absorbed_fraction, unsigned threads) {
  for (double f : frequencies) {
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw validation_error("invalid-range", "frequencies must be positive");
    }
  }
  const double tau_slow = network.eigen_time_constants().second;
  std::vector<SweepPoint> out(frequencies.size());
  parallel_for(
      frequencies.size(),
      [&](std::size_t i) {
        const double period = 1.0 / frequencies[i];
        PulseTrain train;
        train.pulse_power = incident_power;
        train.pulse_duration = 0.5 * period;
        train.gap_duration = 0.5 * period;
        train.absorbed_fraction = absorbed_fraction;
        train.pulse_count =
            std::max(20, static_cast<int>(std::ceil(10.0 * tau_slow / period)));
        const TraceSeries trace = simulate_cyclic(network, mechanics, train, period / 100.0);
        out[i] = {frequencies[i], decompose_cyclic(trace, train).steady_peak_to_peak};
      },
      threads);
  return out;
}

double single_pulse_peak(const ThermalNetwork& network, const MechanicsContext& mechanics,
                         double absorbed_power, double pulse_duration, double sample_period) {
  const DriveSignal drive = DriveSignal::pulse(absorbed_power, pulse_duration, pulse_duration);
  double tail = network.eigen_time_constants().second;
  for (int attempt = 0;; ++attempt) {
    TraceSeries trace =
        simulate_coupled(network, drive, pulse_duration + tail, sample_period);
    append_mechanics(mechanics, trace);
    const auto it = std::max_element(trace.displacement.begin(), trace.displacement.end());
    // A maximum on the last sample means the overshoot was cut short.
    if (std::next(it) != trace.displacement.end() || attempt == 4) return *it;
    tail *= 2.0;
  }
}

double asymptotic_displacement(const ThermalNetwork& network, const MechanicsContext& mechanics,
                               double absorbed_power) {
  const double air_rise = network.steady_state_rise(absorbed_power).second;
  return mechanics.evaluate(network.wall_temperature() + air_rise).displacement;
}

ScanRate max_scan_rate(const ThermalNetwork& network, const MechanicsContext& mechanics,
                       double incident_power, double target_displacement,
                       double absorbed_fraction) {
  if (!(target_displacement > 0.0)) {
    throw validation_error("domain", "target displacement must be > 0");
  }
  const double p = incident_power * absorbed_fraction;
  const double z_max = asymptotic_displacement(network, mechanics, p);
  if (!(target_displacement < z_max)) {
    std::ostringstream os;
    os << "target " << target_displacement << " m unreachable at " << incident_power
       << " W; asymptotic displacement is " << z_max << " m";
    throw validation_error("infeasible", os.str());
  }
  constexpr double us = 1e-6;
  auto reaches = [&](long k) {
    return single_pulse_peak(network, mechanics, p, static_cast<double>(k) * us,
                             scan_rate_sample_period) >= target_displacement;
  };
  long lo = 0;
  long hi = 1000;
  while (!reaches(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 1000L * 1000L * 1000L) {
      throw validation_error("infeasible", "target not reached within 1000 s pulses");
    }
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (reaches(mid) ? hi : lo) = mid;
  }
  const double t_p = static_cast<double>(hi) * us;
  return {t_p, 1.0 / t_p};
}

double calibrate_compliance(const ThermalNetwork& network, const MechanicsContext& mechanics,
                            double absorbed_power, double pulse_duration, double t_eval,
                            double target_displacement, double sample_period) {
  if (!(target_displacement > 0.0) || !(t_eval > 0.0)) {
    throw validation_error("domain", "calibration target and time must be > 0");
  }
  MechanicsContext unit = mechanics;
  unit.membrane.compliance_scale = 1.0;
  const DriveSignal drive =
      DriveSignal::pulse(absorbed_power, pulse_duration, std::max(pulse_duration, t_eval));
  TraceSeries trace = simulate_coupled(network, drive, t_eval, sample_period);
  append_mechanics(unit, trace);
  const auto k = static_cast<std::size_t>(std::llround(t_eval / sample_period));
  const double z = trace.displacement.at(std::min(k, trace.size() - 1));
  if (!(z > 0.0)) {
    throw numerical_error("calibration", "uncalibrated displacement is not positive");
  }
  return target_displacement / z;
}

}  // namespace optopix
