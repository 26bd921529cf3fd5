#include "optopix/thermal_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "optopix/error.hpp"

namespace optopix {

DriveSignal::DriveSignal(std::vector<Breakpoint> breakpoints, double duration)
    : breakpoints_(std::move(breakpoints)), duration_(duration) {
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto& b = breakpoints_[i];
    if (!std::isfinite(b.start) || b.start < 0.0) {
      throw validation_error("invalid-drive", "breakpoint times must be finite and >= 0");
    }
    if (!(b.power >= 0.0) || !std::isfinite(b.power)) {
      throw validation_error("invalid-drive", "drive power must be finite and >= 0");
    }
    if (i > 0 && !(b.start > breakpoints_[i - 1].start)) {
      throw validation_error("invalid-drive", "breakpoints must be strictly increasing");
    }
  }
  if (!std::isfinite(duration_) || duration_ < 0.0 ||
      (!breakpoints_.empty() && duration_ < breakpoints_.back().start)) {
    throw validation_error("invalid-drive", "duration must cover the last breakpoint");
  }
}

DriveSignal DriveSignal::pulse(double power, double width, double duration) {
  if (!(width > 0.0)) throw validation_error("invalid-drive", "pulse width must be > 0");
  std::vector<Breakpoint> bps{{0.0, power}};
  if (width < duration) bps.push_back({width, 0.0});
  return DriveSignal(std::move(bps), std::max(duration, width));
}

DriveSignal DriveSignal::constant(double power, double duration) {
  return DriveSignal({{0.0, power}}, duration);
}

double DriveSignal::power_at(double t) const {
  if (t < 0.0 || t >= duration_ || breakpoints_.empty()) return 0.0;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                             [](double value, const Breakpoint& b) { return value < b.start; });
  if (it == breakpoints_.begin()) return 0.0;
  return std::prev(it)->power;
}

double DriveSignal::energy(double t_end) const {
  const double end = std::min(t_end, duration_);
  double total = 0.0;
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double a = breakpoints_[i].start;
    if (a >= end) break;
    const double b = (i + 1 < breakpoints_.size()) ? std::min(breakpoints_[i + 1].start, end) : end;
    total += breakpoints_[i].power * (b - a);
  }
  return total;
}

namespace {

// Power change events: (time, power from this time on).
std::vector<DriveSignal::Breakpoint> drive_events(const DriveSignal& drive) {
  std::vector<DriveSignal::Breakpoint> events = drive.breakpoints();
  if (events.empty() || drive.duration() > events.back().start) {
    events.push_back({drive.duration(), 0.0});
  } else {
    events.back().power = 0.0;  // zero-width final segment
  }
  return events;
}

double one_minus_exp_neg(double x) { return -std::expm1(-x); }

// 1 - e^{-x}(1 + x), accurate for small x.
double first_moment_factor(double x) {
  if (x < 0.1) {
    double term = x;  // x^k / k!, starting at k = 1
    double sum = 0.0;
    for (int k = 2; k < 14; ++k) {
      term *= -x / k;
      sum += (k - 1) * term;
    }
    return sum;
  }
  return one_minus_exp_neg(x) - x * std::exp(-x);
}

}  // namespace

double absorber_temperature_closed_form(const ThermalNetwork& network, const DriveSignal& drive,
                                        double t, std::optional<double> initial_temperature) {
  if (!(t >= 0.0)) throw validation_error("domain", "closed-form evaluation requires t >= 0");
  const double ratio = decoupling_ratio(network);
  if (!(ratio < decoupling_threshold)) {
    std::ostringstream os;
    os << "decoupling ratio " << ratio << " exceeds " << decoupling_threshold
       << "; use the coupled integrator";
    throw validation_error("mode-not-admissible", os.str());
  }
  const double wall = network.wall_temperature();
  const double r = network.r_abs();
  const double tau = network.tau_abs();
  double rise = initial_temperature.value_or(wall) - wall;

  const auto events = drive_events(drive);
  double now = 0.0;
  double power = 0.0;
  for (const auto& e : events) {
    if (e.start >= t) break;
    if (e.start > now) {
      const double decay = std::exp(-(e.start - now) / tau);
      rise = power * r * one_minus_exp_neg((e.start - now) / tau) + rise * decay;
      now = e.start;
    }
    power = e.power;
  }
  if (t > now) {
    rise = power * r * one_minus_exp_neg((t - now) / tau) + rise * std::exp(-(t - now) / tau);
  }
  return wall + rise;
}

CoupledRun simulate_coupled_detailed(const ThermalNetwork& network, const DriveSignal& drive,
                                     double duration, double sample_period,
                                     std::optional<InitialState> initial,
                                     const CoupledOptions& options) {
  if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
    throw validation_error("domain", "sample_period must be > 0");
  }
  if (!(duration >= sample_period) || !std::isfinite(duration)) {
    throw validation_error("domain", "duration must be >= sample_period");
  }
  if (options.refinement < 1 || !(options.step_fraction > 0.0)) {
    throw validation_error("domain", "invalid integrator options");
  }

  const double wall = network.wall_temperature();
  const double r_abs = network.r_abs();
  const double r_air = network.r_air();
  const double c_abs = network.c_abs();
  const double c_air = network.c_air();
  const double tau_min =
      std::min({network.tau_abs(), network.tau_air(), network.eigen_time_constants().first});
  const double h_max = std::min(sample_period, options.step_fraction * tau_min) /
                       static_cast<double>(options.refinement);

  // State in rises above the wall: absorber, air, and the two integrated
  // wall losses.
  using State = std::array<double, 4>;
  const InitialState init = initial.value_or(InitialState{wall, wall});
  State y{init.absorber - wall, init.air - wall, 0.0, 0.0};
  const State y0 = y;

  auto rhs = [&](const State& s, double p) {
    const double to_air = (s[0] - s[1]) / r_air;
    const double abs_loss = s[0] / r_abs;
    const double air_loss = s[1] / r_air;
    return State{(p - to_air - abs_loss) / c_abs, (to_air - air_loss) / c_air, abs_loss, air_loss};
  };

  auto rk4 = [&](State& s, double p, double h) {
    const State k1 = rhs(s, p);
    State tmp;
    for (int i = 0; i < 4; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
    const State k2 = rhs(tmp, p);
    for (int i = 0; i < 4; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
    const State k3 = rhs(tmp, p);
    for (int i = 0; i < 4; ++i) tmp[i] = s[i] + h * k3[i];
    const State k4 = rhs(tmp, p);
    for (int i = 0; i < 4; ++i) s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  const auto events = drive_events(drive);
  std::size_t next_event = 0;
  double power = 0.0;
  auto advance_events = [&](double t) {
    while (next_event < events.size() && events[next_event].start <= t) {
      power = events[next_event].power;
      ++next_event;
    }
  };

  const auto n_samples = static_cast<std::size_t>(std::floor(duration / sample_period + 1e-9)) + 1;
  CoupledRun run;
  TraceSeries& trace = run.trace;
  trace.sample_period = sample_period;
  trace.time.resize(n_samples);
  trace.absorber_temperature.resize(n_samples);
  trace.air_temperature.resize(n_samples);

  double absorbed = 0.0;
  double t = 0.0;
  advance_events(0.0);
  trace.time[0] = 0.0;
  trace.absorber_temperature[0] = wall + y[0];
  trace.air_temperature[0] = wall + y[1];

  for (std::size_t k = 1; k < n_samples; ++k) {
    const double t_target = static_cast<double>(k) * sample_period;
    while (t < t_target) {
      double seg_end = t_target;
      if (next_event < events.size() && events[next_event].start < seg_end) {
        seg_end = events[next_event].start;
      }
      const double span = seg_end - t;
      if (span > 0.0) {
        const auto steps =
            std::max<long>(1, static_cast<long>(std::ceil(span / h_max - 1e-9)));
        const double h = span / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) rk4(y, power, h);
        absorbed += power * span;
      }
      t = seg_end;
      advance_events(t);
      if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
        std::ostringstream os;
        os << "non-finite state during integration at t = " << t << " s";
        throw numerical_error("instability", os.str());
      }
    }
    trace.time[k] = t_target;
    trace.absorber_temperature[k] = wall + y[0];
    trace.air_temperature[k] = wall + y[1];
  }

  run.ledger.absorbed = absorbed;
  run.ledger.loss_absorber_to_wall = y[2];
  run.ledger.loss_air_to_wall = y[3];
  run.ledger.stored_absorber = c_abs * (y[0] - y0[0]);
  run.ledger.stored_air = c_air * (y[1] - y0[1]);
  return run;
}

TraceSeries simulate_coupled(const ThermalNetwork& network, const DriveSignal& drive,
                             double duration, double sample_period,
                             std::optional<InitialState> initial) {
  return simulate_coupled_detailed(network, drive, duration, sample_period, initial).trace;
}

TraceSeries air_temperature_convolution(const ThermalNetwork& network,
                                        const TraceSeries& absorber_trace) {
  if (absorber_trace.empty()) {
    throw validation_error("domain", "absorber trace is empty");
  }
  const std::size_t n = absorber_trace.size();
  if (absorber_trace.absorber_temperature.size() != n) {
    throw validation_error("domain", "absorber trace columns have mismatched lengths");
  }
  const double h = absorber_trace.sample_period;
  if (n > 1) {
    if (!(h > 0.0)) throw validation_error("domain", "trace sample_period must be > 0");
    for (std::size_t i = 1; i < n; ++i) {
      const double dt = absorber_trace.time[i] - absorber_trace.time[i - 1];
      if (std::abs(dt - h) > 1e-6 * h) {
        throw validation_error("domain", "absorber trace is not uniformly sampled");
      }
    }
  }

  const double t0 = network.wall_temperature();
  const double tau = network.tau_air();
  const double lambda = 2.0 / tau;
  const double x = lambda * h;
  const double decay = std::exp(-x);
  // Exact kernel integrals against the linear interpolant on one step.
  const double w_prev = n > 1 ? first_moment_factor(x) / (lambda * lambda * h) : 0.0;
  const double w_curr = n > 1 ? one_minus_exp_neg(x) / lambda - w_prev : 0.0;

  TraceSeries out = absorber_trace;
  out.air_temperature.assign(n, t0);
  double integral = 0.0;  // of (T_abs - T0) against the kernel
  for (std::size_t i = 1; i < n; ++i) {
    const double prev = absorber_trace.absorber_temperature[i - 1] - t0;
    const double curr = absorber_trace.absorber_temperature[i] - t0;
    integral = decay * integral + w_prev * prev + w_curr * curr;
    out.air_temperature[i] = t0 + integral / tau;
  }
  return out;
}

}  // namespace optopix
