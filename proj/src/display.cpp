#include "optopix/display.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "optopix/error.hpp"
#include "optopix/parallel.hpp"

namespace optopix {

void DisplayLayout::validate() const {
  constexpr const char* code = "invalid-layout";
  if (rows < 1 || cols < 1) throw validation_error(code, "layout needs rows, cols >= 1");
  if (!(pitch > 0.0) || !std::isfinite(pitch)) throw validation_error(code, "pitch must be > 0");
  if (!active_mask.empty() && active_mask.size() != cell_count()) {
    std::ostringstream os;
    os << "active mask has " << active_mask.size() << " entries, layout has " << cell_count()
       << " cells";
    throw validation_error(code, os.str());
  }
}

void DisplayLayout::validate(const PixelGeometry& geometry) const {
  validate();
  if (!(pitch > 2.0 * geometry.cavity_radius)) {
    std::ostringstream os;
    os << "pitch " << pitch << " m does not clear the cavity diameter "
       << 2.0 * geometry.cavity_radius << " m";
    throw validation_error("invalid-layout", os.str());
  }
}

bool DisplayLayout::is_active(std::size_t cell) const {
  if (cell >= cell_count()) return false;
  return active_mask.empty() || active_mask[cell];
}

std::vector<std::size_t> DisplayLayout::active_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cell_count(); ++c) {
    if (is_active(c)) out.push_back(c);
  }
  return out;
}

DisplayLayout DisplayLayout::rectangular(int rows, int cols, double pitch) {
  DisplayLayout l;
  l.rows = rows;
  l.cols = cols;
  l.pitch = pitch;
  l.validate();
  return l;
}

DisplayLayout DisplayLayout::perceptual_437() {
  DisplayLayout l = rectangular(21, 21, 3.6e-3);
  l.active_mask.assign(l.cell_count(), true);
  for (int r : {0, 20}) {
    for (int c : {0, 20}) l.active_mask[l.index(r, c)] = false;
  }
  return l;
}

double TactilePattern::last_event_end() const {
  double end = 0.0;
  for (const auto& e : events) {
    const double tail = e.train.gap_duration == 0.0
                            ? e.train.duration()
                            : e.train.duration() - e.train.gap_duration;
    end = std::max(end, e.start + tail);
  }
  return end;
}

void TactilePattern::validate(const DisplayLayout& layout) const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (!layout.is_active(e.pixel)) {
      std::ostringstream os;
      os << "event " << i << " targets pixel " << e.pixel
         << (e.pixel < layout.cell_count() ? ", which is masked off" : ", outside the layout");
      throw validation_error("unknown-pixel", os.str());
    }
    if (!(e.start >= 0.0) || !std::isfinite(e.start)) {
      throw validation_error("invalid-pattern", "event start times must be >= 0");
    }
    e.train.validate();
  }
  if (total_duration + 1e-12 < last_event_end()) {
    throw validation_error("invalid-pattern", "total_duration ends before the last event");
  }
}

double ScanSchedule::absorbed_energy() const {
  double e = 0.0;
  for (const auto& iv : intervals) e += iv.absorbed_power() * (iv.off - iv.on);
  return e;
}

namespace {

std::string describe(const ScanSchedule::Interval& iv) {
  std::ostringstream os;
  os << "event " << iv.event << " (pixel " << iv.pixel << ", [" << iv.on << ", " << iv.off
     << "] s)";
  return os.str();
}

}  // namespace

ScanSchedule compile_pattern(const DisplayLayout& layout, const TactilePattern& pattern,
                             bool single_beam, double dead_time) {
  layout.validate();
  pattern.validate(layout);
  if (!(dead_time >= 0.0)) throw validation_error("invalid-pattern", "dead time must be >= 0");

  ScanSchedule s;
  s.single_beam = single_beam;
  s.dead_time = dead_time;
  s.duration = pattern.total_duration;
  for (std::size_t i = 0; i < pattern.events.size(); ++i) {
    const auto& e = pattern.events[i];
    const auto& tr = e.train;
    auto push = [&](double on, double off) {
      s.intervals.push_back({e.pixel, on, off, tr.pulse_power, tr.absorbed_fraction, i});
    };
    if (tr.gap_duration == 0.0) {
      push(e.start, e.start + tr.duration());
    } else {
      for (int k = 0; k < tr.pulse_count; ++k) {
        const double on = e.start + k * tr.period();
        push(on, on + tr.pulse_duration);
      }
    }
  }
  std::stable_sort(s.intervals.begin(), s.intervals.end(),
                   [](const auto& a, const auto& b) { return a.on < b.on; });

  if (single_beam && !s.intervals.empty()) {
    std::size_t latest = 0;
    for (std::size_t i = 1; i < s.intervals.size(); ++i) {
      const auto& prev = s.intervals[latest];
      const auto& cur = s.intervals[i];
      const double clearance = cur.pixel == prev.pixel ? 0.0 : dead_time;
      if (cur.on < prev.off + clearance - 1e-12) {
        std::ostringstream os;
        os << "single-beam conflict: " << describe(prev) << " and " << describe(cur);
        if (cur.on >= prev.off) os << " are closer than the " << dead_time << " s retarget time";
        throw Error(ErrorKind::schedule, "schedule-conflict", os.str());
      }
      if (cur.off >= prev.off) latest = i;
    }
  }
  return s;
}

DriveSignal pixel_drive(const ScanSchedule& schedule, std::size_t pixel, double duration) {
  std::vector<const ScanSchedule::Interval*> mine;
  std::vector<double> times;
  for (const auto& iv : schedule.intervals) {
    if (iv.pixel != pixel) continue;
    mine.push_back(&iv);
    times.push_back(iv.on);
    times.push_back(iv.off);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<DriveSignal::Breakpoint> bps;
  for (double t : times) {
    double p = 0.0;
    for (const auto* iv : mine) {
      if (iv->on <= t && t < iv->off) p += iv->absorbed_power();
    }
    if (!bps.empty() && bps.back().power == p) continue;
    if (bps.empty() && p == 0.0) continue;
    bps.push_back({t, p});
  }
  const double end = times.empty() ? duration : std::max(duration, times.back());
  return DriveSignal(std::move(bps), end);
}

DisplayRun simulate_display(const DisplayLayout& layout, const ScanSchedule& schedule,
                            const PixelModel& model, double sample_period,
                            const DisplaySimOptions& options) {
  layout.validate(model.mechanics.geometry);
  const double duration = options.duration.value_or(schedule.duration);
  if (!(sample_period > 0.0) || !(duration >= sample_period)) {
    throw validation_error("domain", "display simulation needs duration >= sample_period > 0");
  }
  for (const auto& iv : schedule.intervals) {
    if (!layout.is_active(iv.pixel)) {
      std::ostringstream os;
      os << "schedule references inactive pixel " << iv.pixel;
      throw validation_error("unknown-pixel", os.str());
    }
  }

  DisplayRun run;
  run.pixels = layout.active_cells();
  const std::size_t m = run.pixels.size();

  std::vector<std::size_t> order = options.evaluation_order;
  if (order.empty()) {
    order.resize(m);
    std::iota(order.begin(), order.end(), 0);
  } else {
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i) {
      if (check.size() != m || check[i] != i) {
        throw validation_error("domain", "evaluation_order is not a permutation of the pixels");
      }
    }
  }

  std::vector<bool> scheduled(layout.cell_count(), false);
  for (const auto& iv : schedule.intervals) scheduled[iv.pixel] = true;

  const auto n = static_cast<std::size_t>(std::floor(duration / sample_period + 1e-9)) + 1;
  std::vector<std::vector<double>> z(m), f(m);
  std::vector<double> absorbed(m, 0.0);
  const auto rest = model.mechanics.evaluate(model.network.wall_temperature());

  parallel_for(
      m,
      [&](std::size_t i) {
        const std::size_t slot = order[i];
        const std::size_t cell = run.pixels[slot];
        if (!scheduled[cell]) {
          z[slot].assign(n, rest.displacement);
          if (options.include_force) f[slot].assign(n, rest.force);
          return;
        }
        const DriveSignal drive = pixel_drive(schedule, cell, duration);
        CoupledRun cr = simulate_coupled_detailed(model.network, drive, duration, sample_period);
        append_mechanics(model.mechanics, cr.trace);
        z[slot] = std::move(cr.trace.displacement);
        if (options.include_force) f[slot] = std::move(cr.trace.force);
        absorbed[slot] = cr.ledger.absorbed;
      },
      options.threads);

  run.frames.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    FieldFrame& fr = run.frames[k];
    fr.timestamp = static_cast<double>(k) * sample_period;
    fr.displacement.resize(m);
    for (std::size_t s = 0; s < m; ++s) fr.displacement[s] = z[s][k];
    if (options.include_force) {
      fr.force.resize(m);
      for (std::size_t s = 0; s < m; ++s) fr.force[s] = f[s][k];
    }
  }
  for (double a : absorbed) run.absorbed_energy += a;
  return run;
}

}  // namespace optopix
