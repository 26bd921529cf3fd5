#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "optopix/drive_engine.hpp"

namespace optopix {

/// Grid of pixel cells. Cell index = row * cols + col. An empty mask means
/// every cell is active.
struct DisplayLayout {
  int rows = 1;
  int cols = 1;
  double pitch = 4.0e-3;  // m
  std::vector<bool> active_mask;
  std::string pixel_config;  // preset name or path, informational

  /// Throws Error{validation, "invalid-layout"}.
  void validate(const PixelGeometry& geometry) const;
  void validate() const;

  std::size_t cell_count() const { return static_cast<std::size_t>(rows) * cols; }
  bool is_active(std::size_t cell) const;
  std::vector<std::size_t> active_cells() const;
  std::size_t index(int row, int col) const { return static_cast<std::size_t>(row) * cols + col; }
  int row_of(std::size_t cell) const { return static_cast<int>(cell / cols); }
  int col_of(std::size_t cell) const { return static_cast<int>(cell % cols); }

  static DisplayLayout rectangular(int rows, int cols, double pitch);
  /// 21 x 21 grid at 3.6 mm pitch with the four corner cells masked off,
  /// 437 active pixels.
  static DisplayLayout perceptual_437();
};

struct TactilePattern {
  struct Event {
    std::size_t pixel = 0;
    double start = 0.0;  // s
    PulseTrain train;
  };
  std::vector<Event> events;
  double total_duration = 0.0;  // s

  /// Throws Error{validation, ...} for out-of-layout or inactive pixels,
  /// negative start times or a duration shorter than the last event.
  void validate(const DisplayLayout& layout) const;
  /// End of the last illumination, s.
  double last_event_end() const;
};

inline constexpr double default_dead_time = 0.5e-3;

struct ScanSchedule {
  struct Interval {
    std::size_t pixel = 0;
    double on = 0.0;   // s
    double off = 0.0;  // s
    double power = 0.0;  // W incident
    double absorbed_fraction = 0.66;
    std::size_t event = 0;  // source event in the pattern
    double absorbed_power() const { return absorbed_fraction * power; }
  };
  std::vector<Interval> intervals;  // sorted by on time
  bool single_beam = false;
  double dead_time = default_dead_time;
  double duration = 0.0;

  bool empty() const { return intervals.empty(); }
  double absorbed_energy() const;
};

/// Expands every event into illumination intervals. With `single_beam`,
/// any overlap (or a retarget to another pixel inside the dead time) throws
/// Error{schedule, "schedule-conflict"} naming the first conflicting pair.
/// Nothing is reordered.
ScanSchedule compile_pattern(const DisplayLayout& layout, const TactilePattern& pattern,
                             bool single_beam, double dead_time = default_dead_time);

/// Per-pixel model shared by every cell of a layout.
struct PixelModel {
  ThermalNetwork network;
  MechanicsContext mechanics;
};

struct FieldFrame {
  double timestamp = 0.0;
  std::vector<double> displacement;  // one per active pixel, layout order
  std::vector<double> force;         // filled only when requested
};

struct DisplaySimOptions {
  std::optional<double> duration;  // defaults to the schedule duration
  unsigned threads = 0;            // 0 = hardware concurrency
  bool include_force = false;
  /// Optional permutation of 0..m-1 (positions in the active-pixel list,
  /// not cell indices) giving the order in which pixels are simulated.
  /// Does not affect the output.
  std::vector<std::size_t> evaluation_order;
};

struct DisplayRun {
  std::vector<std::size_t> pixels;  // active cells, column order of the frames
  std::vector<FieldFrame> frames;
  double absorbed_energy = 0.0;  // J, from the integrator
};

/// Drive seen by one pixel: the sum of its intervals' absorbed power.
DriveSignal pixel_drive(const ScanSchedule& schedule, std::size_t pixel, double duration);

DisplayRun simulate_display(const DisplayLayout& layout, const ScanSchedule& schedule,
                            const PixelModel& model, double sample_period,
                            const DisplaySimOptions& options = {});

// Built-in perceptual stimuli, centred on the layout.

enum class Direction { left, right, up, down };
enum class Rotation { clockwise, counterclockwise };
enum class TemporalRate { slow, fast };

inline constexpr double builtin_power = 2.5;  // W incident

/// Pulses of `train` fitting a dwell so that the next pixel can start at
/// the dwell boundary.
int pulses_per_dwell(double dwell, double pulse, double gap, double dead_time = default_dead_time);

TactilePattern linear_motion(const DisplayLayout& layout, Direction direction);
/// speed in {16, 32, 64} mm/s, given in m/s.
TactilePattern rotation(const DisplayLayout& layout, Rotation direction, double speed);
double rotation_dwell(double speed);
/// target in 0..8, row-major over the 3 x 3 block around the centre.
TactilePattern localization(const DisplayLayout& layout, int target);
TactilePattern magnitude(const DisplayLayout& layout, double incident_power);
std::vector<double> magnitude_levels();  // 0.5 .. 2.5 W, nine steps
TactilePattern temporal(const DisplayLayout& layout, TemporalRate rate);
/// Two distinct digits in 2..5.
TactilePattern multipoint(const DisplayLayout& layout, int digit_a, int digit_b);

/// Every built-in stimulus tagged with a short name, for sweeps and tests.
struct NamedPattern {
  std::string name;
  TactilePattern pattern;
};
std::vector<NamedPattern> all_builtin_patterns(const DisplayLayout& layout);
/// Looks up names like "linear_motion:right", "rotation:cw:32",
/// "localization:4", "magnitude:1.5", "temporal:slow", "multipoint:2-4".
TactilePattern builtin_pattern(const std::string& spec, const DisplayLayout& layout);

}  // namespace optopix
