#include <algorithm>
#include <cmath>
#include <sstream>

#include "optopix/display.hpp"
#include "optopix/error.hpp"

namespace optopix {

namespace {

struct Centre {
  int row;
  int col;
};

Centre centre_of(const DisplayLayout& layout) {
  return {(layout.rows - 1) / 2, (layout.cols - 1) / 2};
}

void require_cells(const DisplayLayout& layout, const std::vector<std::pair<int, int>>& cells,
                   const char* what) {
  for (const auto& [r, c] : cells) {
    if (r < 0 || c < 0 || r >= layout.rows || c >= layout.cols ||
        !layout.is_active(layout.index(r, c))) {
      std::ostringstream os;
      os << what << " footprint does not fit a " << layout.rows << "x" << layout.cols
         << " layout";
      throw validation_error("footprint", os.str());
    }
  }
}

PulseTrain make_train(double power, double tp, double tg, int count) {
  PulseTrain t;
  t.pulse_power = power;
  t.pulse_duration = tp;
  t.gap_duration = tg;
  t.pulse_count = count;
  t.absorbed_fraction = 0.66;
  return t;
}

// Dwell-based sequence over `cells`, each excited for `dwell`.
void add_sequence(TactilePattern& p, const DisplayLayout& layout,
                  const std::vector<std::pair<int, int>>& cells, double t0, double dwell,
                  double tp, double tg) {
  const int n = pulses_per_dwell(dwell, tp, tg);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    p.events.push_back({layout.index(cells[i].first, cells[i].second),
                        t0 + static_cast<double>(i) * dwell,
                        make_train(builtin_power, tp, tg, n)});
  }
}

}  // namespace

int pulses_per_dwell(double dwell, double pulse, double gap, double dead_time) {
  const double free = dwell - pulse - dead_time;
  if (free < 0.0) return 1;
  return static_cast<int>(std::floor(free / (pulse + gap) + 1e-9)) + 1;
}

TactilePattern linear_motion(const DisplayLayout& layout, Direction direction) {
  const auto [r, c] = centre_of(layout);
  std::vector<std::pair<int, int>> cells;
  switch (direction) {
    case Direction::right: cells = {{r, c - 1}, {r, c}, {r, c + 1}}; break;
    case Direction::left: cells = {{r, c + 1}, {r, c}, {r, c - 1}}; break;
    case Direction::up: cells = {{r + 1, c}, {r, c}, {r - 1, c}}; break;
    case Direction::down: cells = {{r - 1, c}, {r, c}, {r + 1, c}}; break;
  }
  require_cells(layout, cells, "linear motion");
  constexpr double dwell = 0.300, tp = 0.020, tg = 0.060, pause = 0.500;
  TactilePattern p;
  add_sequence(p, layout, cells, 0.0, dwell, tp, tg);
  const double second = 3 * dwell + pause;
  add_sequence(p, layout, cells, second, dwell, tp, tg);
  p.total_duration = second + 3 * dwell;
  return p;
}

double rotation_dwell(double speed) {
  // 16, 32, 64 mm/s map onto 200, 100, 50 ms dwell.
  const double mm_s = speed * 1e3;
  for (auto [v, dwell] : {std::pair{16.0, 0.200}, {32.0, 0.100}, {64.0, 0.050}}) {
    if (std::abs(mm_s - v) < 1e-6) return dwell;
  }
  throw validation_error("invalid-pattern", "rotation speed must be 16, 32 or 64 mm/s");
}

TactilePattern rotation(const DisplayLayout& layout, Rotation direction, double speed) {
  const double dwell = rotation_dwell(speed);
  const auto [r, c] = centre_of(layout);
  // Rows grow downwards; both directions start at the bottom-left cell.
  std::vector<std::pair<int, int>> cells = {{r + 1, c - 1}, {r, c - 1},     {r - 1, c - 1},
                                            {r - 1, c},     {r - 1, c + 1}, {r, c + 1},
                                            {r + 1, c + 1}, {r + 1, c}};
  if (direction == Rotation::counterclockwise) std::reverse(cells.begin() + 1, cells.end());
  require_cells(layout, cells, "rotation");
  TactilePattern p;
  add_sequence(p, layout, cells, 0.0, dwell, 0.025, 0.071);
  p.total_duration = 8 * dwell;
  return p;
}

TactilePattern localization(const DisplayLayout& layout, int target) {
  if (target < 0 || target > 8) {
    throw validation_error("invalid-pattern", "localization target must be in 0..8");
  }
  const auto [r, c] = centre_of(layout);
  const std::pair<int, int> tgt{r - 1 + target / 3, c - 1 + target % 3};
  require_cells(layout, {{r - 1, c - 1}, {r + 1, c + 1}, tgt}, "localization");
  constexpr double dwell = 0.500, pause = 0.750;
  TactilePattern p;
  add_sequence(p, layout, {{r, c}}, 0.0, dwell, 0.025, 0.025);
  add_sequence(p, layout, {tgt}, dwell + pause, dwell, 0.025, 0.025);
  p.total_duration = 2 * dwell + pause;
  return p;
}

std::vector<double> magnitude_levels() {
  std::vector<double> out;
  for (int i = 0; i < 9; ++i) out.push_back(0.5 + 0.25 * i);
  return out;
}

TactilePattern magnitude(const DisplayLayout& layout, double incident_power) {
  if (!(incident_power >= 0.5 - 1e-12 && incident_power <= 2.5 + 1e-12)) {
    throw validation_error("invalid-pattern", "magnitude power must lie in [0.5, 2.5] W");
  }
  const auto [r, c] = centre_of(layout);
  require_cells(layout, {{r, c}}, "magnitude");
  TactilePattern p;
  p.events.push_back({layout.index(r, c), 0.0, make_train(incident_power, 0.025, 0.025, 20)});
  p.total_duration = 1.0;
  return p;
}

TactilePattern temporal(const DisplayLayout& layout, TemporalRate rate) {
  const auto [r, c] = centre_of(layout);
  require_cells(layout, {{r, c}}, "temporal");
  const double tp = rate == TemporalRate::slow ? 0.035 : 0.010;
  TactilePattern p;
  add_sequence(p, layout, {{r, c}}, 0.0, 0.400, tp, tp);
  p.total_duration = 0.400;
  return p;
}

TactilePattern multipoint(const DisplayLayout& layout, int digit_a, int digit_b) {
  if (digit_a < 2 || digit_a > 5 || digit_b < 2 || digit_b > 5 || digit_a == digit_b) {
    throw validation_error("invalid-pattern", "multipoint needs two distinct digits in 2..5");
  }
  // Four 2x2 squares, one per digit, three columns apart, centred.
  const auto [r, c] = centre_of(layout);
  const int row0 = r - 1;
  const int col0 = c - 5;
  auto square = [&](int digit) {
    const int cc = col0 + 3 * (digit - 2);
    // Activation order: top-left, top-right, bottom-right, bottom-left.
    return std::vector<std::pair<int, int>>{
        {row0, cc}, {row0, cc + 1}, {row0 + 1, cc + 1}, {row0 + 1, cc}};
  };
  const auto a = square(digit_a);
  const auto b = square(digit_b);
  std::vector<std::pair<int, int>> all = a;
  all.insert(all.end(), b.begin(), b.end());
  require_cells(layout, all, "multipoint");

  constexpr double tp = 0.015;
  constexpr int repeats = 5;
  const double slot = tp + default_dead_time;
  TactilePattern p;
  double t = 0.0;
  for (int rep = 0; rep < repeats; ++rep) {
    for (int k = 0; k < 4; ++k) {
      for (const auto* sq : {&a, &b}) {
        const auto& cell = (*sq)[k];
        p.events.push_back({layout.index(cell.first, cell.second), t,
                            make_train(builtin_power, tp, 0.0, 1)});
        t += slot;
      }
    }
  }
  p.total_duration = t - default_dead_time;
  return p;
}

std::vector<NamedPattern> all_builtin_patterns(const DisplayLayout& layout) {
  std::vector<NamedPattern> out;
  const std::pair<const char*, Direction> dirs[] = {{"left", Direction::left},
                                                    {"right", Direction::right},
                                                    {"up", Direction::up},
                                                    {"down", Direction::down}};
  for (const auto& [name, d] : dirs) {
    out.push_back({std::string("linear_motion:") + name, linear_motion(layout, d)});
  }
  for (int v : {16, 32, 64}) {
    out.push_back({"rotation:cw:" + std::to_string(v),
                   rotation(layout, Rotation::clockwise, v * 1e-3)});
    out.push_back({"rotation:ccw:" + std::to_string(v),
                   rotation(layout, Rotation::counterclockwise, v * 1e-3)});
  }
  for (int t = 0; t < 9; ++t) {
    out.push_back({"localization:" + std::to_string(t), localization(layout, t)});
  }
  for (double pl : magnitude_levels()) {
    std::ostringstream os;
    os << "magnitude:" << pl;
    out.push_back({os.str(), magnitude(layout, pl)});
  }
  out.push_back({"temporal:slow", temporal(layout, TemporalRate::slow)});
  out.push_back({"temporal:fast", temporal(layout, TemporalRate::fast)});
  for (int a = 2; a <= 5; ++a) {
    for (int b = a + 1; b <= 5; ++b) {
      out.push_back({"multipoint:" + std::to_string(a) + "-" + std::to_string(b),
                     multipoint(layout, a, b)});
    }
  }
  return out;
}

TactilePattern builtin_pattern(const std::string& spec, const DisplayLayout& layout) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto bad = [&]() {
    return validation_error("unknown-pattern", "unrecognised built-in pattern '" + spec + "'");
  };
  if (parts.empty()) throw bad();
  const std::string& kind = parts[0];
  try {
    if (kind == "linear_motion" && parts.size() == 2) {
      const std::string& d = parts[1];
      if (d == "left") return linear_motion(layout, Direction::left);
      if (d == "right") return linear_motion(layout, Direction::right);
      if (d == "up") return linear_motion(layout, Direction::up);
      if (d == "down") return linear_motion(layout, Direction::down);
    } else if (kind == "rotation" && parts.size() == 3) {
      const double v = std::stod(parts[2]) * 1e-3;
      if (parts[1] == "cw") return rotation(layout, Rotation::clockwise, v);
      if (parts[1] == "ccw") return rotation(layout, Rotation::counterclockwise, v);
    } else if (kind == "localization" && parts.size() == 2) {
      return localization(layout, std::stoi(parts[1]));
    } else if (kind == "magnitude" && parts.size() == 2) {
      return magnitude(layout, std::stod(parts[1]));
    } else if (kind == "temporal" && parts.size() == 2) {
      if (parts[1] == "slow") return temporal(layout, TemporalRate::slow);
      if (parts[1] == "fast") return temporal(layout, TemporalRate::fast);
    } else if (kind == "multipoint" && parts.size() == 2) {
      const auto dash = parts[1].find('-');
      if (dash != std::string::npos) {
        return multipoint(layout, std::stoi(parts[1].substr(0, dash)),
                          std::stoi(parts[1].substr(dash + 1)));
      }
    }
  } catch (const std::invalid_argument&) {
    throw bad();
  } catch (const std::out_of_range&) {
    throw bad();
  }
  throw bad();
}

}  // namespace optopix
