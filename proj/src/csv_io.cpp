#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>
#include <vector>

#include "optopix/error.hpp"
#include "optopix/io.hpp"

namespace optopix {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const TraceSeries& trace) {
  const bool mech = trace.has_mechanics();
  out << "t_s,T_abs_K,T_air_K";
  if (mech) out << ",P_Pa,F_N,z_m";
  out << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_double(trace.time[i]) << ',' << format_double(trace.absorber_temperature[i])
        << ',' << format_double(trace.air_temperature[i]);
    if (mech) {
      out << ',' << format_double(trace.pressure[i]) << ',' << format_double(trace.force[i])
          << ',' << format_double(trace.displacement[i]);
    }
    out << '\n';
  }
}

std::string trace_to_csv(const TraceSeries& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

namespace {

Error trace_error(const std::string& msg) { return validation_error("invalid-trace", msg); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t row) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw trace_error("row " + std::to_string(row) + ": cannot parse '" + s + "'");
  }
  return v;
}

}  // namespace

TraceSeries read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw trace_error("empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::size_t columns = 0;
  if (line == "t_s,T_abs_K,T_air_K") {
    columns = 3;
  } else if (line == "t_s,T_abs_K,T_air_K,P_Pa,F_N,z_m") {
    columns = 6;
  } else {
    throw trace_error("unexpected header '" + line + "'");
  }
  TraceSeries tr;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != columns) {
      throw trace_error("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " columns, expected " + std::to_string(columns));
    }
    tr.time.push_back(parse_number(cells[0], row));
    tr.absorber_temperature.push_back(parse_number(cells[1], row));
    tr.air_temperature.push_back(parse_number(cells[2], row));
    if (columns == 6) {
      tr.pressure.push_back(parse_number(cells[3], row));
      tr.force.push_back(parse_number(cells[4], row));
      tr.displacement.push_back(parse_number(cells[5], row));
    }
  }
  if (tr.empty()) throw trace_error("trace has no samples");
  if (tr.size() > 1) {
    tr.sample_period = (tr.time.back() - tr.time.front()) / static_cast<double>(tr.size() - 1);
    if (!(tr.sample_period > 0.0)) throw trace_error("time column must be increasing");
    for (std::size_t i = 1; i < tr.size(); ++i) {
      const double dt = tr.time[i] - tr.time[i - 1];
      if (!(dt > 0.0) || std::abs(dt - tr.sample_period) > 1e-6 * tr.sample_period + 1e-15) {
        throw trace_error("trace is not uniformly sampled near row " + std::to_string(i + 2));
      }
    }
  }
  for (double t : tr.absorber_temperature) {
    if (t < 0.0) throw trace_error("negative absolute temperature");
  }
  return tr;
}

TraceSeries read_trace_csv_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("invalid-trace", "cannot read '" + path.string() + "'");
  return read_trace_csv(in);
}

void atomic_write_file(const fs::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("io", "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw validation_error("io", "write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw validation_error("io", "cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace optopix
