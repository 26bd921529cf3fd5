// optopix command-line front end.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "optopix/config.hpp"
#include "optopix/display.hpp"
#include "optopix/drive_engine.hpp"
#include "optopix/energy.hpp"
#include "optopix/error.hpp"
#include "optopix/io.hpp"
#include "optopix/parallel.hpp"
#include "optopix/param_fit.hpp"
#include "optopix/thermal_sim.hpp"

namespace fs = std::filesystem;
using namespace optopix;
using nlohmann::ordered_json;

namespace {

constexpr const char* version = "0.1.0";

struct Globals {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool quiet = false;
};

// Collects what the manifest needs while a command runs.
struct RunContext {
  std::string command;
  std::vector<std::string> config_paths;
  ordered_json parameters = ordered_json::object();
  std::vector<std::string> outputs;
  std::optional<std::uint64_t> seed;
};

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

std::string require_out(const Globals& g) {
  if (g.out.empty()) throw validation_error("missing-output", "--out is required");
  return g.out;
}

PixelConfig load_config(const Globals& g, RunContext& run) {
  if (g.config.empty()) throw validation_error("missing-config", "--config is required");
  PixelConfig cfg = load_pixel_config(g.config);
  run.config_paths = cfg.sources;
  return cfg;
}

// Outputs are staged so nothing lands on disk unless the command succeeds.
struct Staged {
  std::vector<std::pair<std::string, std::string>> files;
  void add(const std::string& path, std::string content) {
    files.emplace_back(path, std::move(content));
  }
};

std::string manifest_json(const RunContext& run, double seconds) {
  ordered_json j = {{"command", run.command},
                    {"toolkit_version", version},
                    {"config_paths", run.config_paths},
                    {"parameters", run.parameters},
                    {"outputs", run.outputs},
                    {"seed", run.seed ? ordered_json(*run.seed) : ordered_json(nullptr)},
                    {"wall_clock_s", seconds}};
  return j.dump(2) + "\n";
}

std::string manifest_path(const std::string& out) { return out + ".manifest.json"; }

std::vector<double> range_values(double from, double to, int steps, bool log_spacing) {
  if (steps < 1) throw validation_error("invalid-range", "--steps must be >= 1");
  if (!std::isfinite(from) || !std::isfinite(to)) {
    throw validation_error("invalid-range", "range bounds must be finite");
  }
  if (log_spacing && (!(from > 0.0) || !(to > 0.0))) {
    throw validation_error("invalid-range", "log ranges need positive bounds");
  }
  if (steps == 1) {
    if (from != to) throw validation_error("invalid-range", "a single step needs --from == --to");
    return {from};
  }
  if (!(to > from)) throw validation_error("invalid-range", "--to must exceed --from");
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double f = static_cast<double>(i) / (steps - 1);
    v[i] = log_spacing ? std::exp(std::log(from) + f * (std::log(to) - std::log(from)))
                       : from + f * (to - from);
  }
  v.back() = to;
  return v;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  double power = -1.0;  // incident W; default from config optics
  double pulse = 50e-3;
  double gap = 0.0;
  int count = 1;
  double duration = -1.0;
  double sample_period = 1e-4;
  std::string mode = "coupled";
  double noise = 0.0;
  bool thermal_only = false;
};

void cmd_simulate(const Globals& g, const SimulateOpts& o, RunContext& run, Staged& staged) {
  const std::string out = require_out(g);
  const PixelConfig cfg = load_config(g, run);
  PulseTrain train;
  train.pulse_power = o.power >= 0.0 ? o.power : cfg.optics.incident_power;
  train.pulse_duration = o.pulse;
  train.gap_duration = o.gap;
  train.pulse_count = o.count;
  train.absorbed_fraction = cfg.optics.absorbed_fraction;
  train.validate();
  const double duration = o.duration > 0.0 ? o.duration : train.duration();
  run.parameters = {{"incident_power_W", train.pulse_power},
                    {"pulse_s", train.pulse_duration},
                    {"gap_s", train.gap_duration},
                    {"count", train.pulse_count},
                    {"duration_s", duration},
                    {"sample_period_s", o.sample_period},
                    {"mode", o.mode},
                    {"noise_K", o.noise}};

  const ThermalNetwork net = cfg.network();
  const DriveSignal drive = render_pulse_train(train);
  TraceSeries trace;
  if (o.mode == "coupled") {
    trace = simulate_coupled(net, drive, duration, o.sample_period);
  } else if (o.mode == "closed") {
    if (!(o.sample_period > 0.0) || !(duration >= o.sample_period)) {
      throw validation_error("domain", "duration must be >= sample_period > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor(duration / o.sample_period + 1e-9)) + 1;
    trace.sample_period = o.sample_period;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * o.sample_period;
      trace.time.push_back(t);
      trace.absorber_temperature.push_back(absorber_temperature_closed_form(net, drive, t));
    }
    trace = air_temperature_convolution(net, trace);
  } else {
    throw validation_error("invalid-mode", "--mode must be 'coupled' or 'closed'");
  }
  if (o.noise > 0.0) {
    const std::uint64_t seed = g.seed_given ? g.seed : 0;
    run.seed = seed;
    add_gaussian_noise(trace, o.noise, seed);
  }
  if (!o.thermal_only) append_mechanics(cfg.mechanics(), trace);

  double peak_t = trace.absorber_temperature.front();
  for (double t : trace.absorber_temperature) peak_t = std::max(peak_t, t);
  std::ostringstream os;
  os << "peak T_abs = " << peak_t << " K (" << peak_t - 273.15 << " C)";
  if (trace.has_mechanics()) {
    double z = 0.0, f = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      z = std::max(z, trace.displacement[i]);
      f = std::max(f, trace.force[i]);
    }
    os << ", peak z = " << z * 1e3 << " mm, peak F = " << f * 1e3 << " mN";
  }
  staged.add(out, trace_to_csv(trace));
  say(g, os.str());
}

// --------------------------------------------------------------------- fit

struct FitOpts {
  std::string trace;
  double power = 0.0;  // absorbed W
  double window = 30e-3;
  double onset = 0.0;
  std::optional<double> baseline;
};

void cmd_fit(const Globals& g, const FitOpts& o, RunContext& run, Staged& staged) {
  const std::string out = require_out(g);
  run.parameters = {{"trace", o.trace},
                    {"absorbed_power_W", o.power},
                    {"window_s", o.window},
                    {"onset_s", o.onset}};
  if (o.baseline) run.parameters["baseline_K"] = *o.baseline;
  const TraceSeries trace = read_trace_csv_file(o.trace);
  RcFitOptions opt;
  opt.window = o.window;
  opt.onset = o.onset;
  opt.baseline = o.baseline;
  FitResult fit = fit_rc(trace, o.power, opt);
  if (g.seed_given) {
    fit.seed = g.seed;
    run.seed = g.seed;
  }
  staged.add(out, fit_result_to_json(fit));
  std::ostringstream os;
  os << "R = " << fit.value("R") << " K/W, C = " << fit.value("C") * 1e6
     << " uJ/K, tau = " << fit.value("tau") * 1e3 << " ms";
  say(g, os.str());
}

// ------------------------------------------------------------------- sweep

struct SweepOpts {
  std::string kind;
  double from = 0.0, to = 0.0;
  int steps = 1;
  bool log_spacing = false;
  std::vector<double> values;
  double power = -1.0;
  double pulse = 50e-3;
  unsigned threads = 0;
};

void cmd_sweep(const Globals& g, const SweepOpts& o, RunContext& run, Staged& staged) {
  const std::string out = require_out(g);
  const PixelConfig cfg = load_config(g, run);
  const std::vector<double> xs =
      o.values.empty() ? range_values(o.from, o.to, o.steps, o.log_spacing) : o.values;
  if (xs.empty()) throw validation_error("invalid-range", "empty sweep range");
  const double power = o.power >= 0.0 ? o.power : cfg.optics.incident_power;
  const double eps = cfg.optics.absorbed_fraction;
  run.parameters = {{"kind", o.kind},       {"values", xs},          {"incident_power_W", power},
                    {"pulse_s", o.pulse},   {"log", o.log_spacing}};

  const ThermalNetwork net = cfg.network();
  const MechanicsContext mech = cfg.mechanics();
  std::ostringstream csv;
  if (o.kind == "frequency") {
    csv << "f_Hz,delta_pp_m\n";
    for (const auto& pt : frequency_sweep(net, mech, power, xs, eps, o.threads)) {
      csv << format_double(pt.frequency) << ',' << format_double(pt.peak_to_peak) << '\n';
    }
  } else if (o.kind == "scanrate") {
    csv << "d_target_m,N_px_per_s\n";
    std::vector<ScanRate> rates(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { rates[i] = max_scan_rate(net, mech, power, xs[i], eps); },
                 o.threads);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      csv << format_double(xs[i]) << ',' << format_double(rates[i].pixels_per_second) << '\n';
    }
  } else if (o.kind == "pulselength") {
    csv << "t_p_s,peak_z_m,peak_F_N,stroke_efficiency\n";
    for (double tp : xs) {
      if (!(tp > 0.0)) throw validation_error("invalid-range", "pulse lengths must be > 0");
      const DriveSignal drive = DriveSignal::pulse(power * eps, tp, tp);
      TraceSeries tr = simulate_coupled(net, drive, tp + net.eigen_time_constants().second,
                                        std::min(1e-4, tp / 20.0));
      append_mechanics(mech, tr);
      double z = 0.0, f = 0.0;
      for (std::size_t i = 0; i < tr.size(); ++i) {
        z = std::max(z, tr.displacement[i]);
        f = std::max(f, tr.force[i]);
      }
      const auto rep = stroke_metrics(f, z, tp, power, eps);
      csv << format_double(tp) << ',' << format_double(z) << ',' << format_double(f) << ','
          << format_double(rep.stroke_efficiency) << '\n';
    }
  } else if (o.kind == "width") {
    csv << "w_m,R_K_per_W,tau_s,inv_tau_per_s,peak_z_m\n";
    for (double w : xs) {
      PixelConfig c = cfg;
      c.geometry.bridge_width = w;
      const ThermalNetwork n = c.network();
      TraceSeries tr = simulate_coupled(n, DriveSignal::pulse(power * eps, o.pulse, o.pulse),
                                        o.pulse, 1e-4);
      append_mechanics(c.mechanics(), tr);
      double z = 0.0;
      for (double v : tr.displacement) z = std::max(z, v);
      csv << format_double(w) << ',' << format_double(n.r_abs()) << ','
          << format_double(n.tau_abs()) << ',' << format_double(1.0 / n.tau_abs()) << ','
          << format_double(z) << '\n';
    }
  } else {
    throw validation_error("invalid-kind",
                           "--kind must be frequency, scanrate, pulselength or width");
  }
  staged.add(out, csv.str());
  say(g, o.kind + " sweep: " + std::to_string(xs.size()) + " points");
}

// --------------------------------------------------------- schedule/render

struct PatternOpts {
  std::string pattern_file;
  std::string builtin;
  bool single_beam = false;
  double dead_time = default_dead_time;
  double sample_period = 1e-3;
  bool include_force = false;
  unsigned threads = 0;
};

PatternFile resolve_pattern(const PatternOpts& o, RunContext& run) {
  if (!o.pattern_file.empty() == !o.builtin.empty()) {
    throw validation_error("invalid-pattern", "give exactly one of a pattern file or --builtin");
  }
  if (!o.pattern_file.empty()) {
    run.parameters["pattern"] = o.pattern_file;
    return load_pattern_file(o.pattern_file);
  }
  run.parameters["builtin"] = o.builtin;
  PatternFile pf;
  pf.layout = DisplayLayout::perceptual_437();
  pf.pattern = builtin_pattern(o.builtin, pf.layout);
  return pf;
}

void cmd_schedule(const Globals& g, const PatternOpts& o, RunContext& run, Staged& staged) {
  const std::string out = require_out(g);
  const PatternFile pf = resolve_pattern(o, run);
  run.parameters["single_beam"] = o.single_beam;
  run.parameters["dead_time_s"] = o.dead_time;
  const ScanSchedule s = compile_pattern(pf.layout, pf.pattern, o.single_beam, o.dead_time);
  std::ostringstream csv;
  csv << "pixel,row,col,on_s,off_s,P_W,eps,event\n";
  for (const auto& iv : s.intervals) {
    csv << iv.pixel << ',' << pf.layout.row_of(iv.pixel) << ',' << pf.layout.col_of(iv.pixel)
        << ',' << format_double(iv.on) << ',' << format_double(iv.off) << ','
        << format_double(iv.power) << ',' << format_double(iv.absorbed_fraction) << ','
        << iv.event << '\n';
  }
  staged.add(out, csv.str());
  std::ostringstream os;
  os << s.intervals.size() << " intervals, duration " << s.duration << " s"
     << (o.single_beam ? ", single-beam conflict-free" : "");
  say(g, os.str());
}

void cmd_render(const Globals& g, const PatternOpts& o, RunContext& run, Staged& staged) {
  const std::string out = require_out(g);
  const PixelConfig cfg = load_config(g, run);
  const PatternFile pf = resolve_pattern(o, run);
  run.parameters["single_beam"] = o.single_beam;
  run.parameters["sample_period_s"] = o.sample_period;
  run.parameters["include_force"] = o.include_force;
  const ScanSchedule s = compile_pattern(pf.layout, pf.pattern, o.single_beam, o.dead_time);
  DisplaySimOptions opt;
  opt.include_force = o.include_force;
  opt.threads = o.threads;
  const DisplayRun r = simulate_display(pf.layout, s, cfg.pixel_model(), o.sample_period, opt);
  std::ostringstream csv;
  csv << "t_s,pixel,row,col,z_m" << (o.include_force ? ",F_N" : "") << '\n';
  for (const auto& fr : r.frames) {
    const std::string ts = format_double(fr.timestamp);
    for (std::size_t k = 0; k < r.pixels.size(); ++k) {
      const std::size_t cell = r.pixels[k];
      csv << ts << ',' << cell << ',' << pf.layout.row_of(cell) << ',' << pf.layout.col_of(cell)
          << ',' << format_double(fr.displacement[k]);
      if (o.include_force) csv << ',' << format_double(fr.force[k]);
      csv << '\n';
    }
  }
  staged.add(out, csv.str());
  std::ostringstream os;
  os << r.frames.size() << " frames x " << r.pixels.size() << " pixels, absorbed "
     << r.absorbed_energy << " J";
  say(g, os.str());
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOpts {
  std::optional<double> force, displacement, volume, specific_heat;
  double pulse = 50e-3;
  double power = -1.0;
  bool use_cv = false;
};

void cmd_analyze(const Globals& g, const AnalyzeOpts& o, RunContext& run, Staged& staged) {
  const std::string out = require_out(g);
  const PixelConfig cfg = load_config(g, run);
  const double power = o.power >= 0.0 ? o.power : cfg.optics.incident_power;
  const double eps = cfg.optics.absorbed_fraction;
  double f = 0.0, z = 0.0;
  if (o.force && o.displacement) {
    f = *o.force;
    z = *o.displacement;
  } else if (o.force || o.displacement) {
    throw validation_error("domain", "give both --force and --displacement, or neither");
  } else {
    // Peak of a simulated single pulse.
    TraceSeries tr = simulate_coupled(cfg.network(), DriveSignal::pulse(power * eps, o.pulse, o.pulse),
                                      o.pulse, 1e-4);
    append_mechanics(cfg.mechanics(), tr);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      f = std::max(f, tr.force[i]);
      z = std::max(z, tr.displacement[i]);
    }
  }
  GasEnergyOptions geo;
  geo.cavity_volume = o.volume;
  if (o.specific_heat) {
    geo.specific_heat = o.specific_heat;
  } else if (o.use_cv) {
    geo.specific_heat = cfg.gas.specific_heat_cv;
  }
  run.parameters = {{"force_N", f},           {"displacement_m", z},
                    {"pulse_s", o.pulse},     {"incident_power_W", power},
                    {"absorbed_fraction", eps}};
  if (o.volume) run.parameters["cavity_volume_m3"] = *o.volume;
  const EfficiencyReport rep =
      efficiency_report(cfg.geometry, cfg.gas, f, z, o.pulse, power, eps, geo);
  staged.add(out, efficiency_report_to_json(rep));
  std::ostringstream os;
  os << "eta_s = " << rep.stroke_efficiency * 100 << " %, eta_qt = "
     << rep.heat_to_gas_efficiency * 100 << " %, eta_tm = " << rep.thermo_mech_efficiency * 100
     << " % (" << rep.air_specific_heat_basis << ")";
  say(g, os.str());
}

// --------------------------------------------------------------- calibrate

struct CalibrateOpts {
  double target = 0.97e-3;
  double pulse = 50e-3;
  double t_eval = 50e-3;
  double power = -1.0;
};

void cmd_calibrate(const Globals& g, const CalibrateOpts& o, RunContext& run, Staged& staged) {
  PixelConfig cfg = load_config(g, run);
  const double power = o.power >= 0.0 ? o.power : cfg.optics.incident_power;
  run.parameters = {{"target_displacement_m", o.target},
                    {"pulse_s", o.pulse},
                    {"t_eval_s", o.t_eval},
                    {"incident_power_W", power}};
  const double scale =
      calibrate_compliance(cfg.network(), cfg.mechanics(), power * cfg.optics.absorbed_fraction,
                           o.pulse, o.t_eval, o.target);
  cfg.compliance_scale = scale;
  if (!g.out.empty()) staged.add(g.out, pixel_config_to_json(cfg));
  std::cout << "compliance_scale = " << format_double(scale) << '\n';
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::schedule: return 4;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optotactile pixel toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version);
  Globals g;
  app.add_option("--config", g.config, "Pixel config file or preset name");
  app.add_option("--out", g.out, "Output file");
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for any randomness");
  app.add_flag("--quiet", g.quiet, "Suppress the summary line");
  app.fallthrough();

  SimulateOpts so;
  auto* sim = app.add_subcommand("simulate", "Simulate a pulse or pulse train");
  sim->add_option("--power", so.power, "Incident power, W (default: config optics)");
  sim->add_option("--pulse", so.pulse, "Pulse duration, s");
  sim->add_option("--gap", so.gap, "Gap between pulses, s");
  sim->add_option("--count", so.count, "Number of pulses");
  sim->add_option("--duration", so.duration, "Simulated duration, s (default: train length)");
  sim->add_option("--sample-period", so.sample_period, "Output sample period, s");
  sim->add_option("--mode", so.mode, "coupled | closed");
  sim->add_option("--noise", so.noise, "Gaussian noise on T_abs, K");
  sim->add_flag("--thermal-only", so.thermal_only, "Omit pressure/force/displacement columns");

  FitOpts fo;
  auto* fit = app.add_subcommand("fit", "Fit R and tau to an absorber trace");
  fit->add_option("trace", fo.trace, "Trace CSV")->required();
  fit->add_option("--power", fo.power, "Absorbed power, W")->required();
  fit->add_option("--window", fo.window, "Fit window from onset, s");
  fit->add_option("--onset", fo.onset, "Pulse onset time, s");
  fit->add_option("--baseline", fo.baseline, "Pre-heating temperature, K");

  SweepOpts wo;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps");
  sweep->add_option("--kind", wo.kind, "frequency | scanrate | pulselength | width")->required();
  sweep->add_option("--from", wo.from, "Range start (SI)");
  sweep->add_option("--to", wo.to, "Range end (SI)");
  sweep->add_option("--steps", wo.steps, "Number of points");
  sweep->add_flag("--log", wo.log_spacing, "Logarithmic spacing");
  sweep->add_option("--values", wo.values, "Explicit values (overrides the range)")->delimiter(',');
  sweep->add_option("--power", wo.power, "Incident power, W");
  sweep->add_option("--pulse", wo.pulse, "Pulse duration for width sweeps, s");
  sweep->add_option("--threads", wo.threads, "Worker threads (0 = all cores)");

  PatternOpts po;
  auto add_pattern_opts = [&](CLI::App* sc) {
    sc->add_option("pattern", po.pattern_file, "Pattern JSON file");
    sc->add_option("--builtin", po.builtin, "Built-in stimulus, e.g. linear_motion:right");
    sc->add_flag("--single-beam", po.single_beam, "Enforce the single-beam constraint");
    sc->add_option("--dead-time", po.dead_time, "Beam retarget time, s");
  };
  auto* sched = app.add_subcommand("schedule", "Compile a pattern into a scan schedule");
  add_pattern_opts(sched);
  auto* render = app.add_subcommand("render", "Simulate the displacement field of a pattern");
  add_pattern_opts(render);
  render->add_option("--sample-period", po.sample_period, "Frame period, s");
  render->add_flag("--force", po.include_force, "Include blocked force column");
  render->add_option("--threads", po.threads, "Worker threads (0 = all cores)");

  AnalyzeOpts ao;
  auto* analyze = app.add_subcommand("analyze", "Energy and efficiency report");
  analyze->add_option("--force", ao.force, "Peak blocked force, N");
  analyze->add_option("--displacement", ao.displacement, "Peak displacement, m");
  analyze->add_option("--pulse", ao.pulse, "Pulse duration, s");
  analyze->add_option("--power", ao.power, "Incident power, W");
  analyze->add_option("--volume", ao.volume, "Cavity volume override, m^3");
  analyze->add_option("--specific-heat", ao.specific_heat, "Air specific heat, J/(kg K)");
  analyze->add_flag("--cv", ao.use_cv, "Use the constant-volume specific heat");

  CalibrateOpts co;
  auto* cal = app.add_subcommand("calibrate", "Fit the membrane compliance scale");
  cal->add_option("--target", co.target, "Displacement to match, m");
  cal->add_option("--pulse", co.pulse, "Pulse duration, s");
  cal->add_option("--at", co.t_eval, "Time at which to match, s");
  cal->add_option("--power", co.power, "Incident power, W");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "optopix: error[usage]: " << e.what() << '\n';
    return 2;
  }
  g.seed_given = seed_opt->count() > 0;

  RunContext run;
  Staged staged;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (*sim) {
      run.command = "simulate";
      cmd_simulate(g, so, run, staged);
    } else if (*fit) {
      run.command = "fit";
      cmd_fit(g, fo, run, staged);
    } else if (*sweep) {
      run.command = "sweep";
      cmd_sweep(g, wo, run, staged);
    } else if (*sched) {
      run.command = "schedule";
      cmd_schedule(g, po, run, staged);
    } else if (*render) {
      run.command = "render";
      cmd_render(g, po, run, staged);
    } else if (*analyze) {
      run.command = "analyze";
      cmd_analyze(g, ao, run, staged);
    } else if (*cal) {
      run.command = "calibrate";
      cmd_calibrate(g, co, run, staged);
    }
    if (!staged.files.empty()) {
      for (const auto& f : staged.files) run.outputs.push_back(f.first);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (const auto& [path, content] : staged.files) atomic_write_file(path, content);
      atomic_write_file(manifest_path(staged.files.front().first), manifest_json(run, secs));
    }
  } catch (const Error& e) {
    std::cerr << "optopix: error[" << e.code() << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "optopix: error[internal]: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
