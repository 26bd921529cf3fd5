// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: acceptance [path-to-optopix-cli]

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "optopix/config.hpp"
#include "optopix/display.hpp"
#include "optopix/drive_engine.hpp"
#include "optopix/energy.hpp"
#include "optopix/error.hpp"
#include "optopix/param_fit.hpp"
#include "optopix/reference_data.hpp"
#include "optopix/thermal_sim.hpp"

using namespace optopix;
namespace ref = optopix::reference;
namespace fs = std::filesystem;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [miss: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " AC" << id << ": " << title << " --"
            << o.detail.str() << std::endl;
}

// Least-squares line through (x, y); returns r^2.
double affine_r2(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy * sxy / (sxx * syy);
}

PulseTrain train(double p, double tp, double tg, int n) {
  PulseTrain t;
  t.pulse_power = p;
  t.pulse_duration = tp;
  t.gap_duration = tg;
  t.pulse_count = n;
  return t;
}

void ac1(Outcome& o) {
  const double c_air = load_pixel_config("paper_pixel_w020").network().c_air();
  double worst = 0.0;
  for (const auto& m : ref::bridge_measurements()) {
    // bridge-dominated network: air path 1e4 times stiffer than the bridge
    const ThermalNetwork n(m.resistance, 1e4 * m.resistance, m.capacity, c_air, 300.0);
    const DriveSignal d = DriveSignal::pulse(1.63, 0.05, 0.05);
    const TraceSeries tr = simulate_coupled(n, d, 0.05, 1e-4);
    for (std::size_t i = 1; i < tr.size(); ++i) {
      const double cf = absorber_temperature_closed_form(n, d, tr.time[i]) - 300.0;
      worst = std::max(worst, rel(tr.absorber_temperature[i] - 300.0, cf));
    }
  }
  o.detail << " worst relative deviation of the rise " << worst << " (limit 5e-3)";
  o.require(worst < 5e-3, "closed form vs RK4");
  // For reference: the geometry-derived air path is much less stiff.
  const double ratio = decoupling_ratio(load_pixel_config("paper_pixel_w020").network());
  o.detail << "; geometry-derived ratio at w=0.2 mm is " << ratio;
}

void ac2(Outcome& o) {
  double clean_r = 0, clean_tau = 0, noisy_r = 0, noisy_tau = 0;
  for (const auto& m : ref::bridge_measurements()) {
    const double tau = m.resistance * m.capacity;
    const FitResult f = fit_rc(synthetic_rc_trace(m.resistance, m.capacity, 1.63, 0.05, 1e-4), 1.63);
    clean_r = std::max(clean_r, rel(f.value("R"), m.resistance));
    clean_tau = std::max(clean_tau, rel(f.value("tau"), tau));
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      // noise study over the 30 ms window itself, 10 kHz sampling
      TraceSeries tr = synthetic_rc_trace(m.resistance, m.capacity, 1.63, 0.03, 1e-4);
      const double peak = tr.absorber_temperature.back() - 300.0;
      add_gaussian_noise(tr, 0.01 * peak, seed);
      RcFitOptions opt;
      opt.baseline = 300.0;
      const FitResult g = fit_rc(tr, 1.63, opt);
      noisy_r = std::max(noisy_r, rel(g.value("R"), m.resistance));
      noisy_tau = std::max(noisy_tau, rel(g.value("tau"), tau));
    }
  }
  o.detail << " clean max err R " << clean_r << ", tau " << clean_tau << "; 1% noise x100 max err R "
           << noisy_r << ", tau " << noisy_tau;
  o.require(clean_r < 0.02 && clean_tau < 0.02, "clean within 2%");
  o.require(noisy_r < 0.05 && noisy_tau < 0.05, "noisy within 5%");
}

void ac3(Outcome& o) {
  std::vector<std::pair<double, double>> rows;
  for (const auto& m : ref::bridge_measurements()) rows.emplace_back(m.width, m.resistance);
  const FitResult f = fit_bridge_law(rows);
  o.detail << " a = " << f.value("a") * 1e3 << " mm K/W, r2 = " << f.r_squared;
  o.require(rel(f.value("a"), ref::bridge_law_constant) <= 0.10, "a within 10%");
  o.require(f.r_squared >= 0.95, "r2 >= 0.95");
}

void ac4(Outcome& o) {
  const PixelConfig cfg = load_pixel_config("paper_pixel_w020");
  const auto& op = ref::operating_point;
  const double p_abs = op.incident_power * op.absorbed_fraction;
  TraceSeries tr = simulate_coupled(cfg.network(), DriveSignal::pulse(p_abs, op.pulse_duration, op.pulse_duration),
                                    op.pulse_duration, 1e-4);
  append_mechanics(cfg.mechanics(), tr);
  const double rise = tr.absorber_temperature.back() - cfg.gas.ambient_temperature;
  const double z = tr.displacement.back();
  o.detail << " rise " << rise << " K, z " << z * 1e3 << " mm";
  o.require(rel(rise, op.temperature_rise) <= 0.10, "rise within 10%");
  o.require(rel(z, op.displacement) < 1e-6, "calibrated displacement");
  // one scale for every shipped pixel
  for (const char* name : {"paper_pixel_w025", "paper_pixel_w040", "paper_pixel_w055",
                           "paper_pixel_w075", "tau23_pixel"}) {
    o.require(load_pixel_config(name).compliance_scale == cfg.compliance_scale,
              std::string("shared scale in ") + name);
  }
}

void ac5(Outcome& o) {
  const PixelConfig cfg = load_pixel_config("tau23_pixel");
  const auto net = cfg.network();
  const auto mech = cfg.mechanics();
  const double tau = net.tau_abs();
  const double slow_tau = net.eigen_time_constants().second;
  std::vector<std::pair<double, double>> osc, slow;
  for (double k : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double tg = k * tau;
    const double period = tau + tg;
    const int n = std::max(20, static_cast<int>(std::ceil(10.0 * slow_tau / period)));
    const PulseTrain t = train(ref::operating_point.incident_power, tau, tg, n);
    const auto dec = decompose_cyclic(simulate_cyclic(net, mech, t, 1e-4), t);
    osc.emplace_back(tg, dec.steady_peak_to_peak / dec.first_pulse_amplitude);
    slow.emplace_back(tg, dec.steady_slow_level / dec.first_pulse_amplitude);
  }
  const FitResult fe = fit_cyclic_ratios(osc, RatioModel::exponential);
  const FitResult fh = fit_cyclic_ratios(slow, RatioModel::hyperbolic);
  o.detail << " exp: tau " << fe.value("tau") * 1e3 << " ms r2 " << fe.r_squared << "; hyp: tau "
           << fh.value("tau") * 1e3 << " ms r2 " << fh.r_squared << "; pixel tau " << tau * 1e3
           << " ms";
  o.require(fe.r_squared >= 0.9, "exponential r2");
  o.require(fh.r_squared >= 0.9, "hyperbolic r2");
  o.require(rel(fe.value("tau"), tau) <= 0.15, "exponential tau within 15%");
  o.require(rel(fh.value("tau"), tau) <= 0.15, "hyperbolic tau within 15%");
}

void ac6(Outcome& o) {
  const PixelConfig cfg = load_pixel_config("tau23_pixel");
  std::vector<double> freqs;
  for (int i = 0; i <= 10; ++i) freqs.push_back(5.0 * std::pow(100.0, i / 10.0));
  freqs.push_back(200.0);
  std::sort(freqs.begin(), freqs.end());
  const auto pts = frequency_sweep(cfg.network(), cfg.mechanics(), ref::operating_point.incident_power, freqs);
  bool decreasing = true;
  double at200 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && !(pts[i].peak_to_peak < pts[i - 1].peak_to_peak)) decreasing = false;
    if (pts[i].frequency == 200.0) at200 = pts[i].peak_to_peak;
  }
  o.detail << " strictly decreasing: " << (decreasing ? "yes" : "no") << "; delta_pp(200 Hz) = "
           << at200 * 1e6 << " um";
  o.require(decreasing, "monotone");
  o.require(rel(at200, ref::ripple_200hz) <= 0.30, "200 Hz within 30%");
}

void ac7(Outcome& o) {
  const PixelConfig cfg = load_pixel_config("tau23_pixel");
  const auto net = cfg.network();
  const auto mech = cfg.mechanics();
  std::vector<double> targets;
  for (int i = 0; i < 8; ++i) targets.push_back(50e-6 * (i + 1));
  std::vector<ScanRate> rates(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) rates[i] = max_scan_rate(net, mech, 2.5, targets[i]);
  bool decreasing = true, unit = true;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (i > 0 && !(rates[i].pixels_per_second < rates[i - 1].pixels_per_second)) decreasing = false;
    // 1/t_p rounds, so the product may sit one ulp off unity
    const double prod = rates[i].pixels_per_second * rates[i].pulse_duration;
    if (std::abs(prod - 1.0) > std::numeric_limits<double>::epsilon()) unit = false;
  }
  const double n50 = rates.front().pixels_per_second, n400 = rates.back().pixels_per_second;
  o.detail << " N(50 um) = " << n50 << ", N(400 um) = " << n400 << " px/s";
  o.require(decreasing, "monotone");
  o.require(unit, "N t_p = 1");
  o.require(rel(n50, ref::scan_rate_50um) <= 0.30, "N(50 um) within 30%");
  o.require(rel(n400, ref::scan_rate_400um) <= 0.30, "N(400 um) within 30%");
}

void ac8(Outcome& o) {
  const auto& op = ref::operating_point;
  GasEnergyOptions g;
  g.cavity_volume = op.cavity_volume;
  const EfficiencyReport r = efficiency_report(PixelGeometry{}, GasState{}, op.blocked_force, op.displacement,
                                               op.pulse_duration, op.incident_power, op.absorbed_fraction, g);
  const double chain = rel(r.stroke_efficiency, r.heat_to_gas_efficiency * r.thermo_mech_efficiency);
  o.detail << " eta_s " << r.stroke_efficiency * 100 << "%, eta_qt " << r.heat_to_gas_efficiency * 100
           << "%, eta_tm " << r.thermo_mech_efficiency * 100 << "% (" << r.air_specific_heat_basis
           << "), chain residual " << chain;
  o.require(rel(r.stroke_efficiency, ref::stroke_efficiency) <= 0.15, "eta_s within 15%");
  o.require(rel(r.heat_to_gas_efficiency, ref::heat_to_gas_efficiency) <= 0.20, "eta_qt within 20%");
  o.require(rel(r.thermo_mech_efficiency, ref::thermo_mech_efficiency) <= 0.20, "eta_tm within 20%");
  o.require(chain <= 1e-9, "chain identity");
}

void ac9(Outcome& o) {
  const PixelConfig cfg = load_pixel_config("paper_pixel_w020");
  std::vector<double> p, f;
  for (int i = 0; i <= 8; ++i) {
    const double pl = 0.5 + 0.25 * i;
    const TraceSeries tr = simulate_cyclic(cfg.network(), cfg.mechanics(), train(pl, 50e-3, 0.0, 1), 1e-4);
    p.push_back(pl);
    f.push_back(*std::max_element(tr.force.begin(), tr.force.end()));
  }
  const double r2 = affine_r2(p, f);
  o.detail << " r2 = " << r2 << ", F(2.5 W) = " << f.back() * 1e3 << " mN";
  o.require(r2 >= 0.999, "affine");
}

void ac10(Outcome& o) {
  const double lref = 4e-3, loss = 0.05;
  const double anchor = scaling_efficiency_loss(lref, lref, loss, HeatingMode::surface);
  const double s = scaling_efficiency_loss(lref / 2, lref, loss, HeatingMode::surface) / loss;
  const double v = scaling_efficiency_loss(lref / 2, lref, loss, HeatingMode::volume) / loss;
  o.detail << " anchor " << anchor << ", surface x" << s << ", volume x" << v;
  o.require(anchor == loss && scaling_efficiency_loss(lref, lref, loss, HeatingMode::volume) == loss, "anchor");
  o.require(std::abs(s - 2.0) < 1e-12, "surface x2");
  o.require(std::abs(v - 4.0) < 1e-12, "volume x4");
}

int run_cli(const std::string& cli, const std::vector<std::string>& args) {
  const pid_t pid = fork();
  if (pid == 0) {
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(cli.c_str()));
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    if (!std::freopen("/dev/null", "w", stdout) || !std::freopen("/dev/null", "w", stderr)) _exit(126);
    execv(cli.c_str(), argv.data());
    _exit(127);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void ac11(Outcome& o, const std::string& cli) {
  const DisplayLayout l = DisplayLayout::perceptual_437();
  int ok = 0, total = 0;
  for (const auto& np : all_builtin_patterns(l)) {
    ++total;
    try {
      compile_pattern(l, np.pattern, true);
      ++ok;
    } catch (const Error& e) {
      o.require(false, np.name + ": " + e.what());
    }
  }
  o.detail << " " << ok << "/" << total << " built-ins conflict-free";

  // Inject an overlap into a built-in and push it through the CLI.
  TactilePattern bad = builtin_pattern("linear_motion:right", l);
  TactilePattern::Event clash = bad.events[0];
  clash.pixel = bad.events[1].pixel;
  clash.start += 0.005;
  bad.events.push_back(clash);
  if (cli.empty()) {
    o.require(false, "CLI path not given");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / ("optopix_acc_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path pat = dir / "overlap.json";
  std::ofstream(pat) << pattern_to_json(l, bad);
  const fs::path out = dir / "schedule.csv";
  const int code = run_cli(cli, {"schedule", pat.string(), "--single-beam", "--out", out.string()});
  const bool wrote = fs::exists(out);
  fs::remove_all(dir);
  o.detail << "; injected overlap exit code " << code << (wrote ? " (output written)" : "");
  o.require(code == 4, "exit code 4");
  o.require(!wrote, "no output on failure");
}

void ac12(Outcome& o) {
  const DisplayLayout l = DisplayLayout::perceptual_437();
  const PixelModel m = load_pixel_config("tau23_pixel").pixel_model();
  TactilePattern p = builtin_pattern("localization:4", l);
  for (const auto& e : builtin_pattern("multipoint:2-5", l).events) p.events.push_back(e);
  for (const auto& e : builtin_pattern("rotation:ccw:64", l).events) p.events.push_back(e);
  p.total_duration = std::max(p.total_duration, p.last_event_end());
  const ScanSchedule s = compile_pattern(l, p, false);

  DisplaySimOptions base;
  base.threads = 1;
  base.include_force = true;
  const DisplayRun ref_run = simulate_display(l, s, m, 1e-3, base);
  std::vector<std::vector<std::size_t>> orders;
  orders.push_back({});
  std::vector<std::size_t> slots(ref_run.pixels.size());
  std::iota(slots.begin(), slots.end(), 0);
  orders.emplace_back(slots.rbegin(), slots.rend());
  std::mt19937 rng(2024);
  for (int k = 0; k < 2; ++k) {
    auto v = slots;
    std::shuffle(v.begin(), v.end(), rng);
    orders.push_back(v);
  }
  int runs = 0, identical = 0;
  for (const auto& order : orders) {
    for (unsigned threads : {1u, 2u, 5u, 0u}) {
      DisplaySimOptions opt = base;
      opt.threads = threads;
      opt.evaluation_order = order;
      const DisplayRun r = simulate_display(l, s, m, 1e-3, opt);
      bool same = r.pixels == ref_run.pixels && r.frames.size() == ref_run.frames.size();
      for (std::size_t i = 0; same && i < r.frames.size(); ++i) {
        same = r.frames[i].timestamp == ref_run.frames[i].timestamp &&
               r.frames[i].displacement == ref_run.frames[i].displacement &&
               r.frames[i].force == ref_run.frames[i].force;
      }
      ++runs;
      identical += same;
    }
  }
  o.detail << " " << identical << "/" << runs << " runs bitwise identical over " << ref_run.pixels.size()
           << " pixels x " << ref_run.frames.size() << " frames";
  o.require(ref_run.pixels.size() == 437, "437 pixels");
  o.require(identical == runs, "bitwise identical");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  run(1, "closed form matches coupled RK4 on the bridge rows", ac1);
  run(2, "RC fit round trip on the bridge rows", ac2);
  run(3, "bridge law constant", ac3);
  run(4, "w = 0.2 mm operating point", ac4);
  run(5, "cyclic ratio laws", ac5);
  run(6, "frequency sweep", ac6);
  run(7, "scan rate", ac7);
  run(8, "efficiency chain", ac8);
  run(9, "force linear in power", ac9);
  run(10, "scaling law exponents", ac10);
  run(11, "schedule integrity", [&](Outcome& o) { ac11(o, cli); });
  run(12, "array determinism", ac12);
  std::cout << (12 - failures) << "/12 acceptance criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
