#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "optopix/thermal_sim.hpp"
#include "support.hpp"

using namespace optopix;
using testing::rel;

namespace {

// Measured R, C for the narrowest bridge, with an air path far stiffer than the bridge.
ThermalNetwork decoupled(double r = 382.0, double c = 81e-6) {
  return ThermalNetwork(r, 1e4 * r, c, 5.97e-6, 300.0);
}

ThermalNetwork geometric() { return testing::preset("paper_pixel_w075").network(); }

double max_rel_rise_error(const TraceSeries& a, const TraceSeries& b, double wall) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ra = a.absorber_temperature[i] - wall;
    const double rb = b.absorber_temperature[i] - wall;
    if (std::abs(rb) > 1e-9) worst = std::max(worst, std::abs(ra - rb) / std::abs(rb));
  }
  return worst;
}

}  // namespace

TEST_CASE("drive signal bookkeeping") {
  const DriveSignal d = DriveSignal::pulse(1.5, 0.02, 0.05);
  CHECK(d.power_at(0.0) == 1.5);
  CHECK(d.power_at(0.019) == 1.5);
  CHECK(d.power_at(0.02) == 0.0);
  CHECK(d.energy() == doctest::Approx(0.03));
  CHECK(d.energy(0.01) == doctest::Approx(0.015));
  CHECK(testing::error_code([] { DriveSignal({{0.0, 1.0}, {0.0, 2.0}}, 1.0); }) != "");
  CHECK(testing::error_code([] { DriveSignal({{0.0, -1.0}}, 1.0); }) != "");
  CHECK(testing::error_code([] { DriveSignal({{0.0, 1.0}, {2.0, 0.0}}, 1.0); }) != "");
}

TEST_CASE("closed form at the narrow-bridge operating point") {
  const ThermalNetwork n = decoupled(382.0, 31e-3 / 382.0);
  const double rise =
      absorber_temperature_closed_form(n, DriveSignal::pulse(1.63, 0.05, 0.05), 0.05) - 300.0;
  CHECK(rise == doctest::Approx(1.63 * 382.0 * -std::expm1(-50.0 / 31.0)).epsilon(1e-12));
  CHECK(rel(rise, 507.0) < 0.05);
}

TEST_CASE("closed form limits") {
  const ThermalNetwork n = decoupled();
  const DriveSignal off = DriveSignal::constant(0.0, 1.0);
  for (double t : {0.0, 0.01, 0.1, 1.0}) {
    CHECK(absorber_temperature_closed_form(n, off, t) == 300.0);
    CHECK(absorber_temperature_closed_form(n, off, t, 400.0) ==
          doctest::Approx(300.0 + 100.0 * std::exp(-t / n.tau_abs())).epsilon(1e-12));
  }
  const DriveSignal on = DriveSignal::constant(0.5, 10.0);
  CHECK(absorber_temperature_closed_form(n, on, 10.0) ==
        doctest::Approx(300.0 + 0.5 * n.r_abs()).epsilon(1e-12));
  CHECK(testing::error_code([&] { absorber_temperature_closed_form(n, on, -1e-3); }) == "domain");
  const ThermalNetwork coupled(100.0, 1000.0, 1e-4, 1e-5, 300.0);
  CHECK(testing::error_code([&] { absorber_temperature_closed_form(coupled, on, 0.1); }) ==
        "mode-not-admissible");
}

TEST_CASE("closed form chains across pulse trains") {
  const ThermalNetwork n = decoupled();
  const DriveSignal d({{0.0, 1.0}, {0.01, 0.0}, {0.03, 2.0}, {0.04, 0.0}}, 0.1);
  const double tau = n.tau_abs(), r = n.r_abs();
  double rise = r * 1.0 * -std::expm1(-0.01 / tau);
  rise *= std::exp(-0.02 / tau);
  rise = r * 2.0 * -std::expm1(-0.01 / tau) + rise * std::exp(-0.01 / tau);
  rise *= std::exp(-0.06 / tau);
  CHECK(absorber_temperature_closed_form(n, d, 0.1) - 300.0 == doctest::Approx(rise).epsilon(1e-12));
}

TEST_CASE("coupled integration matches the closed form when decoupled") {
  const ThermalNetwork n = decoupled();
  const DriveSignal d = DriveSignal::pulse(1.63, 0.05, 0.08);
  const TraceSeries tr = simulate_coupled(n, d, 0.08, 1e-4);
  TraceSeries cf = tr;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    cf.absorber_temperature[i] = absorber_temperature_closed_form(n, d, tr.time[i]);
  }
  CHECK(max_rel_rise_error(tr, cf, 300.0) < 5e-3);
}

TEST_CASE("zero drive at equilibrium stays flat") {
  const TraceSeries tr = simulate_coupled(geometric(), DriveSignal::constant(0.0, 0.1), 0.1, 1e-3);
  CHECK(tr.size() == 101);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.absorber_temperature[i] == 300.0);
    CHECK(tr.air_temperature[i] == 300.0);
  }
}

TEST_CASE("halving the internal step barely moves any sample") {
  const ThermalNetwork n = geometric();
  const DriveSignal d = DriveSignal::pulse(1.0, 0.03, 0.1);
  CoupledOptions fine;
  fine.refinement = 2;
  const auto a = simulate_coupled_detailed(n, d, 0.1, 1e-4).trace;
  const auto b = simulate_coupled_detailed(n, d, 0.1, 1e-4, {}, fine).trace;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, rel(a.absorber_temperature[i], b.absorber_temperature[i]));
    worst = std::max(worst, rel(a.air_temperature[i], b.air_temperature[i]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("energy balance holds for arbitrary drives") {
  const ThermalNetwork n = geometric();
  const std::vector<DriveSignal> drives = {
      DriveSignal::pulse(1.63, 0.05, 0.2),
      DriveSignal({{0.0, 0.3}, {0.013, 1.7}, {0.021, 0.0}, {0.07, 0.9}}, 0.15),
      DriveSignal::constant(2.0, 0.5)};
  for (const auto& d : drives) {
    const auto run = simulate_coupled_detailed(n, d, d.duration(), 1e-4);
    CHECK(run.ledger.absorbed == doctest::Approx(d.energy()).epsilon(1e-12));
    CHECK(std::abs(run.ledger.imbalance()) < 5e-3 * run.ledger.absorbed);
  }
  const auto warm = simulate_coupled_detailed(n, DriveSignal::constant(0.0, 0.2), 0.2, 1e-4,
                                              InitialState{350.0, 320.0});
  const double stored0 = n.c_abs() * 50.0 + n.c_air() * 20.0;
  CHECK(std::abs(warm.ledger.imbalance()) < 5e-3 * stored0);
}

TEST_CASE("response is linear in drive power") {
  const ThermalNetwork n = geometric();
  const auto a = simulate_coupled(n, DriveSignal::pulse(0.7, 0.02, 0.06), 0.06, 1e-4);
  const auto b = simulate_coupled(n, DriveSignal::pulse(0.7 * 3.5, 0.02, 0.06), 0.06, 1e-4);
  for (std::size_t i = 1; i < a.size(); ++i) {
    CHECK(rel(b.absorber_temperature[i] - 300.0, 3.5 * (a.absorber_temperature[i] - 300.0)) < 1e-9);
    CHECK(rel(b.air_temperature[i] - 300.0, 3.5 * (a.air_temperature[i] - 300.0)) < 1e-9);
  }
}

TEST_CASE("constant heating is monotone and the absorber leads the air") {
  const auto tr = simulate_coupled(geometric(), DriveSignal::constant(1.0, 0.3), 0.3, 1e-4);
  for (std::size_t i = 1; i < tr.size(); ++i) {
    CHECK(tr.absorber_temperature[i] > tr.absorber_temperature[i - 1]);
    CHECK(tr.air_temperature[i] <= tr.absorber_temperature[i]);
  }
}

TEST_CASE("coupled integration preconditions") {
  const ThermalNetwork n = geometric();
  const DriveSignal d = DriveSignal::constant(1.0, 0.1);
  CHECK(testing::error_code([&] { simulate_coupled(n, d, 0.1, 0.0); }) == "domain");
  CHECK(testing::error_code([&] { simulate_coupled(n, d, 1e-5, 1e-4); }) == "domain");
  CoupledOptions coarse;
  coarse.step_fraction = 1e4;
  CHECK(testing::error_code([&] {
          simulate_coupled_detailed(n, DriveSignal::constant(1.0, 500.0), 500.0, 1.0, {}, coarse);
        }) == "instability");
}

TEST_CASE("air convolution fixed point and step limit") {
  const ThermalNetwork n = geometric();
  TraceSeries tr;
  tr.sample_period = 1e-3;
  const std::size_t count = static_cast<std::size_t>(std::ceil(20.0 * n.tau_air() / 1e-3));
  for (std::size_t i = 0; i <= count; ++i) {
    tr.time.push_back(i * 1e-3);
    tr.absorber_temperature.push_back(300.0);
  }
  auto flat = air_temperature_convolution(n, tr);
  for (double t : flat.air_temperature) CHECK(t == doctest::Approx(300.0).epsilon(1e-12));

  for (std::size_t i = 1; i < tr.size(); ++i) tr.absorber_temperature[i] = 410.0;
  const auto step = air_temperature_convolution(n, tr);
  CHECK(rel(step.air_temperature.back(), 355.0) < 1e-3);
  CHECK(testing::error_code([&] { air_temperature_convolution(n, TraceSeries{}); }) == "domain");
}

TEST_CASE("air convolution agrees with the coupled integrator") {
  const ThermalNetwork n = decoupled(382.0, 81e-6);
  const auto tr = simulate_coupled(n, DriveSignal::pulse(1.63, 0.05, 0.3), 0.3, 1e-4);
  const auto conv = air_temperature_convolution(n, tr);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    worst = std::max(worst, rel(conv.air_temperature[i], tr.air_temperature[i]));
  }
  CHECK(worst < 1e-2);
}
