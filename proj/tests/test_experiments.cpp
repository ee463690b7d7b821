#include "transmon/experiments.hpp"

#include "transmon/gates.hpp"
#include "transmon/units.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <set>

using namespace transmon;
using Catch::Approx;

namespace {

struct Bench {
  DeviceParameters dev = DeviceParameters::defaults();
  std::array<TransmonEigenbasis, 2> eig;
  CalibratedGateTable table = CalibratedGateTable::defaults();

  Bench() {
    eig = diagonalize_device(dev);
    table.omega_bar =
        calibrate_frequencies(dev, eig, CalibrationProfile::fast()).omega_bar;
  }
};

// One frequency fit shared across the whole suite.
const Bench& bench() {
  static Bench b;
  return b;
}

}  // namespace

TEST_CASE("standard gate set covers every calibrated gate", "[experiments]") {
  auto gates = standard_gate_set();
  REQUIRE(gates.size() == 10);

  std::set<std::string> labels;
  for (const auto& g : gates) labels.insert(gate_label(g));
  REQUIRE(labels.size() == 10);
  CHECK(labels.count("x90_q1") == 1);
  CHECK(labels.count("x180_q2") == 1);
  CHECK(labels.count("cnot12_cr1") == 1);
  CHECK(labels.count("cnot21_cr4") == 1);

  auto table = CalibratedGateTable::defaults();
  for (const auto& g : gates) {
    Eigen::Matrix4cd u = ideal_gate(g);
    CHECK((u * u.adjoint() - Eigen::Matrix4cd::Identity()).norm() < 1e-12);
    if (g.is_cnot())
      CHECK(gate_duration(table, g) ==
            cnot_duration(g.scheme,
                          table.gf[static_cast<int>(g.scheme)][g.qubit]));
    else
      CHECK(gate_duration(table, g) == single_gate_duration);
  }
  CHECK(ideal_gate({GateSpec::Kind::cnot, 1, CrScheme::cr2}) ==
        ideal_cnot(1, 0));
}

TEST_CASE("parallel tasks run every index exactly once", "[experiments]") {
  const int n = 37;
  std::vector<std::atomic<int>> hits(n);
  parallel_tasks(n, 4, [&](int i) { hits[static_cast<size_t>(i)]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);

  std::vector<int> inline_hits(n, 0);
  parallel_tasks(n, 1, [&](int i) { inline_hits[static_cast<size_t>(i)]++; });
  for (int h : inline_hits) CHECK(h == 1);

  parallel_tasks(0, 4, [&](int) { FAIL("no tasks expected"); });
}

TEST_CASE("repeat series agrees with the one-shot gate map", "[experiments]") {
  const auto& b = bench();
  GateSpec g{GateSpec::Kind::x90, 0, CrScheme::cr2};

  auto series = repeat_maps(b.dev, b.eig, b.table, g, 4, 1e-3);
  REQUIRE(series.snaps.size() == 4);
  CHECK(series.gate_duration == single_gate_duration);
  CHECK(series.snaps[0].t == Approx(single_gate_duration));
  CHECK(series.snaps[3].t == Approx(4.0 * single_gate_duration));

  auto single = gate_map(b.dev, b.eig, b.table, g, 1e-3);
  CHECK((series.snaps[0].m - single).norm() < 1e-9);
  for (const auto& snap : series.snaps)
    for (double l : snap.leak) {
      CHECK(l > -1e-9);
      CHECK(l < 0.05);
    }

  auto rows = repeat_metrics(series, {2000, 400, 7});
  REQUIRE(rows.size() == 4);
  Eigen::Matrix4cd u2 = ideal_gate(g) * ideal_gate(g);
  CHECK(rows[1].n == 2);
  CHECK(rows[1].delta == Approx(gate_discrepancy(series.snaps[1].m, u2)));
  CHECK(rows[1].infidelity ==
        Approx(1.0 - average_gate_fidelity_exact(series.snaps[1].m, u2)));
  for (const auto& row : rows) {
    CHECK(row.eta >= 0.0);
    CHECK(row.delta < 0.5);
    CHECK(row.infidelity < 0.05);
  }
}

TEST_CASE("chain distances compare populations against the ideal",
          "[experiments]") {
  const auto& b = bench();
  GateSpec g{GateSpec::Kind::cnot, 0, CrScheme::cr1};

  auto series = repeat_maps(b.dev, b.eig, b.table, g, 2, 1e-3);
  auto rows = chain_distances(series);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 1);
  CHECK(rows[1].n == 2);
  for (const auto& row : rows) {
    CHECK(row.d00 >= 0.0);
    CHECK(row.d00 < 0.25);
    CHECK(row.d10 >= 0.0);
    CHECK(row.d10 < 0.25);
  }

  // n = 1 by hand: ideal keeps |00> and maps |10> to |11>.
  std::array<double, 4> p00{}, p10{}, i00{1.0, 0.0, 0.0, 0.0},
      i10{0.0, 0.0, 0.0, 1.0};
  for (int m = 0; m < 4; ++m) {
    p00[static_cast<size_t>(m)] = std::norm(series.snaps[0].m(m, 0));
    p10[static_cast<size_t>(m)] = std::norm(series.snaps[0].m(m, 2));
  }
  CHECK(rows[0].d00 == Approx(statistical_distance(i00, p00)));
  CHECK(rows[0].d10 == Approx(statistical_distance(i10, p10)));

  GateSpec x{GateSpec::Kind::x90, 0, CrScheme::cr2};
  CHECK_THROWS_AS(chain_distances(RepeatSeries{x, 83.0, {}}),
                  std::invalid_argument);
}

TEST_CASE("gate metrics rows are reproducible and self-consistent",
          "[experiments]") {
  const auto& b = bench();
  MetricsOptions opt;
  opt.samples = 2000;
  opt.seed = 11;
  opt.diamond = {2000, 400, 7};

  GateSpec g{GateSpec::Kind::x90, 1, CrScheme::cr2};
  auto row = gate_metrics_row(b.dev, b.eig, b.table, g, opt);
  CHECK(row.gate == "x90_q2");
  CHECK(row.duration == single_gate_duration);
  CHECK(row.eta_pauli == Approx(1.25 * (1.0 - row.f_avg)));
  CHECK(row.eta_ub == Approx(std::sqrt(20.0 * (1.0 - row.f_avg))));
  CHECK(row.f_avg > 0.9);
  CHECK(row.unitarity > 0.9);
  CHECK(row.unitarity < 1.0 + 1e-6);
  CHECK(row.eta >= row.eta_pauli - 1e-6);
  CHECK(row.eta <= row.eta_ub + 1e-6);

  auto exact = average_gate_fidelity_exact(
      gate_map(b.dev, b.eig, b.table, g, opt.tau), ideal_gate(g));
  CHECK(std::abs(row.f_avg - exact) < 0.01);

  auto again = gate_metrics_row(b.dev, b.eig, b.table, g, opt);
  CHECK(again.f_avg == row.f_avg);
  CHECK(again.eta == row.eta);
  CHECK(again.unitarity == row.unitarity);
}

TEST_CASE("metrics table is ordered and labelled like the gate set",
          "[experiments]") {
  DeviceParameters dev = DeviceParameters::defaults();
  dev.basis = BasisConfig{-4, 4, 2};
  auto eig = diagonalize_device(dev);
  auto table = CalibratedGateTable::defaults();
  table.omega_bar = {ghz_to_radns(dev.omega[0]), ghz_to_radns(dev.omega[1])};

  MetricsOptions opt;
  opt.samples = 500;
  opt.diamond = {500, 200, 7};
  auto rows = metrics_table(dev, eig, table, opt, 2);
  auto gates = standard_gate_set();
  REQUIRE(rows.size() == gates.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].gate == gate_label(gates[i]));
    CHECK(rows[i].duration == Approx(gate_duration(table, gates[i])));
    CHECK(std::isfinite(rows[i].eta));
    CHECK(std::isfinite(rows[i].f_avg));
    CHECK(rows[i].eta >= 0.0);
  }
}

TEST_CASE("compiled circuit map tracks the ideal unitary", "[experiments]") {
  const auto& b = bench();
  auto c = Circuit::parse("s q[0]; x q[0];");
  auto result = circuit_map(b.dev, b.eig, b.table, CrScheme::cr2, c, 1e-3);

  CHECK(result.duration == Approx(single_gate_duration));
  CHECK(result.ideal == c.ideal());
  CHECK(gate_discrepancy(result.m, result.ideal) < 0.2);
  for (double l : result.leak) {
    CHECK(l > -1e-9);
    CHECK(l < 0.05);
  }
}

TEST_CASE("singlet sweep follows the ideal correlation", "[experiments]") {
  const auto& b = bench();

  auto panel = singlet_panel_angles(false, 45.0);
  REQUIRE(panel.size() == 9);
  CHECK(panel.front()[0] == 0.0);
  CHECK(panel.front()[1] == 0.0);
  CHECK(panel.back()[1] == Approx(two_pi));
  auto equal = singlet_panel_angles(true, 90.0);
  for (const auto& a : equal) CHECK(a[0] == a[1]);

  std::vector<std::array<double, 2>> angles{
      {0.0, 0.0}, {0.0, 0.5 * pi}, {0.25 * pi, 0.25 * pi}};
  auto points = singlet_sweep(b.dev, b.eig, b.table, CrScheme::cr2, angles,
                              1e-3);
  REQUIRE(points.size() == 3);

  for (const auto& pt : points) {
    CHECK(pt.e12 == Approx(-std::cos(pt.theta1 - pt.theta2)).margin(1e-10));
    CHECK(std::abs(pt.e1) < 1e-10);
    CHECK(std::abs(pt.e2) < 1e-10);
    CHECK(pt.leak >= -1e-9);
    CHECK(pt.leak < 0.05);
    CHECK(std::abs(pt.f12 - pt.e12) < 0.15);
    CHECK(std::abs(pt.f1 - pt.e1) < 0.15);
    CHECK(std::abs(pt.f2 - pt.e2) < 0.15);
  }
  CHECK(points[0].f12 < -0.8);  // opposite parities dominate at theta1 = theta2
}
