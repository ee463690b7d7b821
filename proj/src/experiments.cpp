#include "transmon/experiments.hpp"

#include "transmon/gates.hpp"
#include "transmon/units.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace transmon {

namespace {

void emit_gate(ScheduleBuilder& b, const GateSpec& g) {
  switch (g.kind) {
    case GateSpec::Kind::x90:
      b.x_half(g.qubit);
      break;
    case GateSpec::Kind::x180:
      b.x_full(g.qubit);
      break;
    case GateSpec::Kind::cnot:
      b.cnot(g.qubit, 1 - g.qubit);
      break;
  }
}

}  // namespace

std::string gate_label(const GateSpec& g) {
  switch (g.kind) {
    case GateSpec::Kind::x90:
      return g.qubit == 0 ? "x90_q1" : "x90_q2";
    case GateSpec::Kind::x180:
      return g.qubit == 0 ? "x180_q1" : "x180_q2";
    case GateSpec::Kind::cnot:
      return std::string(g.qubit == 0 ? "cnot12_" : "cnot21_") +
             to_string(g.scheme);
  }
  return {};
}

Eigen::Matrix4cd ideal_gate(const GateSpec& g) {
  switch (g.kind) {
    case GateSpec::Kind::x90:
      return on_qubit(rotation_x(0.5 * pi), g.qubit);
    case GateSpec::Kind::x180:
      return on_qubit(rotation_x(pi), g.qubit);
    case GateSpec::Kind::cnot:
      return ideal_cnot(g.qubit, 1 - g.qubit);
  }
  return Eigen::Matrix4cd::Identity();
}

double gate_duration(const CalibratedGateTable& table, const GateSpec& g) {
  if (!g.is_cnot()) return single_gate_duration;
  return cnot_duration(g.scheme, table.gf[static_cast<int>(g.scheme)][g.qubit]);
}

std::vector<GateSpec> standard_gate_set() {
  std::vector<GateSpec> gates;
  for (int q = 0; q < 2; ++q) {
    gates.push_back({GateSpec::Kind::x90, q, CrScheme::cr1});
    gates.push_back({GateSpec::Kind::x180, q, CrScheme::cr1});
  }
  for (CrScheme s : {CrScheme::cr1, CrScheme::cr2, CrScheme::cr4})
    for (int c = 0; c < 2; ++c)
      gates.push_back({GateSpec::Kind::cnot, c, s});
  return gates;
}

Eigen::Matrix4cd gate_map(const DeviceParameters& dev,
                          const std::array<TransmonEigenbasis, 2>& eig,
                          const CalibratedGateTable& table, const GateSpec& g,
                          double tau) {
  ScheduleBuilder b(table, g.is_cnot() ? g.scheme : CrScheme::cr2);
  emit_gate(b, g);
  return computational_map(dev, eig, b.schedule(), b.time(), tau,
                           table.omega_bar, b.frame().phi);
}

GateMetricsRow gate_metrics_row(const DeviceParameters& dev,
                                const std::array<TransmonEigenbasis, 2>& eig,
                                const CalibratedGateTable& table,
                                const GateSpec& g, const MetricsOptions& opt) {
  Eigen::Matrix4cd m = gate_map(dev, eig, table, g, opt.tau);
  Eigen::Matrix4cd u = ideal_gate(g);

  GateMetricsRow row;
  row.gate = gate_label(g);
  row.duration = gate_duration(table, g);
  row.delta = gate_discrepancy(m, u);
  row.f_avg = average_gate_fidelity(m, u, opt.samples, opt.seed);
  row.eta = diamond_error_rate(m, u, opt.diamond);
  row.eta_pauli = pauli_error_bound(row.f_avg);
  row.eta_ub = diamond_error_upper_bound(row.f_avg);
  row.unitarity = unitarity(m, opt.samples, opt.seed + 1);
  return row;
}

std::vector<GateMetricsRow> metrics_table(
    const DeviceParameters& dev, const std::array<TransmonEigenbasis, 2>& eig,
    const CalibratedGateTable& table, const MetricsOptions& opt, int workers) {
  auto gates = standard_gate_set();
  std::vector<GateMetricsRow> rows(gates.size());
  parallel_tasks(static_cast<int>(gates.size()), workers, [&](int i) {
    MetricsOptions per = opt;
    per.seed = opt.seed + 101 * static_cast<std::uint64_t>(i);
    rows[static_cast<size_t>(i)] =
        gate_metrics_row(dev, eig, table, gates[static_cast<size_t>(i)], per);
  });
  return rows;
}

RepeatSeries repeat_maps(const DeviceParameters& dev,
                         const std::array<TransmonEigenbasis, 2>& eig,
                         const CalibratedGateTable& table, const GateSpec& g,
                         int n_max, double tau) {
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  ScheduleBuilder b(table, g.is_cnot() ? g.scheme : CrScheme::cr2);
  for (int n = 0; n < n_max; ++n) emit_gate(b, g);

  std::vector<SnapshotRequest> snaps;
  snaps.reserve(b.boundaries().size());
  for (const auto& boundary : b.boundaries())
    snaps.push_back({boundary.t_end, boundary.frame.phi});

  RepeatSeries series;
  series.gate = g;
  series.gate_duration = gate_duration(table, g);
  series.snaps = computational_map_series(dev, eig, b.schedule(), snaps, tau,
                                          table.omega_bar);
  return series;
}

std::vector<RepeatMetricsRow> repeat_metrics(const RepeatSeries& series,
                                             const DiamondOptions& opt) {
  Eigen::Matrix4cd u = ideal_gate(series.gate);
  Eigen::Matrix4cd acc = Eigen::Matrix4cd::Identity();
  std::vector<RepeatMetricsRow> rows;
  rows.reserve(series.snaps.size());
  for (size_t k = 0; k < series.snaps.size(); ++k) {
    acc = u * acc;
    const Eigen::Matrix4cd& m = series.snaps[k].m;
    RepeatMetricsRow row;
    row.n = static_cast<int>(k) + 1;
    row.eta = diamond_error_rate(m, acc, opt);
    row.delta = gate_discrepancy(m, acc);
    row.infidelity = 1.0 - average_gate_fidelity_exact(m, acc);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ChainDistanceRow> chain_distances(const RepeatSeries& series) {
  if (!series.gate.is_cnot())
    throw std::invalid_argument("chain distances need a cnot series");
  Eigen::Matrix4cd u = ideal_gate(series.gate);
  Eigen::Matrix4cd acc = Eigen::Matrix4cd::Identity();
  std::vector<ChainDistanceRow> rows;
  rows.reserve(series.snaps.size());
  for (size_t k = 0; k < series.snaps.size(); ++k) {
    acc = u * acc;
    ChainDistanceRow row;
    row.n = static_cast<int>(k) + 1;
    double* out[2] = {&row.d00, &row.d10};
    for (int which = 0; which < 2; ++which) {
      int j = which == 0 ? 0 : 2;  // |00> and |10>
      std::array<double, 4> ideal{}, sim{};
      for (int m = 0; m < 4; ++m) {
        ideal[static_cast<size_t>(m)] = std::norm(acc(m, j));
        sim[static_cast<size_t>(m)] = std::norm(series.snaps[k].m(m, j));
      }
      *out[which] = statistical_distance(ideal, sim);
    }
    rows.push_back(row);
  }
  return rows;
}

CircuitMapResult circuit_map(const DeviceParameters& dev,
                             const std::array<TransmonEigenbasis, 2>& eig,
                             const CalibratedGateTable& table, CrScheme scheme,
                             const Circuit& c, double tau) {
  auto program = compile_circuit(c, table, scheme);
  std::vector<SnapshotRequest> snaps{{program.duration, program.frame.phi}};
  auto series = computational_map_series(dev, eig, program.schedule, snaps,
                                         tau, table.omega_bar);
  CircuitMapResult out;
  out.m = series.front().m;
  out.ideal = c.ideal();
  out.leak = series.front().leak;
  out.duration = program.duration;
  return out;
}

std::vector<SingletPoint> singlet_sweep(
    const DeviceParameters& dev, const std::array<TransmonEigenbasis, 2>& eig,
    const CalibratedGateTable& table, CrScheme scheme,
    const std::vector<std::array<double, 2>>& angles, double tau) {
  Circuit full = singlet_circuit(0.0, 0.0);
  Circuit prefix;  // preparation through the first analysis Hadamard pair
  prefix.ops.assign(full.ops.begin(), full.ops.begin() + 6);

  ScheduleBuilder pb(table, scheme);
  compile_onto(pb, prefix);
  double t_prefix = pb.time();
  PhaseFrame frame_prefix = pb.frame();

  StateBlock prepared = StateBlock::zeros(dev.basis, 1);
  prepared.set_column(0, computational_state(dev.basis, eig, 0, 0));
  evolve(prepared, dev, pb.schedule(), {0.0, t_prefix, tau});

  std::vector<SingletPoint> points;
  points.reserve(angles.size());
  for (const auto& a : angles) {
    Circuit suffix;
    suffix.ops = {
        {GateKind::u1, 0, -1, a[0], 0, 0},
        {GateKind::u1, 1, -1, a[1], 0, 0},
        {GateKind::h, 0, -1, 0.0, 0, 0},
        {GateKind::h, 1, -1, 0.0, 0, 0},
    };
    ScheduleBuilder sb(table, scheme, t_prefix, frame_prefix);
    compile_onto(sb, suffix);

    StateBlock s = prepared;
    evolve(s, dev, sb.schedule(), {t_prefix, sb.time(), tau});
    auto amp = computational_amplitudes(s, 0, eig);

    SingletPoint pt;
    pt.theta1 = a[0];
    pt.theta2 = a[1];
    double total = 0.0;
    for (int m = 0; m < 4; ++m) {
      pt.p[static_cast<size_t>(m)] = std::norm(amp[static_cast<size_t>(m)]);
      total += pt.p[static_cast<size_t>(m)];
    }
    pt.leak = 1.0 - total;
    auto sim = parity_averages(pt.p);
    pt.f1 = sim.e1;
    pt.f2 = sim.e2;
    pt.f12 = sim.e12;
    auto exact = parity_averages(ideal_outcome(singlet_circuit(a[0], a[1]), 0).p);
    pt.e1 = exact.e1;
    pt.e2 = exact.e2;
    pt.e12 = exact.e12;
    points.push_back(pt);
  }
  return points;
}

std::vector<std::array<double, 2>> singlet_panel_angles(bool equal_angles,
                                                        double step_deg) {
  std::vector<std::array<double, 2>> angles;
  for (double deg = 0.0; deg <= 360.0 + 1e-9; deg += step_deg) {
    double rad = deg * pi / 180.0;
    angles.push_back({equal_angles ? rad : 0.0, rad});
  }
  return angles;
}

void parallel_tasks(int n, int workers, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  int pool = std::min(n, std::max(1, workers));
  if (pool == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(pool));
  for (int w = 0; w < pool; ++w)
    threads.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : threads) t.join();
}

}  // namespace transmon
