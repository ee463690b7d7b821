// experiments.hpp -- the measurement campaigns built on top of the calibrated
// gate set: per-gate error metrics, repeated-application series, CNOT-chain
// output distributions, compiled-circuit maps, and the entangled-pair
// correlation sweep.  Everything here is deterministic for a fixed seed.
#pragma once

#include "transmon/calibrate.hpp"
#include "transmon/circuits.hpp"
#include "transmon/metrics.hpp"
#include "transmon/model.hpp"
#include "transmon/pulses.hpp"
#include "transmon/solver.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace transmon {

// ---------------------------------------------------------------------------
// Gate naming.

struct GateSpec {
  enum class Kind { x90, x180, cnot };
  Kind kind = Kind::x90;
  int qubit = 0;                    // x gates: target; cnot: control
  CrScheme scheme = CrScheme::cr2;  // cnot only

  bool is_cnot() const { return kind == Kind::cnot; }
};

// "x90_q1", "x180_q2", "cnot12_cr2", ...  (qubits 1-based in labels)
std::string gate_label(const GateSpec& g);
Eigen::Matrix4cd ideal_gate(const GateSpec& g);
double gate_duration(const CalibratedGateTable& table, const GateSpec& g);

// The four X rotations followed by both CNOT directions of every scheme.
std::vector<GateSpec> standard_gate_set();

// ---------------------------------------------------------------------------
// Single-gate map and the per-gate metrics table.

// Map of one calibrated gate including its trailing frame corrections.
Eigen::Matrix4cd gate_map(const DeviceParameters& dev,
                          const std::array<TransmonEigenbasis, 2>& eig,
                          const CalibratedGateTable& table, const GateSpec& g,
                          double tau);

struct MetricsOptions {
  double tau = 1e-3;
  long samples = 10000;     // Monte Carlo budget for fidelity and unitarity
  std::uint64_t seed = 1;
  DiamondOptions diamond{};
};

struct GateMetricsRow {
  std::string gate;
  double duration = 0.0;
  double delta = 0.0;      // squared Frobenius mismatch against the ideal
  double f_avg = 0.0;      // Monte Carlo average gate fidelity
  double eta = 0.0;        // worst-case error rate
  double eta_pauli = 0.0;  // incoherent lower bound from f_avg
  double eta_ub = 0.0;     // fidelity upper bound on eta
  double unitarity = 0.0;
};

GateMetricsRow gate_metrics_row(const DeviceParameters& dev,
                                const std::array<TransmonEigenbasis, 2>& eig,
                                const CalibratedGateTable& table,
                                const GateSpec& g, const MetricsOptions& opt);

// One row per gate in standard_gate_set(); rows are seeded per gate index so
// the table is independent of evaluation order.
std::vector<GateMetricsRow> metrics_table(
    const DeviceParameters& dev, const std::array<TransmonEigenbasis, 2>& eig,
    const CalibratedGateTable& table, const MetricsOptions& opt,
    int workers = 1);

// ---------------------------------------------------------------------------
// Repeated application of one gate.  A single continuous propagation covers
// all n_max repetitions; maps are snapshotted at every gate boundary with the
// frame in effect there.

struct RepeatSeries {
  GateSpec gate;
  double gate_duration = 0.0;
  std::vector<MapSnapshot> snaps;  // snaps[k]: map after k + 1 applications
};

RepeatSeries repeat_maps(const DeviceParameters& dev,
                         const std::array<TransmonEigenbasis, 2>& eig,
                         const CalibratedGateTable& table, const GateSpec& g,
                         int n_max, double tau);

struct RepeatMetricsRow {
  int n = 0;
  double eta = 0.0;         // worst-case error rate of the n-fold map
  double delta = 0.0;       // mismatch against the n-th ideal power
  double infidelity = 0.0;  // 1 - exact average gate fidelity
};

std::vector<RepeatMetricsRow> repeat_metrics(const RepeatSeries& series,
                                             const DiamondOptions& opt = {});

// Output-distribution drift of a CNOT chain for initial states |00> and
// |10>, against the exact alternating ideal.
struct ChainDistanceRow {
  int n = 0;
  double d00 = 0.0;
  double d10 = 0.0;
};

std::vector<ChainDistanceRow> chain_distances(const RepeatSeries& series);

// ---------------------------------------------------------------------------
// Compiled circuits.

struct CircuitMapResult {
  Eigen::Matrix4cd m;           // pulse-level map, trailing frame applied
  Eigen::Matrix4cd ideal;       // exact circuit unitary
  std::array<double, 4> leak{};
  double duration = 0.0;
};

CircuitMapResult circuit_map(const DeviceParameters& dev,
                             const std::array<TransmonEigenbasis, 2>& eig,
                             const CalibratedGateTable& table, CrScheme scheme,
                             const Circuit& c, double tau);

// ---------------------------------------------------------------------------
// Entangled-pair correlation sweep.  The state preparation (everything up to
// the analysis rotations) is propagated once and resumed per angle pair.

struct SingletPoint {
  double theta1 = 0.0, theta2 = 0.0;  // analysis angles, rad
  std::array<double, 4> p{};
  double leak = 0.0;
  double f1 = 0.0, f2 = 0.0, f12 = 0.0;  // simulated parity averages
  double e1 = 0.0, e2 = 0.0, e12 = 0.0;  // ideal counterparts
};

std::vector<SingletPoint> singlet_sweep(
    const DeviceParameters& dev, const std::array<TransmonEigenbasis, 2>& eig,
    const CalibratedGateTable& table, CrScheme scheme,
    const std::vector<std::array<double, 2>>& angles, double tau);

// Angle pairs 0..360 degrees in step_deg increments: either theta1 = 0 with
// theta2 sweeping, or theta1 = theta2 sweeping together.
std::vector<std::array<double, 2>> singlet_panel_angles(bool equal_angles,
                                                        double step_deg);

// ---------------------------------------------------------------------------
// Worker pool: runs fn(0..n-1) on up to `workers` threads.  Tasks must write
// disjoint outputs; results are then independent of scheduling.
void parallel_tasks(int n, int workers, const std::function<void(int)>& fn);

}  // namespace transmon
