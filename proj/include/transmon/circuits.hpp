#pragma once

#include "transmon/model.hpp"
#include "transmon/pulses.hpp"
#include "transmon/solver.hpp"

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace transmon {

struct CircuitError : std::runtime_error {
  int line = 0, column = 0;
  CircuitError(const std::string& msg, int line, int column);
};

enum class GateKind { x, h, s, t, tdg, u1, cx };
const char* to_string(GateKind kind);

struct CircuitOp {
  GateKind kind = GateKind::x;
  int q1 = 0;          // operand (control for cx)
  int q2 = -1;         // cx target
  double angle = 0.0;  // u1 argument, rad
  int line = 0, column = 0;

  bool operator==(const CircuitOp& o) const {
    return kind == o.kind && q1 == o.q1 && q2 == o.q2 && angle == o.angle;
  }
};

// Two-qubit program over the assembly subset
//   mnemonic[(angle)] q[i](, q[j])? ;
// with // line comments.  q[0] carries the leading bit of the state index.
struct Circuit {
  std::vector<CircuitOp> ops;

  static Circuit parse(const std::string& source);
  std::string pretty() const;
  Eigen::Matrix4cd ideal() const;
};

// Published programs.
Circuit qft_circuit();
Circuit qft4_circuit();
Circuit singlet_circuit(double theta1, double theta2);
Circuit cnot_chain_circuit(int n);

// ---------------------------------------------------------------------------
// Translation to the physical gate set: X rotations, CNOT blocks, and
// zero-duration frame rotations.

struct Primitive {
  enum class Kind { x_half, x_full, z, cnot } kind = Kind::z;
  int q1 = 0;
  int q2 = -1;         // cnot target
  double angle = 0.0;  // z angle
  int node = 0;        // originating op index
};

std::vector<Primitive> decompose(const Circuit& c);

// Matrix product of the primitives' exact unitaries (for soundness checks).
Eigen::Matrix4cd primitive_ideal_product(const std::vector<Primitive>& prims);

struct GateProvenance {
  int node = 0;       // index into Circuit::ops
  std::string label;  // emitted block
  double t_begin = 0.0, t_end = 0.0;
  bool pulsed = false;
};

struct CompiledProgram {
  PulseSchedule schedule;
  double duration = 0.0;
  PhaseFrame frame;  // frame in effect after the last gate
  std::vector<GateProvenance> provenance;
};

CompiledProgram compile_circuit(const Circuit& c,
                                const CalibratedGateTable& table,
                                CrScheme scheme);

// Appends the circuit to an existing builder, so a program can resume after
// a shared prefix.  Provenance entries are optional.
void compile_onto(ScheduleBuilder& b, const Circuit& c,
                  std::vector<GateProvenance>* provenance = nullptr);

// ---------------------------------------------------------------------------
// Execution.

struct OutcomeDistribution {
  std::array<double, 4> p{};  // populations ordered 00, 01, 10, 11
  double leak = 0.0;          // weight outside the computational subspace
};

// Propagates |initial> through the compiled pulses.
OutcomeDistribution run_circuit(const DeviceParameters& dev,
                                const std::array<TransmonEigenbasis, 2>& eig,
                                const CompiledProgram& program, int initial,
                                double tau);

OutcomeDistribution ideal_outcome(const Circuit& c, int initial);

struct ParityAverages {
  double e1 = 0.0, e2 = 0.0, e12 = 0.0;
};

// Signed averages (-1)^{m1}, (-1)^{m2}, (-1)^{m1+m2} of a distribution.
ParityAverages parity_averages(const std::array<double, 4>& p);

}  // namespace transmon
