#include "transmon/circuits.hpp"

#include "transmon/gates.hpp"
#include "transmon/metrics.hpp"
#include "transmon/model.hpp"
#include "transmon/pulses.hpp"
#include "transmon/units.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>

using namespace transmon;
using Catch::Approx;

namespace {

// Global-phase-aligned Frobenius distance between two 4x4 matrices.
double aligned_distance(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  cdouble tr = (b.adjoint() * a).trace();
  cdouble phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cdouble(1.0);
  return (a - phase * b).norm();
}

int count_label(const CompiledProgram& p, const std::string& label) {
  int n = 0;
  for (const auto& g : p.provenance)
    if (g.label == label) ++n;
  return n;
}

}  // namespace

TEST_CASE("parser handles the assembly subset", "[circuits]") {
  CHECK(Circuit::parse("").ops.empty());
  CHECK(Circuit::parse("  // nothing but a comment\n").ops.empty());

  auto c = Circuit::parse("x q[0]; cx q[0],q[1];");
  REQUIRE(c.ops.size() == 2);
  CHECK(c.ops[0].kind == GateKind::x);
  CHECK(c.ops[0].q1 == 0);
  CHECK(c.ops[1].kind == GateKind::cx);
  CHECK(c.ops[1].q1 == 0);
  CHECK(c.ops[1].q2 == 1);

  auto u = Circuit::parse("u1(0.5) q[1];");
  REQUIRE(u.ops.size() == 1);
  CHECK(u.ops[0].kind == GateKind::u1);
  CHECK(u.ops[0].angle == 0.5);
  CHECK(u.ops[0].q1 == 1);

  auto m = Circuit::parse(
      "// prep\nh q[0];\nt q[1]; tdg q[1];\ns q[0];\nu1(-2.5e-1) q[0];\n");
  REQUIRE(m.ops.size() == 5);
  CHECK(m.ops[4].angle == -0.25);
  CHECK(m.ops[1].line == 3);
  CHECK(m.ops[2].column == 9);
}

TEST_CASE("parser reports distinct diagnostics with locations", "[circuits]") {
  CHECK_THROWS_WITH(Circuit::parse("y q[0];"),
                    Catch::Matchers::ContainsSubstring("unknown mnemonic") &&
                        Catch::Matchers::ContainsSubstring("'y'"));
  CHECK_THROWS_WITH(Circuit::parse("u1(abc) q[0];"),
                    Catch::Matchers::ContainsSubstring("malformed angle"));
  CHECK_THROWS_WITH(Circuit::parse("u1(0.5 q[0];"),
                    Catch::Matchers::ContainsSubstring("missing ')'"));
  CHECK_THROWS_WITH(Circuit::parse("x q[2];"),
                    Catch::Matchers::ContainsSubstring("out of range"));
  CHECK_THROWS_WITH(Circuit::parse("cx q[0], q[0];"),
                    Catch::Matchers::ContainsSubstring("distinct"));
  CHECK_THROWS_WITH(Circuit::parse("x q[0]"),
                    Catch::Matchers::ContainsSubstring("';'"));
  CHECK_THROWS_WITH(Circuit::parse("x(0.3) q[0];"),
                    Catch::Matchers::ContainsSubstring("takes no angle"));
  CHECK_THROWS_WITH(Circuit::parse("u1 q[0];"),
                    Catch::Matchers::ContainsSubstring("needs an angle"));

  try {
    Circuit::parse("h q[0];\n  t p[1];");
    FAIL("expected a parse error");
  } catch (const CircuitError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 5);
  }
}

TEST_CASE("pretty print round trips", "[circuits]") {
  auto c = Circuit::parse(
      "x q[0]; h q[1]; s q[0]; t q[1]; tdg q[0]; cx q[1], q[0];");
  c.ops.push_back({GateKind::u1, 1, -1, 0.1 + 0.2, 0, 0});
  auto again = Circuit::parse(c.pretty());
  REQUIRE(again.ops.size() == c.ops.size());
  for (size_t i = 0; i < c.ops.size(); ++i) CHECK(again.ops[i] == c.ops[i]);
}

TEST_CASE("decomposition reproduces each mnemonic", "[circuits]") {
  const char* singles[] = {"x q[1];",  "h q[0];",        "s q[1];",
                           "t q[0];",  "tdg q[1];",      "u1(0.8) q[0];",
                           "cx q[0], q[1];", "cx q[1], q[0];"};
  for (const char* src : singles) {
    CAPTURE(src);
    auto c = Circuit::parse(src);
    CHECK(aligned_distance(primitive_ideal_product(decompose(c)), c.ideal()) <
          1e-10);
  }
}

TEST_CASE("published programs decompose soundly", "[circuits]") {
  for (const Circuit& c :
       {qft_circuit(), qft4_circuit(), singlet_circuit(0.35, -1.2),
        cnot_chain_circuit(3)}) {
    CHECK(aligned_distance(primitive_ideal_product(decompose(c)), c.ideal()) <
          1e-10);
  }
}

TEST_CASE("qft program implements the four-point transform", "[circuits]") {
  Eigen::Matrix4cd f;
  cdouble w(0, 1);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) f(j, k) = 0.5 * std::pow(w, j * k);

  auto c = qft_circuit();
  CHECK(aligned_distance(c.ideal(), f) < 1e-10);

  auto c4 = qft4_circuit();
  CHECK(aligned_distance(c4.ideal(), f * f * f * f) < 1e-10);

  auto prog = compile_circuit(c, CalibratedGateTable::defaults(), CrScheme::cr2);
  CHECK(count_label(prog, "cnot") == 5);
  CHECK(count_label(prog, "x90") == 2);
  CHECK(count_label(prog, "x180") == 0);
  auto prog4 =
      compile_circuit(qft4_circuit(), CalibratedGateTable::defaults(),
                      CrScheme::cr2);
  CHECK(count_label(prog4, "cnot") == 20);
  CHECK(count_label(prog4, "x90") == 8);
}

TEST_CASE("singlet program matches the closed-form correlations", "[circuits]") {
  auto base = ideal_outcome(singlet_circuit(0.0, 0.0), 0);
  CHECK(base.p[0] == Approx(0.0).margin(1e-12));
  CHECK(base.p[1] == Approx(0.5).margin(1e-12));
  CHECK(base.p[2] == Approx(0.5).margin(1e-12));
  CHECK(base.p[3] == Approx(0.0).margin(1e-12));

  for (double t1 : {0.0, 0.4, 2.0, 4.9})
    for (double t2 : {0.0, -0.7, 1.3, 3.1}) {
      CAPTURE(t1, t2);
      auto pa = parity_averages(ideal_outcome(singlet_circuit(t1, t2), 0).p);
      CHECK(std::abs(pa.e1) < 1e-10);
      CHECK(std::abs(pa.e2) < 1e-10);
      CHECK(pa.e12 == Approx(-std::cos(t1 - t2)).margin(1e-10));
    }
}

TEST_CASE("cnot chains alternate with parity", "[circuits]") {
  CHECK(cnot_chain_circuit(0).ops.empty());
  CHECK(aligned_distance(cnot_chain_circuit(0).ideal(),
                         Eigen::Matrix4cd::Identity()) < 1e-12);
  for (int n : {1, 2, 3, 8}) {
    auto out = ideal_outcome(cnot_chain_circuit(n), 2);  // |10>
    CHECK(out.p[n % 2 == 0 ? 2 : 3] == Approx(1.0));
  }
}

TEST_CASE("frame rotations shift later pulses", "[circuits]") {
  auto table = CalibratedGateTable::defaults();
  auto plain = compile_circuit(Circuit::parse("x q[0];"), table, CrScheme::cr2);
  auto shifted =
      compile_circuit(Circuit::parse("u1(0.7) q[0]; x q[0];"), table,
                      CrScheme::cr2);
  REQUIRE(plain.schedule.terms.size() == shifted.schedule.terms.size());
  for (size_t i = 0; i < plain.schedule.terms.size(); ++i) {
    const auto& a = plain.schedule.terms[i];
    const auto& b = shifted.schedule.terms[i];
    CHECK(b.phase == Approx(a.phase - 0.7));
    CHECK(b.t_on == Approx(a.t_on));
    CHECK(b.amplitude == Approx(a.amplitude));
  }
  CHECK(shifted.frame.phi[0] == Approx(plain.frame.phi[0] + 0.7));
  CHECK(shifted.duration == Approx(plain.duration));
}

TEST_CASE("compiled programs cover every node and pin durations", "[circuits]") {
  auto table = CalibratedGateTable::defaults();

  auto empty = compile_circuit(Circuit::parse(""), table, CrScheme::cr2);
  CHECK(empty.schedule.terms.empty());
  CHECK(empty.duration == 0.0);

  auto vz = compile_circuit(Circuit::parse("s q[0];"), table, CrScheme::cr2);
  CHECK(vz.schedule.terms.empty());
  CHECK(vz.duration == 0.0);
  CHECK(vz.frame.phi[0] == Approx(0.5 * pi));
  REQUIRE(vz.provenance.size() == 1);
  CHECK_FALSE(vz.provenance[0].pulsed);

  auto cnot =
      compile_circuit(Circuit::parse("cx q[0], q[1];"), table, CrScheme::cr2);
  CHECK(std::abs(cnot.duration - 431.949) < 0.05);

  auto prog = compile_circuit(singlet_circuit(0.3, 0.9), table, CrScheme::cr2);
  std::vector<bool> covered(10, false);
  for (const auto& g : prog.provenance) {
    REQUIRE(g.node >= 0);
    REQUIRE(g.node < 10);
    covered[g.node] = true;
    CHECK(g.t_end >= g.t_begin);
  }
  for (bool b : covered) CHECK(b);
  // seven Gaussian pulses (the angles themselves are frame shifts) plus the
  // entangling block
  CHECK(prog.duration == Approx(7 * 83.0 + cnot.duration));
}

TEST_CASE("empty program leaves the initial state alone", "[circuits]") {
  auto dev = DeviceParameters::defaults();
  auto eig = diagonalize_device(dev);
  auto prog = compile_circuit(Circuit::parse(""), CalibratedGateTable::defaults(),
                              CrScheme::cr2);
  for (int initial = 0; initial < 4; ++initial) {
    auto out = run_circuit(dev, eig, prog, initial, 1e-3);
    CHECK(out.p[initial] == Approx(1.0).margin(1e-9));
    CHECK(std::abs(out.leak) < 1e-9);
  }
  CHECK_THROWS_AS(run_circuit(dev, eig, prog, 4, 1e-3), std::invalid_argument);
}

TEST_CASE("pulsed x gate moves the population", "[circuits]") {
  auto dev = DeviceParameters::defaults();
  auto eig = diagonalize_device(dev);
  auto prog = compile_circuit(Circuit::parse("x q[0];"),
                              CalibratedGateTable::defaults(), CrScheme::cr2);
  auto out = run_circuit(dev, eig, prog, 0, 1e-3);
  CHECK(out.p[2] > 0.9);
  CHECK(out.p[0] < 0.1);
  CHECK(out.leak < 0.05);
  CHECK(out.leak > -1e-9);
}
