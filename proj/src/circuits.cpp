#include "transmon/circuits.hpp"

#include "transmon/gates.hpp"
#include "transmon/units.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>

namespace transmon {

namespace {

std::string located(const std::string& msg, int line, int column) {
  return msg + " (line " + std::to_string(line) + ", column " +
         std::to_string(column) + ")";
}

}  // namespace

CircuitError::CircuitError(const std::string& msg, int line, int column)
    : std::runtime_error(located(msg, line, column)),
      line(line),
      column(column) {}

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::x: return "x";
    case GateKind::h: return "h";
    case GateKind::s: return "s";
    case GateKind::t: return "t";
    case GateKind::tdg: return "tdg";
    case GateKind::u1: return "u1";
    case GateKind::cx: return "cx";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing.

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  int line = 1, col = 1;

  bool eof() const { return i >= s.size(); }
  char peek() const { return s[i]; }
  void advance() {
    if (s[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }
  void skip() {
    while (!eof()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (peek() == '/' && i + 1 < s.size() && s[i + 1] == '/') {
        while (!eof() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }
  void expect(char c, const char* what) {
    if (eof() || peek() != c)
      throw CircuitError(std::string("expected ") + what, line, col);
    advance();
  }
};

int parse_operand(Cursor& cur) {
  cur.skip();
  int line = cur.line, col = cur.col;
  cur.expect('q', "a qubit operand q[i]");
  cur.expect('[', "a qubit operand q[i]");
  std::string digits;
  while (!cur.eof() && (std::isdigit(static_cast<unsigned char>(cur.peek())) ||
                        cur.peek() == '-')) {
    digits += cur.peek();
    cur.advance();
  }
  cur.expect(']', "a qubit operand q[i]");
  if (digits != "0" && digits != "1")
    throw CircuitError("qubit index out of range: q[" + digits + "]", line,
                       col);
  return digits == "0" ? 0 : 1;
}

double parse_angle(Cursor& cur, int line, int col) {
  cur.skip();
  if (cur.eof() || cur.peek() != '(')
    throw CircuitError("u1 needs an angle in radians", line, col);
  cur.advance();
  std::string body;
  while (!cur.eof() && cur.peek() != ')') {
    body += cur.peek();
    cur.advance();
  }
  if (cur.eof()) throw CircuitError("malformed angle: missing ')'", line, col);
  cur.advance();
  const char* begin = body.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || *end != '\0')
    throw CircuitError("malformed angle: '" + body + "'", line, col);
  return value;
}

}  // namespace

Circuit Circuit::parse(const std::string& source) {
  Circuit c;
  Cursor cur{source};
  while (true) {
    cur.skip();
    if (cur.eof()) break;
    int line = cur.line, col = cur.col;
    std::string word;
    while (!cur.eof() &&
           std::isalnum(static_cast<unsigned char>(cur.peek()))) {
      word += cur.peek();
      cur.advance();
    }
    CircuitOp op;
    op.line = line;
    op.column = col;
    if (word == "x") op.kind = GateKind::x;
    else if (word == "h") op.kind = GateKind::h;
    else if (word == "s") op.kind = GateKind::s;
    else if (word == "t") op.kind = GateKind::t;
    else if (word == "tdg") op.kind = GateKind::tdg;
    else if (word == "u1") op.kind = GateKind::u1;
    else if (word == "cx") op.kind = GateKind::cx;
    else
      throw CircuitError("unknown mnemonic: '" + word + "'", line, col);

    if (op.kind == GateKind::u1) {
      op.angle = parse_angle(cur, line, col);
    } else {
      cur.skip();
      if (!cur.eof() && cur.peek() == '(')
        throw CircuitError(word + " takes no angle", cur.line, cur.col);
    }
    op.q1 = parse_operand(cur);
    if (op.kind == GateKind::cx) {
      cur.skip();
      cur.expect(',', "',' and a target operand");
      op.q2 = parse_operand(cur);
      if (op.q2 == op.q1)
        throw CircuitError("cx needs two distinct qubits", line, col);
    }
    cur.skip();
    cur.expect(';', "';'");
    c.ops.push_back(op);
  }
  return c;
}

std::string Circuit::pretty() const {
  std::string out;
  char buf[64];
  for (const auto& op : ops) {
    switch (op.kind) {
      case GateKind::u1:
        std::snprintf(buf, sizeof buf, "u1(%.17g) q[%d];\n", op.angle, op.q1);
        break;
      case GateKind::cx:
        std::snprintf(buf, sizeof buf, "cx q[%d], q[%d];\n", op.q1, op.q2);
        break;
      default:
        std::snprintf(buf, sizeof buf, "%s q[%d];\n", to_string(op.kind),
                      op.q1);
        break;
    }
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ideal matrices.

namespace {

Eigen::Matrix2cd mnemonic_matrix(const CircuitOp& op) {
  using std::polar;
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (op.kind) {
    case GateKind::x:
      m << 0, 1, 1, 0;
      break;
    case GateKind::h:
      m << 1, 1, 1, -1;
      m /= std::sqrt(2.0);
      break;
    case GateKind::s:
      m << 1, 0, 0, cdouble(0, 1);
      break;
    case GateKind::t:
      m << 1, 0, 0, polar(1.0, pi / 4);
      break;
    case GateKind::tdg:
      m << 1, 0, 0, polar(1.0, -pi / 4);
      break;
    case GateKind::u1:
      m << 1, 0, 0, polar(1.0, op.angle);
      break;
    case GateKind::cx:
      break;  // handled by the caller
  }
  return m;
}

}  // namespace

Eigen::Matrix4cd Circuit::ideal() const {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  for (const auto& op : ops) {
    if (op.kind == GateKind::cx)
      u = ideal_cnot(op.q1, op.q2) * u;
    else
      u = on_qubit(mnemonic_matrix(op), op.q1) * u;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Published programs.

namespace {

void push(Circuit& c, GateKind kind, int q1, int q2 = -1, double angle = 0.0) {
  c.ops.push_back({kind, q1, q2, angle, 0, 0});
}

}  // namespace

Circuit qft_circuit() {
  Circuit c;
  push(c, GateKind::h, 0);
  push(c, GateKind::tdg, 0);
  push(c, GateKind::cx, 1, 0);
  push(c, GateKind::tdg, 0);
  push(c, GateKind::cx, 1, 0);
  push(c, GateKind::s, 0);
  push(c, GateKind::t, 1);
  push(c, GateKind::h, 1);
  push(c, GateKind::cx, 0, 1);
  push(c, GateKind::cx, 1, 0);
  push(c, GateKind::cx, 0, 1);
  return c;
}

Circuit qft4_circuit() {
  Circuit c, unit = qft_circuit();
  for (int r = 0; r < 4; ++r)
    c.ops.insert(c.ops.end(), unit.ops.begin(), unit.ops.end());
  return c;
}

Circuit singlet_circuit(double theta1, double theta2) {
  Circuit c;
  push(c, GateKind::x, 0);
  push(c, GateKind::x, 1);
  push(c, GateKind::h, 0);
  push(c, GateKind::cx, 0, 1);
  push(c, GateKind::h, 0);
  push(c, GateKind::h, 1);
  push(c, GateKind::u1, 0, -1, theta1);
  push(c, GateKind::u1, 1, -1, theta2);
  push(c, GateKind::h, 0);
  push(c, GateKind::h, 1);
  return c;
}

Circuit cnot_chain_circuit(int n) {
  Circuit c;
  for (int r = 0; r < n; ++r) push(c, GateKind::cx, 0, 1);
  return c;
}

// ---------------------------------------------------------------------------
// Decomposition and compilation.

std::vector<Primitive> decompose(const Circuit& c) {
  std::vector<Primitive> out;
  for (int n = 0; n < static_cast<int>(c.ops.size()); ++n) {
    const auto& op = c.ops[n];
    switch (op.kind) {
      case GateKind::x:
        out.push_back({Primitive::Kind::x_full, op.q1, -1, 0.0, n});
        break;
      case GateKind::h:
        out.push_back({Primitive::Kind::z, op.q1, -1, 0.5 * pi, n});
        out.push_back({Primitive::Kind::x_half, op.q1, -1, 0.0, n});
        out.push_back({Primitive::Kind::z, op.q1, -1, 0.5 * pi, n});
        break;
      case GateKind::s:
        out.push_back({Primitive::Kind::z, op.q1, -1, 0.5 * pi, n});
        break;
      case GateKind::t:
        out.push_back({Primitive::Kind::z, op.q1, -1, 0.25 * pi, n});
        break;
      case GateKind::tdg:
        out.push_back({Primitive::Kind::z, op.q1, -1, -0.25 * pi, n});
        break;
      case GateKind::u1:
        out.push_back({Primitive::Kind::z, op.q1, -1, op.angle, n});
        break;
      case GateKind::cx:
        out.push_back({Primitive::Kind::cnot, op.q1, op.q2, 0.0, n});
        break;
    }
  }
  return out;
}

Eigen::Matrix4cd primitive_ideal_product(const std::vector<Primitive>& prims) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  for (const auto& pr : prims) {
    switch (pr.kind) {
      case Primitive::Kind::x_half:
        u = on_qubit(rotation_x(0.5 * pi), pr.q1) * u;
        break;
      case Primitive::Kind::x_full:
        u = on_qubit(rotation_x(pi), pr.q1) * u;
        break;
      case Primitive::Kind::z:
        u = on_qubit(rotation_z(pr.angle), pr.q1) * u;
        break;
      case Primitive::Kind::cnot:
        u = ideal_cnot(pr.q1, pr.q2) * u;
        break;
    }
  }
  return u;
}

void compile_onto(ScheduleBuilder& b, const Circuit& c,
                  std::vector<GateProvenance>* provenance) {
  for (const auto& pr : decompose(c)) {
    double t0 = b.time();
    const char* label = "";
    switch (pr.kind) {
      case Primitive::Kind::x_half:
        b.x_half(pr.q1);
        label = "x90";
        break;
      case Primitive::Kind::x_full:
        b.x_full(pr.q1);
        label = "x180";
        break;
      case Primitive::Kind::z:
        b.rz(pr.q1, pr.angle);
        label = "vz";
        break;
      case Primitive::Kind::cnot:
        b.cnot(pr.q1, pr.q2);
        label = "cnot";
        break;
    }
    if (provenance)
      provenance->push_back(
          {pr.node, label, t0, b.time(), pr.kind != Primitive::Kind::z});
  }
}

CompiledProgram compile_circuit(const Circuit& c,
                                const CalibratedGateTable& table,
                                CrScheme scheme) {
  ScheduleBuilder b(table, scheme);
  CompiledProgram out;
  compile_onto(b, c, &out.provenance);
  out.schedule = b.schedule();
  out.duration = b.time();
  out.frame = b.frame();
  return out;
}

// ---------------------------------------------------------------------------
// Execution.

OutcomeDistribution run_circuit(const DeviceParameters& dev,
                                const std::array<TransmonEigenbasis, 2>& eig,
                                const CompiledProgram& program, int initial,
                                double tau) {
  if (initial < 0 || initial > 3)
    throw std::invalid_argument("initial state index must be 0..3");
  StateBlock s = StateBlock::zeros(dev.basis, 1);
  s.set_column(0, computational_state(dev.basis, eig, initial >> 1,
                                      initial & 1));
  if (program.duration > 0.0)
    evolve(s, dev, program.schedule, TimeGrid{0.0, program.duration, tau});
  auto amps = computational_amplitudes(s, 0, eig);
  OutcomeDistribution out;
  double total = 0.0;
  for (int m = 0; m < 4; ++m) {
    out.p[m] = std::norm(amps[m]);
    total += out.p[m];
  }
  out.leak = 1.0 - total;
  return out;
}

OutcomeDistribution ideal_outcome(const Circuit& c, int initial) {
  if (initial < 0 || initial > 3)
    throw std::invalid_argument("initial state index must be 0..3");
  Eigen::Matrix4cd u = c.ideal();
  OutcomeDistribution out;
  for (int m = 0; m < 4; ++m) out.p[m] = std::norm(u(m, initial));
  return out;
}

ParityAverages parity_averages(const std::array<double, 4>& p) {
  return {p[0] + p[1] - p[2] - p[3], p[0] - p[1] + p[2] - p[3],
          p[0] - p[1] - p[2] + p[3]};
}

}  // namespace transmon
