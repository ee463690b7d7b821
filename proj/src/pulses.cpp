#include "transmon/pulses.hpp"

#include "transmon/units.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace transmon {

double gaussian_envelope(double t_local, double T, double amp) {
  if (t_local < 0.0 || t_local > T) return 0.0;
  // sigma = T/4, baseline-subtracted so the envelope vanishes at both ends.
  const double base = std::exp(-2.0);
  double u = t_local - 0.5 * T;
  double e = std::exp(-8.0 * u * u / (T * T));
  return amp * (e - base) / (1.0 - base);
}

double gaussian_derivative_envelope(double t_local, double T, double amp) {
  if (t_local < 0.0 || t_local > T) return 0.0;
  const double base = std::exp(-2.0);
  double u = t_local - 0.5 * T;
  double e = std::exp(-8.0 * u * u / (T * T));
  return amp * (-16.0 * u / (T * T)) * e / (1.0 - base);
}

double flat_top_envelope(double t_local, double t_cr, double amp) {
  double total = t_cr + 2.0 * flat_top_rise;
  if (t_local < 0.0 || t_local > total) return 0.0;
  double s2 = 2.0 * flat_top_rise_sigma * flat_top_rise_sigma;
  if (t_local < flat_top_rise) {
    double u = t_local - flat_top_rise;
    return amp * std::exp(-u * u / s2);
  }
  if (t_local > flat_top_rise + t_cr) {
    double u = t_local - flat_top_rise - t_cr;
    return amp * std::exp(-u * u / s2);
  }
  return amp;
}

double envelope_value(const DriveTerm& term, double t) {
  if (t < term.t_on || t >= term.t_off) return 0.0;
  double tl = t - term.t_on;
  double T = term.t_off - term.t_on;
  switch (term.kind) {
    case EnvelopeKind::gaussian:
      return gaussian_envelope(tl, T, term.amplitude);
    case EnvelopeKind::gaussian_derivative:
      return gaussian_derivative_envelope(tl, T, term.amplitude);
    case EnvelopeKind::flat_top:
      return flat_top_envelope(tl, T - 2.0 * flat_top_rise, term.amplitude);
  }
  return 0.0;
}

void PulseSchedule::append(const DriveTerm& term) {
  if (term.t_off <= term.t_on)
    throw std::invalid_argument("drive term must have positive duration");
  if (term.qubit != 0 && term.qubit != 1)
    throw std::invalid_argument("drive term qubit must be 0 or 1");
  terms.push_back(term);
  duration = std::max(duration, term.t_off);
}

std::array<double, 2> PulseSchedule::sample(double t) const {
  std::array<double, 2> ng{0.0, 0.0};
  for (const auto& term : terms) {
    double env = envelope_value(term, t);
    if (env != 0.0) ng[term.qubit] += env * std::cos(term.freq * t - term.phase);
  }
  return ng;
}

double PulseSchedule::max_carrier_freq() const {
  double w = 0.0;
  for (const auto& term : terms) w = std::max(w, std::abs(term.freq));
  return w;
}

DriveSampler::DriveSampler(const PulseSchedule& schedule)
    : schedule_(schedule) {
  order_.resize(schedule.terms.size());
  for (size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
    return schedule.terms[a].t_on < schedule.terms[b].t_on;
  });
}

std::array<double, 2> DriveSampler::sample(double t) {
  while (next_ < order_.size() &&
         schedule_.terms[order_[next_]].t_on <= t)
    active_.push_back(order_[next_++]);
  std::erase_if(active_,
                [&](int i) { return t >= schedule_.terms[i].t_off; });
  std::array<double, 2> ng{0.0, 0.0};
  for (int i : active_) {
    const DriveTerm& term = schedule_.terms[i];
    double env = envelope_value(term, t);
    if (env != 0.0) ng[term.qubit] += env * std::cos(term.freq * t - term.phase);
  }
  return ng;
}

const char* to_string(CrScheme scheme) {
  switch (scheme) {
    case CrScheme::cr1: return "cr1";
    case CrScheme::cr2: return "cr2";
    case CrScheme::cr4: return "cr4";
  }
  return "?";
}

CrScheme cr_scheme_from_string(const std::string& name) {
  if (name == "cr1") return CrScheme::cr1;
  if (name == "cr2") return CrScheme::cr2;
  if (name == "cr4") return CrScheme::cr4;
  throw std::invalid_argument("unknown CR scheme: " + name);
}

CalibratedGateTable CalibratedGateTable::defaults() {
  CalibratedGateTable t;
  t.omega_bar = {ghz_to_radns(5.346), ghz_to_radns(5.118)};
  t.gd[0][0] = {0.00222, 0.231, -0.00202, 0.00328};
  t.gd[0][1] = {0.00444, 0.219, -0.00354, 0.00283};
  t.gd[1][0] = {0.00227, 0.289, -0.00013, -0.00159};
  t.gd[1][1] = {0.00454, 0.224, -0.00026, -0.00339};
  t.gf[0][0] = {41.86, 0.079, 0.54, 0.0062, 0.00, -2.10, 0.04};
  t.gf[0][1] = {128.19, 0.094, -2.89, -0.0016, 1.72, 3.25, 1.40};
  t.gf[1][0] = {102.97, 0.011, 0.0, 0.0, 0.0, 0.00, 0.00};
  t.gf[1][1] = {71.56, 0.071, 0.0, 0.0, 0.0, 0.00, 0.00};
  t.gf[2][0] = {50.24, 0.010, 0.0, 0.0, 0.0, 0.00, -0.01};
  t.gf[2][1] = {30.16, 0.069, 0.0, 0.0, 0.0, -0.01, 0.00};
  return t;
}

namespace {

double parse_field(const std::string& tok, const std::string& ctx) {
  if (tok == "-") return 0.0;
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(ctx + ": bad numeric field '" + tok + "'");
  }
}

}  // namespace

CalibratedGateTable CalibratedGateTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pulse table: " + path);
  CalibratedGateTable t;  // zero-initialized; file must define everything
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    std::string ctx = path + ":" + std::to_string(lineno);
    if (first.front() == '[') {
      section = first;
      continue;
    }
    if (section == "[frame]") {
      std::string eq, val;
      if (!(ls >> eq >> val) || eq != "=")
        throw std::runtime_error(ctx + ": expected 'key = value'");
      double ghz = parse_field(val, ctx);
      if (first == "omega_bar1") t.omega_bar[0] = ghz_to_radns(ghz);
      else if (first == "omega_bar2") t.omega_bar[1] = ghz_to_radns(ghz);
      else throw std::runtime_error(ctx + ": unknown frame key '" + first + "'");
    } else if (section == "[gd]") {
      std::array<std::string, 4> f;
      if (!(ls >> f[0] >> f[1] >> f[2] >> f[3]))
        throw std::runtime_error(ctx + ": expected 'name omega0 beta vz1 vz2'");
      int q;
      int a;
      if (first == "gd1_half") q = 0, a = 0;
      else if (first == "gd1_full") q = 0, a = 1;
      else if (first == "gd2_half") q = 1, a = 0;
      else if (first == "gd2_full") q = 1, a = 1;
      else throw std::runtime_error(ctx + ": unknown gd row '" + first + "'");
      t.gd[q][a] = {parse_field(f[0], ctx), parse_field(f[1], ctx),
                    parse_field(f[2], ctx), parse_field(f[3], ctx)};
    } else if (section == "[gf]") {
      std::array<std::string, 7> f;
      if (!(ls >> f[0] >> f[1] >> f[2] >> f[3] >> f[4] >> f[5] >> f[6]))
        throw std::runtime_error(
            ctx + ": expected 'name t_cr omega_cr phi_cr omega_cancel "
                  "phi_cancel vz1 vz2'");
      if (first.size() != 7 || first.substr(0, 2) != "gf" ||
          first.substr(3, 1) != "_")
        throw std::runtime_error(ctx + ": unknown gf row '" + first + "'");
      int c = first[2] == '1' ? 0 : first[2] == '2' ? 1 : -1;
      int s;
      std::string scheme = first.substr(4);
      if (scheme == "cr1") s = 0;
      else if (scheme == "cr2") s = 1;
      else if (scheme == "cr4") s = 2;
      else s = -1;
      if (c < 0 || s < 0)
        throw std::runtime_error(ctx + ": unknown gf row '" + first + "'");
      t.gf[s][c] = {parse_field(f[0], ctx), parse_field(f[1], ctx),
                    parse_field(f[2], ctx), parse_field(f[3], ctx),
                    parse_field(f[4], ctx), parse_field(f[5], ctx),
                    parse_field(f[6], ctx)};
    } else {
      throw std::runtime_error(ctx + ": content outside any section");
    }
  }
  if (!(t.omega_bar[0] > 0.0) || !(t.omega_bar[1] > 0.0))
    throw std::runtime_error(path + ": [frame] frequencies missing");
  return t;
}

void CalibratedGateTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write pulse table: " + path);
  char buf[1024];
  std::snprintf(buf, sizeof(buf),
                "[frame]\nomega_bar1 = %.17g\nomega_bar2 = %.17g\n\n",
                radns_to_ghz(omega_bar[0]), radns_to_ghz(omega_bar[1]));
  out << buf;
  out << "[gd]\n# name omega0 beta vz1 vz2\n";
  static const char* gd_names[2][2] = {{"gd1_half", "gd1_full"},
                                       {"gd2_half", "gd2_full"}};
  for (int q = 0; q < 2; ++q)
    for (int a = 0; a < 2; ++a) {
      const auto& p = gd[q][a];
      std::snprintf(buf, sizeof(buf), "%s %.17g %.17g %.17g %.17g\n",
                    gd_names[q][a], p.omega0, p.beta, p.vz1, p.vz2);
      out << buf;
    }
  out << "\n[gf]\n# name t_cr omega_cr phi_cr omega_cancel phi_cancel vz1 "
         "vz2\n";
  static const char* schemes[3] = {"cr1", "cr2", "cr4"};
  for (int s = 0; s < 3; ++s)
    for (int c = 0; c < 2; ++c) {
      const auto& p = gf[s][c];
      std::snprintf(buf, sizeof(buf),
                    "gf%d_%s %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                    c + 1, schemes[s], p.t_cr, p.omega_cr, p.phi_cr,
                    p.omega_cancel, p.phi_cancel, p.vz1, p.vz2);
      out << buf;
    }
}

double cnot_duration(CrScheme scheme, const CrPulseParams& params) {
  double flat = params.t_cr + 2.0 * flat_top_rise;
  switch (scheme) {
    case CrScheme::cr1: return flat;
    case CrScheme::cr2: return 2.0 * single_gate_duration + 2.0 * flat;
    case CrScheme::cr4: return 4.0 * single_gate_duration + 4.0 * flat;
  }
  return 0.0;
}

double emit_drag(PulseSchedule& out, double t_on, int qubit, double omega0,
                 double beta, double drive_freq, double gamma) {
  double t_off = t_on + single_gate_duration;
  out.append({qubit, EnvelopeKind::gaussian, t_on, t_off, omega0, drive_freq,
              gamma});
  if (beta * omega0 != 0.0)
    out.append({qubit, EnvelopeKind::gaussian_derivative, t_on, t_off,
                beta * omega0, drive_freq, gamma + 0.5 * pi});
  return t_off;
}

double emit_flat_top(PulseSchedule& out, double t_on, int qubit, double amp,
                     double t_cr, double drive_freq, double gamma) {
  double t_off = t_on + t_cr + 2.0 * flat_top_rise;
  if (amp != 0.0)
    out.append({qubit, EnvelopeKind::flat_top, t_on, t_off, amp, drive_freq,
                gamma});
  return t_off;
}

ScheduleBuilder::ScheduleBuilder(const CalibratedGateTable& table,
                                 CrScheme scheme, double t_start,
                                 PhaseFrame frame)
    : table_(table), scheme_(scheme), frame_(frame), t_(t_start) {
  if (!(table.omega_bar[0] > 0.0) || !(table.omega_bar[1] > 0.0))
    throw std::invalid_argument(
        "gate table has no calibrated drive frequencies");
}

void ScheduleBuilder::mark(const std::string& label) {
  boundaries_.push_back({label, t_, frame_});
}

void ScheduleBuilder::x_with(int qubit, int angle_idx,
                             const SingleQubitPulseParams& p) {
  t_ = emit_drag(schedule_, t_, qubit, p.omega0, p.beta,
                 table_.omega_bar[qubit], -frame_.phi[qubit]);
  mark(angle_idx == 0 ? "x90" : "x180");
}

void ScheduleBuilder::x_half(int qubit) {
  const auto& p = table_.gd[qubit][0];
  x_with(qubit, 0, p);
  frame_.phi[0] += p.vz1;
  frame_.phi[1] += p.vz2;
  boundaries_.back().frame = frame_;
}

void ScheduleBuilder::x_full(int qubit) {
  const auto& p = table_.gd[qubit][1];
  x_with(qubit, 1, p);
  frame_.phi[0] += p.vz1;
  frame_.phi[1] += p.vz2;
  boundaries_.back().frame = frame_;
}

void ScheduleBuilder::rz(int qubit, double phi) {
  frame_.phi[qubit] += phi;
  boundaries_.push_back({"rz", t_, frame_});
}

void ScheduleBuilder::emit_cnot_block(int control, int target,
                                      const CrPulseParams& p) {
  double wc = table_.omega_bar[control];
  double wt = table_.omega_bar[target];
  double xi = wc > wt ? 0.0 : pi;
  double th_t = frame_.phi[target];
  const auto& gd_c = table_.gd[control][1];  // pi pulse on the control
  const auto& gd_t_half = table_.gd[target][0];
  const auto& gd_t_full = table_.gd[target][1];

  auto cr_slot = [&](double offset) {
    double end = emit_flat_top(schedule_, t_, control, p.omega_cr, p.t_cr, wt,
                               p.phi_cr + offset - th_t);
    emit_flat_top(schedule_, t_, target, p.omega_cancel, p.t_cr, wt,
                  p.phi_cancel + offset - th_t);
    t_ = end;
  };

  switch (scheme_) {
    case CrScheme::cr1:
      cr_slot(0.0);
      break;
    case CrScheme::cr2:
      emit_drag(schedule_, t_, target, gd_t_half.omega0, gd_t_half.beta, wt,
                xi - th_t);
      t_ = emit_drag(schedule_, t_, control, gd_c.omega0, gd_c.beta, wc, 0.0);
      cr_slot(0.0);
      t_ = emit_drag(schedule_, t_, control, gd_c.omega0, gd_c.beta, wc,
                     0.5 * pi);
      cr_slot(pi);
      frame_.phi[control] += xi - 0.5 * pi;
      break;
    case CrScheme::cr4:
      t_ = emit_drag(schedule_, t_, target, gd_t_half.omega0, gd_t_half.beta,
                     wt, xi - th_t);
      cr_slot(0.0);
      t_ = emit_drag(schedule_, t_, control, gd_c.omega0, gd_c.beta, wc,
                     0.5 * pi);
      cr_slot(pi);
      t_ = emit_drag(schedule_, t_, target, gd_t_full.omega0, gd_t_full.beta,
                     wt, pi + xi - th_t);
      cr_slot(pi);
      t_ = emit_drag(schedule_, t_, control, gd_c.omega0, gd_c.beta, wc,
                     1.5 * pi);
      cr_slot(0.0);
      frame_.phi[control] += xi - 0.5 * pi;
      break;
  }
}

void ScheduleBuilder::cnot_with(int control, int target,
                                const CrPulseParams& p) {
  if (control == target || control < 0 || control > 1 || target < 0 ||
      target > 1)
    throw std::invalid_argument("cnot needs distinct qubits 0 and 1");
  emit_cnot_block(control, target, p);
  mark("cnot");
}

void ScheduleBuilder::cnot(int control, int target) {
  const auto& p = table_.gf[static_cast<int>(scheme_)][control];
  cnot_with(control, target, p);
  frame_.phi[0] += p.vz1;
  frame_.phi[1] += p.vz2;
  boundaries_.back().frame = frame_;
}

}  // namespace transmon
