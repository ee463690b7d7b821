// pulses.hpp -- drive envelopes, pulse schedules, and the calibrated gate
// table.
//
// A schedule is a list of charge-drive terms; the gate charge seen by qubit q
// at time t is
//
//   n_gq(t) = sum_j env_j(t - t_on_j) * cos(freq_j * t - phase_j)
//
// with the carrier running on absolute time so that phase bookkeeping stays
// coherent across gates.  Virtual Z rotations are tracked in a PhaseFrame:
// a frame angle phi accumulated for a qubit shifts the phase of every later
// pulse that oscillates at that qubit's frequency by -phi.
#pragma once

#include <array>
#include <string>
#include <vector>

namespace transmon {

inline constexpr double single_gate_duration = 83.0;  // ns
inline constexpr double flat_top_rise_sigma = 5.0;    // ns
inline constexpr double flat_top_rise = 3.0 * flat_top_rise_sigma;

enum class EnvelopeKind { gaussian, gaussian_derivative, flat_top };

struct DriveTerm {
  int qubit = 0;  // 0 or 1: which gate charge the term drives
  EnvelopeKind kind = EnvelopeKind::gaussian;
  double t_on = 0.0;
  double t_off = 0.0;
  double amplitude = 0.0;  // dimensionless peak (derivative kind: beta*omega0)
  double freq = 0.0;       // carrier angular frequency, rad/ns
  double phase = 0.0;      // carrier phase offset gamma, rad
};

// Baseline-subtracted Gaussian with sigma = T/4: zero at both ends, peak amp.
double gaussian_envelope(double t_local, double T, double amp);
// Time derivative of the normalized Gaussian shape, scaled by amp.
double gaussian_derivative_envelope(double t_local, double T, double amp);
// Gaussian rise over 3 sigma = 15 ns, flat amp for t_cr, symmetric fall.
double flat_top_envelope(double t_local, double t_cr, double amp);

double envelope_value(const DriveTerm& term, double t);

struct PulseSchedule {
  std::vector<DriveTerm> terms;
  double duration = 0.0;

  void append(const DriveTerm& term);
  // Gate charges (n_g1, n_g2) at absolute time t; linear scan over terms.
  std::array<double, 2> sample(double t) const;
  double max_carrier_freq() const;
};

// Monotone-time sampler with an active-term cursor; one instance per sweep of
// a schedule (times must not decrease between calls).
class DriveSampler {
 public:
  explicit DriveSampler(const PulseSchedule& schedule);
  std::array<double, 2> sample(double t);

 private:
  const PulseSchedule& schedule_;
  std::vector<int> order_;   // term indices sorted by t_on
  std::vector<int> active_;
  size_t next_ = 0;
};

struct PhaseFrame {
  std::array<double, 2> phi{0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Calibrated pulse parameters.

struct SingleQubitPulseParams {
  double omega0 = 0.0;  // peak amplitude
  double beta = 0.0;    // derivative-quadrature coefficient, ns
  double vz1 = 0.0;     // trailing frame corrections, rad
  double vz2 = 0.0;
};

struct CrPulseParams {
  double t_cr = 0.0;         // flat-top length, ns
  double omega_cr = 0.0;     // control-drive amplitude
  double phi_cr = 0.0;       // control-drive phase, rad
  double omega_cancel = 0.0; // target cancellation amplitude
  double phi_cancel = 0.0;
  double vz1 = 0.0;
  double vz2 = 0.0;
};

enum class CrScheme { cr1 = 0, cr2 = 1, cr4 = 2 };

const char* to_string(CrScheme scheme);
CrScheme cr_scheme_from_string(const std::string& name);

struct CalibratedGateTable {
  std::array<double, 2> omega_bar{};     // dressed frequencies, rad/ns
  // gd[qubit][0] is the pi/2 pulse, gd[qubit][1] the pi pulse.
  SingleQubitPulseParams gd[2][2];
  // gf[scheme][control qubit]
  CrPulseParams gf[3][2];

  static CalibratedGateTable defaults();
  static CalibratedGateTable load(const std::string& path);
  void save(const std::string& path) const;
};

double cnot_duration(CrScheme scheme, const CrPulseParams& params);

// ---------------------------------------------------------------------------
// Emission.  All emitters append drive terms starting at t_on and return the
// end time of the emitted block.

double emit_drag(PulseSchedule& out, double t_on, int qubit, double omega0,
                 double beta, double drive_freq, double gamma);
double emit_flat_top(PulseSchedule& out, double t_on, int qubit, double amp,
                     double t_cr, double drive_freq, double gamma);

// Gate-level builder: tracks the time cursor, the virtual-Z frame, and gate
// boundaries.  Gates are scheduled back to back.
class ScheduleBuilder {
 public:
  struct Boundary {
    std::string label;
    double t_end = 0.0;
    PhaseFrame frame;  // frame in effect after the gate
  };

  // t_start/frame resume a program mid-stream; drive carriers run on
  // absolute time, so a resumed suffix composes with the prefix evolution.
  ScheduleBuilder(const CalibratedGateTable& table, CrScheme scheme,
                  double t_start = 0.0, PhaseFrame frame = {});

  void x_half(int qubit);
  void x_full(int qubit);
  void rz(int qubit, double phi);
  void cnot(int control, int target);

  // Trial-parameter variants used during calibration; these skip the stored
  // trailing frame corrections (the correction is fitted afterwards).
  void x_with(int qubit, int angle_idx, const SingleQubitPulseParams& p);
  void cnot_with(int control, int target, const CrPulseParams& p);

  const PulseSchedule& schedule() const { return schedule_; }
  const PhaseFrame& frame() const { return frame_; }
  double time() const { return t_; }
  const std::vector<Boundary>& boundaries() const { return boundaries_; }

 private:
  void emit_cnot_block(int control, int target, const CrPulseParams& p);
  void mark(const std::string& label);

  const CalibratedGateTable& table_;
  CrScheme scheme_;
  PulseSchedule schedule_;
  PhaseFrame frame_;
  double t_ = 0.0;
  std::vector<Boundary> boundaries_;
};

}  // namespace transmon
