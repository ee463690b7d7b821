#include "transmon/calibrate.hpp"

#include "transmon/gates.hpp"
#include "transmon/metrics.hpp"
#include "transmon/optim.hpp"
#include "transmon/solver.hpp"
#include "transmon/units.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <limits>

namespace transmon {

CalibrationProfile CalibrationProfile::full() { return {}; }

CalibrationProfile CalibrationProfile::fast() {
  CalibrationProfile p;
  p.tau = 1e-3;
  p.freq_tau = 1e-3;
  p.freq_window = 200.0;
  p.nm_budget = 25;
  p.nm_tol = 1e-7;
  p.seed_skip = 0.02;
  return p;
}

namespace {

struct LinearFit {
  double slope, rms;
};

LinearFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  size_t n = t.size();
  double tm = 0.0, ym = 0.0;
  for (size_t i = 0; i < n; ++i) {
    tm += t[i];
    ym += y[i];
  }
  tm /= n;
  ym /= n;
  double stt = 0.0, sty = 0.0;
  for (size_t i = 0; i < n; ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    sty += (t[i] - tm) * (y[i] - ym);
  }
  double slope = sty / stt;
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - ym - slope * (t[i] - tm);
    ss += r * r;
  }
  return {slope, std::sqrt(ss / n)};
}

}  // namespace

FrequencyFit calibrate_frequencies(const DeviceParameters& dev,
                                   const std::array<TransmonEigenbasis, 2>& eig,
                                   const CalibrationProfile& profile) {
  StateBlock s = StateBlock::zeros(dev.basis, 1);
  {
    // Equal superposition on both qubits, resonator empty.
    std::vector<cdouble> amp(dev.basis.dim(), 0.0);
    for (int m1 = 0; m1 < 2; ++m1)
      for (int m2 = 0; m2 < 2; ++m2) {
        StateVector c = computational_state(dev.basis, eig, m1, m2);
        for (int i = 0; i < dev.basis.dim(); ++i) amp[i] += 0.5 * c.amp[i];
      }
    StateVector psi{dev.basis, StateRepr::charge, std::move(amp)};
    s.set_column(0, psi);
  }

  long every = std::llround(profile.freq_sample_dt / profile.freq_tau);
  if (every < 1)
    throw CalibrationError("frequency sampling finer than the step size");

  std::vector<double> ts{0.0};
  std::array<std::vector<double>, 2> phase;
  std::array<double, 2> prev{}, acc{};
  for (int q = 0; q < 2; ++q) {
    prev[q] = std::arg(qubit_rdm(s, 0, q, eig)(0, 1));
    acc[q] = prev[q];
    phase[q].push_back(acc[q]);
  }

  PulseSchedule idle;
  TimeGrid grid{0.0, profile.freq_window, profile.freq_tau};
  evolve(s, dev, idle, grid,
         [&](long step, double t, StateBlock& block) {
           if ((step + 1) % every != 0) return;
           ts.push_back(t);
           for (int q = 0; q < 2; ++q) {
             double a = std::arg(qubit_rdm(block, 0, q, eig)(0, 1));
             acc[q] += std::remainder(a - prev[q], two_pi);
             prev[q] = a;
             phase[q].push_back(acc[q]);
           }
         });

  FrequencyFit fit;
  for (int q = 0; q < 2; ++q) {
    LinearFit lf = fit_line(ts, phase[q]);
    fit.omega_bar[q] = lf.slope;
    fit.residual[q] = lf.rms;
    if (lf.rms > 0.1)
      throw CalibrationError("frequency fit did not stay linear (qubit " +
                             std::to_string(q + 1) + ")");
  }
  return fit;
}

double drag_amplitude_seed(const DeviceParameters& dev, int qubit,
                           double angle) {
  double ec = dev.ec[qubit], ej = dev.ej[qubit];
  double charge01 = std::pow(ej / (8.0 * ec), 0.25);
  double b = 2.0 * ec * charge01;
  const double T = single_gate_duration;
  double base = std::exp(-2.0);
  double area = (T * std::sqrt(pi / 8.0) * std::erf(std::sqrt(2.0)) - T * base) /
                (1.0 - base);
  return angle / (b * area);
}

double drag_beta_seed(const DeviceParameters& dev, int qubit) {
  if (dev.alpha[qubit] == 0.0)
    throw CalibrationError("device has no anharmonicity to lean on");
  return -0.5 / dev.alpha[qubit];
}

Eigen::Matrix4cd single_gate_map(const DeviceParameters& dev,
                                 const std::array<TransmonEigenbasis, 2>& eig,
                                 const CalibratedGateTable& table, int qubit,
                                 int angle_idx, const SingleQubitPulseParams& p,
                                 double tau) {
  ScheduleBuilder b(table, CrScheme::cr2);
  b.x_with(qubit, angle_idx, p);
  return computational_map(dev, eig, b.schedule(), b.time(), tau,
                           table.omega_bar, b.frame().phi);
}

Eigen::Matrix4cd cnot_gate_map(const DeviceParameters& dev,
                               const std::array<TransmonEigenbasis, 2>& eig,
                               const CalibratedGateTable& table,
                               CrScheme scheme, int control,
                               const CrPulseParams& p, double tau) {
  ScheduleBuilder b(table, scheme);
  b.cnot_with(control, 1 - control, p);
  return computational_map(dev, eig, b.schedule(), b.time(), tau,
                           table.omega_bar, b.frame().phi);
}

GateFit optimize_single_qubit_gate(const DeviceParameters& dev,
                                   const std::array<TransmonEigenbasis, 2>& eig,
                                   CalibratedGateTable& table, int qubit,
                                   int angle_idx,
                                   const CalibrationProfile& profile) {
  double angle = angle_idx == 0 ? 0.5 * pi : pi;
  Eigen::Matrix4cd ideal = on_qubit(rotation_x(angle), qubit);

  SingleQubitPulseParams seed = table.gd[qubit][angle_idx];
  if (seed.omega0 <= 0.0) {
    seed.omega0 = drag_amplitude_seed(dev, qubit, angle);
    seed.beta = drag_beta_seed(dev, qubit);
  }

  int evals = 0;
  std::vector<double> trajectory;
  auto objective = [&](const std::vector<double>& x) {
    ++evals;
    SingleQubitPulseParams p{x[0], x[1], 0.0, 0.0};
    double v = corrected_discrepancy(
        single_gate_map(dev, eig, table, qubit, angle_idx, p, profile.tau),
        ideal);
    trajectory.push_back(v);
    return v;
  };

  std::vector<double> best{seed.omega0, seed.beta};
  double value = objective(best);
  // Even a good seed can carry a rotation-angle offset of a few 1e-3 that
  // barely moves the objective yet integrates over repeated applications, so
  // single-qubit fits always refine; only the simplex scale depends on the
  // seed quality.
  if (profile.nm_budget > evals) {
    bool near = value < 0.01;
    std::vector<double> steps{(near ? 0.005 : 0.05) * seed.omega0,
                              (near ? 0.02 : 0.05) * std::max(seed.beta, 0.05)};
    auto res = nelder_mead(objective, best, steps, profile.nm_tol,
                           profile.nm_budget - evals);
    if (res.value < value) {
      best = res.x;
      value = res.value;
    }
  }
  if (value > 0.5)
    throw CalibrationError("single-qubit fit stayed poor (qubit " +
                           std::to_string(qubit + 1) + ")");

  SingleQubitPulseParams fitted{best[0], best[1], 0.0, 0.0};
  Eigen::Matrix4cd m =
      single_gate_map(dev, eig, table, qubit, angle_idx, fitted, profile.tau);
  auto phi = vz_phase_correction(m, ideal);
  table.gd[qubit][angle_idx] = {best[0], best[1], phi[0], phi[1]};
  return {value, evals, std::move(trajectory)};
}

namespace {

// Rotation generator (angle times axis) of the closest SU(2) element to one
// control block of a computational map, taken in the branch nearest `prev` so
// an amplitude ramp unwraps continuously.
Eigen::Vector3d block_generator(const Eigen::Matrix4cd& m, int control, int b,
                                const Eigen::Vector3d& prev) {
  Eigen::Matrix2cd t;
  auto idx = [&](int target) {
    return control == 0 ? 2 * b + target : 2 * target + b;
  };
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) t(r, c) = m(idx(r), idx(c));
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(
      t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2cd w = svd.matrixU() * svd.matrixV().adjoint();
  w /= std::sqrt(w.determinant());
  const std::complex<double> ih(0.0, 0.5);
  double c0 = 0.5 * w.trace().real();
  Eigen::Vector3d s((ih * (w(0, 1) + w(1, 0))).real(),
                    (0.5 * (w(1, 0) - w(0, 1))).real(),
                    (ih * (w(0, 0) - w(1, 1))).real());
  double sn = s.norm();
  double theta = 2.0 * std::atan2(sn, c0);
  Eigen::Vector3d axis =
      sn > 1e-12 ? Eigen::Vector3d(s / sn) : Eigen::Vector3d::UnitX();
  Eigen::Vector3d best = theta * axis;
  double best_d = (best - prev).norm();
  for (int eps : {1, -1})
    for (int k = -1; k <= 1; ++k) {
      Eigen::Vector3d v = (eps * theta + 2.0 * pi * k) * (eps * axis);
      double d = (v - prev).norm();
      if (d < best_d) {
        best = v;
        best_d = d;
      }
    }
  return best;
}

// Rebuilds a direct-scheme seed whose cancellation tone misses the actual
// unconditional rotation: measure the cancellation response once, ramp the
// drive amplitude until the conditional angle between the control blocks
// reaches pi, then size and orient the cancellation to null the
// unconditional part at that amplitude.
CrPulseParams reseed_direct_cnot(const DeviceParameters& dev,
                                 const std::array<TransmonEigenbasis, 2>& eig,
                                 const CalibratedGateTable& table,
                                 CrScheme scheme, int control,
                                 const CrPulseParams& seed, double tau) {
  CrPulseParams probe = seed;
  probe.omega_cr = 0.0;
  probe.omega_cancel = 2.5e-4;
  probe.phi_cancel = 0.0;
  probe.vz1 = probe.vz2 = 0.0;
  Eigen::Vector3d vc = Eigen::Vector3d::Zero();
  for (int tries = 0; tries < 3; ++tries) {
    Eigen::Matrix4cd mc =
        cnot_gate_map(dev, eig, table, scheme, control, probe, tau);
    vc = block_generator(mc, control, 0, Eigen::Vector3d::Zero());
    if (vc.norm() < 2.0) break;  // below the wrap, so the angle is trusted
    probe.omega_cancel *= 0.25;
  }
  double canc_gain = std::hypot(vc[0], vc[1]) / probe.omega_cancel;
  double canc_axis = std::atan2(vc[1], vc[0]);
  if (!(canc_gain > 0.0)) return seed;

  Eigen::Vector3d v0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d v1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d prev_v0 = v0;
  double prev_omega = 0.0, prev_gap = 0.0;
  for (int i = 1; i <= 8; ++i) {
    double omega = 0.25 * i * seed.omega_cr;
    CrPulseParams s = seed;
    s.omega_cr = omega;
    s.omega_cancel = 0.0;
    s.vz1 = s.vz2 = 0.0;
    Eigen::Matrix4cd m =
        cnot_gate_map(dev, eig, table, scheme, control, s, tau);
    v0 = block_generator(m, control, 0, v0);
    v1 = block_generator(m, control, 1, v1);
    double gap = (v1 - v0).norm();
    if (gap >= pi) {
      double f = (pi - prev_gap) / (gap - prev_gap);
      Eigen::Vector3d v0s = prev_v0 + f * (v0 - prev_v0);
      CrPulseParams out = seed;
      out.omega_cr = prev_omega + f * (omega - prev_omega);
      out.omega_cancel = std::hypot(v0s[0], v0s[1]) / canc_gain;
      out.phi_cancel = std::atan2(-v0s[1], -v0s[0]) - canc_axis;
      out.vz1 = out.vz2 = 0.0;
      return out;
    }
    prev_omega = omega;
    prev_gap = gap;
    prev_v0 = v0;
  }
  return seed;
}

}  // namespace

GateFit optimize_cnot_gate(const DeviceParameters& dev,
                           const std::array<TransmonEigenbasis, 2>& eig,
                           CalibratedGateTable& table, CrScheme scheme,
                           int control, const CalibrationProfile& profile) {
  Eigen::Matrix4cd ideal = ideal_cnot(control, 1 - control);
  CrPulseParams seed = table.gf[static_cast<int>(scheme)][control];
  if (seed.t_cr <= 0.0)
    throw CalibrationError("cross-resonance fit needs a plateau length");

  // The direct scheme fits the drive and cancellation tones; the echoed
  // schemes keep the published shape and fit the drive amplitude alone.
  bool direct = scheme == CrScheme::cr1;
  int evals = 0;
  std::vector<double> trajectory;
  auto with_params = [&](const std::vector<double>& x) {
    CrPulseParams p = seed;
    p.omega_cr = x[0];
    if (direct) {
      p.phi_cr = x[1];
      p.omega_cancel = x[2];
      p.phi_cancel = x[3];
    }
    p.vz1 = p.vz2 = 0.0;
    return p;
  };
  auto objective = [&](const std::vector<double>& x) {
    ++evals;
    double v = corrected_discrepancy(
        cnot_gate_map(dev, eig, table, scheme, control, with_params(x),
                      profile.tau),
        ideal);
    trajectory.push_back(v);
    return v;
  };

  std::vector<double> best{seed.omega_cr};
  std::vector<double> steps{0.05 * seed.omega_cr};
  if (direct) {
    best.insert(best.end(), {seed.phi_cr, seed.omega_cancel, seed.phi_cancel});
    steps.insert(steps.end(),
                 {0.05, 0.05 * std::max(std::abs(seed.omega_cancel), 0.01),
                  0.05});
  }
  double value = objective(best);
  if (direct && value > 0.8) {
    CrPulseParams rs = reseed_direct_cnot(dev, eig, table, scheme, control,
                                          seed, profile.tau);
    std::vector<double> cand{rs.omega_cr, rs.phi_cr, rs.omega_cancel,
                             rs.phi_cancel};
    double cv = objective(cand);
    if (cv < value) {
      best = cand;
      value = cv;
      steps = {0.05 * rs.omega_cr, 0.05,
               0.05 * std::max(std::abs(rs.omega_cancel), 0.01), 0.05};
    }
  }
  if (value > profile.seed_skip && profile.nm_budget > evals) {
    auto res =
        nelder_mead(objective, best, steps, profile.nm_tol,
                    profile.nm_budget - evals);
    if (res.value < value) {
      best = res.x;
      value = res.value;
    }
  }
  if (value > 0.5)
    throw CalibrationError("cross-resonance fit stayed poor (control " +
                           std::to_string(control + 1) + ")");

  CrPulseParams fitted = with_params(best);
  Eigen::Matrix4cd m =
      cnot_gate_map(dev, eig, table, scheme, control, fitted, profile.tau);
  auto phi = vz_phase_correction(m, ideal);
  fitted.vz1 = phi[0];
  fitted.vz2 = phi[1];
  table.gf[static_cast<int>(scheme)][control] = fitted;
  return {value, evals, std::move(trajectory)};
}

std::vector<CrScanPoint> scan_cr_amplitudes(
    const DeviceParameters& dev, const std::array<TransmonEigenbasis, 2>& eig,
    const CalibratedGateTable& table, int control,
    const std::vector<double>& amplitudes, double window, double tau) {
  int target = 1 - control;
  double wt = table.omega_bar[target];
  const double sample_dt = 1.0;
  long every = std::llround(sample_dt / tau);

  auto oscillation_freq = [sample_dt](const std::vector<double>& t,
                                      const std::vector<double>& z) {
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= z.size();
    double span = t.back() - t.front();
    auto power = [&](double f) {
      cdouble acc = 0.0;
      for (size_t i = 0; i < z.size(); ++i)
        acc += (z[i] - mean) * std::polar(1.0, -two_pi * f * t[i]);
      return std::norm(acc);
    };
    double best_f = 0.0, best_p = -1.0;
    double df = 0.25 / span;
    for (double f = df; f < 0.5 / sample_dt; f += df) {
      double p = power(f);
      if (p > best_p) {
        best_p = p;
        best_f = f;
      }
    }
    // Golden-section polish around the winning bin.
    double a = best_f - df, b = best_f + df;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double p1 = power(x1), p2 = power(x2);
    for (int it = 0; it < 40; ++it) {
      if (p1 < p2) {
        a = x1;
        x1 = x2;
        p1 = p2;
        x2 = a + gr * (b - a);
        p2 = power(x2);
      } else {
        b = x2;
        x2 = x1;
        p2 = p1;
        x1 = b - gr * (b - a);
        p1 = power(x1);
      }
    }
    return 0.5 * (a + b);
  };

  std::vector<CrScanPoint> out;
  for (double amp : amplitudes) {
    CrScanPoint point;
    point.omega_cr = amp;
    for (int mc = 0; mc < 2; ++mc) {
      StateBlock s = StateBlock::zeros(dev.basis, 1);
      s.set_column(0, computational_state(dev.basis, eig,
                                          control == 0 ? mc : 0,
                                          control == 0 ? 0 : mc));
      PulseSchedule drive;
      emit_flat_top(drive, 0.0, control, amp, window - 2.0 * flat_top_rise, wt,
                    0.0);
      std::vector<double> ts{0.0};
      std::vector<double> zs{std::real(qubit_rdm(s, 0, target, eig)(0, 0) -
                                       qubit_rdm(s, 0, target, eig)(1, 1))};
      evolve(s, dev, drive, TimeGrid{0.0, window, tau},
             [&](long step, double t, StateBlock& block) {
               if ((step + 1) % every != 0) return;
               Eigen::Matrix2cd r = qubit_rdm(block, 0, target, eig);
               ts.push_back(t);
               zs.push_back(std::real(r(0, 0) - r(1, 1)));
             });
      double f = oscillation_freq(ts, zs);
      if (mc == 0) point.f_control0 = f;
      else point.f_control1 = f;
    }
    point.ix_rate = 0.5 * (point.f_control0 + point.f_control1);
    point.zx_rate = 0.5 * (point.f_control0 - point.f_control1);
    out.push_back(point);
  }
  return out;
}

CalibrationReport calibrate_device(const DeviceParameters& dev,
                                   const std::array<TransmonEigenbasis, 2>& eig,
                                   CalibratedGateTable& table, CrScheme scheme,
                                   const CalibrationProfile& profile,
                                   bool include_cnots, std::ostream* log) {
  CalibrationReport report;
  report.freq = calibrate_frequencies(dev, eig, profile);
  table.omega_bar = report.freq.omega_bar;
  if (log)
    *log << "frequencies: " << radns_to_ghz(report.freq.omega_bar[0]) << " "
         << radns_to_ghz(report.freq.omega_bar[1]) << " GHz\n";

  static const char* names[2][2] = {{"x90 q1", "x180 q1"},
                                    {"x90 q2", "x180 q2"}};
  for (int q = 0; q < 2; ++q)
    for (int a = 0; a < 2; ++a) {
      GateFit fit = optimize_single_qubit_gate(dev, eig, table, q, a, profile);
      report.gates.push_back(
          {names[q][a], fit.discrepancy, fit.evals, fit.trajectory});
      if (log)
        *log << names[q][a] << ": mismatch " << fit.discrepancy << " ("
             << fit.evals << " evals)\n";
    }
  if (include_cnots) {
    for (int control = 0; control < 2; ++control) {
      GateFit fit =
          optimize_cnot_gate(dev, eig, table, scheme, control, profile);
      std::string name = std::string("cnot ") + to_string(scheme) +
                         " control q" + std::to_string(control + 1);
      report.gates.push_back({name, fit.discrepancy, fit.evals,
                              fit.trajectory});
      if (log)
        *log << name << ": mismatch " << fit.discrepancy << " (" << fit.evals
             << " evals)\n";
    }
  }
  return report;
}

}  // namespace transmon
