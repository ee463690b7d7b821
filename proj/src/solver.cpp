#include "transmon/solver.hpp"

#include "transmon/units.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace transmon {

namespace {

// sin/cos via short series for the small arguments that dominate per-step
// coefficients; falls back to libm outside the radius.
inline void small_sincos(double x, double& s, double& c) {
  double x2 = x * x;
  if (x2 < 0.01) {
    s = x * (1.0 -
             x2 / 6.0 *
                 (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0))));
    c = 1.0 -
        x2 / 2.0 *
            (1.0 -
             x2 / 12.0 *
                 (1.0 - x2 / 30.0 * (1.0 - x2 / 56.0 * (1.0 - x2 / 90.0))));
  } else {
    s = std::sin(x);
    c = std::cos(x);
  }
}

}  // namespace

double StateVector::norm() const {
  double n2 = 0.0;
  for (const auto& a : amp) n2 += std::norm(a);
  return std::sqrt(n2);
}

StateBlock StateBlock::zeros(const BasisConfig& basis, int cols) {
  StateBlock s;
  s.basis = basis;
  s.cols = cols;
  s.re.assign(static_cast<size_t>(basis.dim()) * cols, 0.0);
  s.im.assign(static_cast<size_t>(basis.dim()) * cols, 0.0);
  return s;
}

StateVector StateBlock::column(int c) const {
  StateVector v;
  v.basis = basis;
  v.amp.resize(dim());
  for (int i = 0; i < dim(); ++i) v.amp[i] = get(i, c);
  return v;
}

void StateBlock::set_column(int c, const StateVector& v) {
  if (static_cast<int>(v.amp.size()) != dim())
    throw std::invalid_argument("state size mismatch");
  for (int i = 0; i < dim(); ++i) set(i, c, v.amp[i]);
}

double StateBlock::norm(int c) const {
  double n2 = 0.0;
  for (int i = 0; i < dim(); ++i) {
    size_t p = static_cast<size_t>(i) * cols + c;
    n2 += re[p] * re[p] + im[p] * im[p];
  }
  return std::sqrt(n2);
}

long TimeGrid::n_steps() const {
  return std::llround((t_end - t_start) / tau);
}

void TimeGrid::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (t_end < t_start)
    throw std::invalid_argument("time grid must run forward");
  long n = n_steps();
  if (std::abs(t_start + n * tau - t_end) > 0.5 * tau)
    throw std::invalid_argument("grid span is not a whole number of steps");
}

// ---------------------------------------------------------------------------

TrotterPropagator::TrotterPropagator(const std::vector<HamiltonianTerm>& terms,
                                     const BasisConfig& basis, double tau)
    : n_(basis.n_states()), nk_(basis.k_states()), tau_(tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  charge_.resize(n_);
  for (int i = 0; i < n_; ++i) charge_[i] = basis.charge(i);

  for (int i = 0; i + 1 < n_; i += 2) even_pairs_.push_back(i);
  for (int i = 1; i + 1 < n_; i += 2) odd_pairs_.push_back(i);
  if (n_ % 2 == 1) even_singles_.push_back(n_ - 1);
  odd_singles_.push_back(0);
  if (n_ % 2 == 0) odd_singles_.push_back(n_ - 1);

  for (int k = 0; k + 1 < nk_; k += 2) k_even_pairs_.push_back(k);
  for (int k = 1; k + 1 < nk_; k += 2) k_odd_pairs_.push_back(k);

  Eigen::VectorXd res_diag;
  std::array<Eigen::VectorXd, 2> gn, fock_off;
  std::array<bool, 2> have_cpb{false, false}, have_cpl{false, false};
  for (const auto& term : terms) {
    if (term.label == "cpb1" || term.label == "cpb2") {
      int q = term.label == "cpb1" ? 0 : 1;
      ec_[q] = term.ec;
      ej_[q] = -2.0 * term.factors.at(0).offdiag(0);
      have_cpb[q] = true;
    } else if (term.label == "resonator") {
      res_diag = term.factors.at(0).diag;
    } else if (term.label == "coupling1" || term.label == "coupling2") {
      int q = term.label == "coupling1" ? 0 : 1;
      for (const auto& f : term.factors) {
        if (f.axis == FactorMatrix::Axis::resonator) fock_off[q] = f.offdiag;
        else gn[q] = f.diag;
      }
      have_cpl[q] = true;
    } else {
      throw std::invalid_argument("unrecognized Hamiltonian term: " +
                                  term.label);
    }
  }
  if (!have_cpb[0] || !have_cpb[1] || !have_cpl[0] || !have_cpl[1] ||
      res_diag.size() == 0)
    throw std::invalid_argument("incomplete Hamiltonian term list");

  res_phase_.resize(nk_);
  for (int k = 0; k < nk_; ++k) {
    double a = 0.5 * tau_ * res_diag(k);
    res_phase_[k] = {std::cos(a), -std::sin(a)};
  }

  for (int q = 0; q < 2; ++q) {
    auto fill = [&](const std::vector<int>& pairs, double theta,
                    std::vector<CRot>& out) {
      out.resize(pairs.size() * n_);
      for (size_t p = 0; p < pairs.size(); ++p) {
        double lad = fock_off[q](pairs[p]);
        for (int i = 0; i < n_; ++i) {
          double a = theta * gn[q](i) * lad;
          out[p * n_ + i] = {std::cos(a), std::sin(a)};
        }
      }
    };
    fill(k_even_pairs_, 0.5 * tau_, cpl_even_[q]);
    fill(k_odd_pairs_, 0.5 * tau_, cpl_odd_half_[q]);
    fill(k_odd_pairs_, tau_, cpl_odd_full_[q]);

    for (auto* c : {&cpb_zero_[q], &scratch_[q]}) {
      c->even.resize(even_pairs_.size());
      c->odd.resize(odd_pairs_.size());
      c->even_single.resize(even_singles_.size());
      c->odd_single.resize(odd_singles_.size());
    }
    compute_cpb(q, 0.0, cpb_zero_[q]);
  }
}

void TrotterPropagator::compute_cpb(int q, double n_g, CpbCoeffs& out) const {
  const double th = 0.5 * tau_;
  const double o = -0.5 * ej_[q];
  double d[128];
  for (int i = 0; i < n_; ++i) {
    double u = charge_[i] - n_g;
    d[i] = ec_[q] * u * u;
  }
  auto fill_pairs = [&](const std::vector<int>& pairs,
                        std::vector<Rot2>& rot) {
    for (size_t b = 0; b < pairs.size(); ++b) {
      int i = pairs[b];
      double p = 0.5 * d[i], r = 0.5 * d[i + 1];
      double mu = 0.5 * (p + r), e = 0.5 * (p - r);
      double w = std::sqrt(e * e + o * o);
      double sm, cm, sw, cw;
      small_sincos(th * mu, sm, cm);
      small_sincos(th * w, sw, cw);
      double se = sw * e / w, so = sw * o / w;
      rot[b] = {cm * cw - sm * se, -(cm * se + sm * cw),
                -so * sm,          -so * cm,
                cm * cw + sm * se, cm * se - sm * cw};
    }
  };
  auto fill_singles = [&](const std::vector<int>& singles,
                          std::vector<Phase>& ph) {
    for (size_t u = 0; u < singles.size(); ++u) {
      double sm, cm;
      small_sincos(th * 0.5 * d[singles[u]], sm, cm);
      ph[u] = {cm, -sm};
    }
  };
  fill_pairs(even_pairs_, out.even);
  fill_pairs(odd_pairs_, out.odd);
  fill_singles(even_singles_, out.even_single);
  fill_singles(odd_singles_, out.odd_single);
}

namespace {

inline void rot2_run(double* __restrict xr, double* __restrict xi,
                     double* __restrict yr, double* __restrict yi, int len,
                     double ar, double ai, double br, double bi, double gr,
                     double gi) {
  for (int j = 0; j < len; ++j) {
    double axr = xr[j], axi = xi[j], ayr = yr[j], ayi = yi[j];
    xr[j] = ar * axr - ai * axi + br * ayr - bi * ayi;
    xi[j] = ar * axi + ai * axr + br * ayi + bi * ayr;
    yr[j] = br * axr - bi * axi + gr * ayr - gi * ayi;
    yi[j] = br * axi + bi * axr + gr * ayi + gi * ayr;
  }
}

inline void phase_run(double* __restrict xr, double* __restrict xi, int len,
                      double pr, double pi_) {
  for (int j = 0; j < len; ++j) {
    double r = xr[j], i = xi[j];
    xr[j] = pr * r - pi_ * i;
    xi[j] = pr * i + pi_ * r;
  }
}

inline void crot_run(double* __restrict xr, double* __restrict xi,
                     double* __restrict yr, double* __restrict yi, int len,
                     double c, double s) {
  for (int j = 0; j < len; ++j) {
    double axr = xr[j], axi = xi[j], ayr = yr[j], ayi = yi[j];
    xr[j] = c * axr + s * ayi;
    xi[j] = c * axi - s * ayr;
    yr[j] = c * ayr + s * axi;
    yi[j] = c * ayi - s * axr;
  }
}

}  // namespace

void TrotterPropagator::sweep_axis1(StateBlock& s, const CpbCoeffs& c,
                                    bool odd) const {
  const int run = n_ * nk_ * s.cols;
  const auto& pairs = odd ? odd_pairs_ : even_pairs_;
  const auto& singles = odd ? odd_singles_ : even_singles_;
  const auto& rot = odd ? c.odd : c.even;
  const auto& ph = odd ? c.odd_single : c.even_single;
  double* re = s.re.data();
  double* im = s.im.data();
  for (size_t b = 0; b < pairs.size(); ++b) {
    size_t off = static_cast<size_t>(pairs[b]) * run;
    const Rot2& f = rot[b];
    rot2_run(re + off, im + off, re + off + run, im + off + run, run, f.ar,
             f.ai, f.br, f.bi, f.gr, f.gi);
  }
  for (size_t u = 0; u < singles.size(); ++u) {
    size_t off = static_cast<size_t>(singles[u]) * run;
    phase_run(re + off, im + off, run, ph[u].pr, ph[u].pi);
  }
}

void TrotterPropagator::sweep_axis2(StateBlock& s, const CpbCoeffs& c,
                                    bool odd) const {
  const int nkc = nk_ * s.cols;
  const size_t row = static_cast<size_t>(n_) * nkc;
  const auto& pairs = odd ? odd_pairs_ : even_pairs_;
  const auto& singles = odd ? odd_singles_ : even_singles_;
  const auto& rot = odd ? c.odd : c.even;
  const auto& ph = odd ? c.odd_single : c.even_single;
  double* re = s.re.data();
  double* im = s.im.data();
  for (int i1 = 0; i1 < n_; ++i1) {
    size_t base = i1 * row;
    for (size_t b = 0; b < pairs.size(); ++b) {
      size_t off = base + static_cast<size_t>(pairs[b]) * nkc;
      const Rot2& f = rot[b];
      rot2_run(re + off, im + off, re + off + nkc, im + off + nkc, nkc, f.ar,
               f.ai, f.br, f.bi, f.gr, f.gi);
    }
    for (size_t u = 0; u < singles.size(); ++u) {
      size_t off = base + static_cast<size_t>(singles[u]) * nkc;
      phase_run(re + off, im + off, nkc, ph[u].pr, ph[u].pi);
    }
  }
}

void TrotterPropagator::sweep_resonator(StateBlock& s) const {
  const int c = s.cols;
  const int nkc = nk_ * c;
  double* re = s.re.data();
  double* im = s.im.data();
  const size_t ncomp = static_cast<size_t>(n_) * n_;
  for (size_t comp = 0; comp < ncomp; ++comp) {
    size_t base = comp * nkc;
    for (int k = 1; k < nk_; ++k)
      phase_run(re + base + static_cast<size_t>(k) * c,
                im + base + static_cast<size_t>(k) * c, c, res_phase_[k].pr,
                res_phase_[k].pi);
  }
}

void TrotterPropagator::sweep_coupling(StateBlock& s, int q, bool odd,
                                       bool full) const {
  const int c = s.cols;
  const int nkc = nk_ * c;
  const size_t row = static_cast<size_t>(n_) * nkc;
  const auto& pairs = odd ? k_odd_pairs_ : k_even_pairs_;
  const auto& tab = full ? cpl_odd_full_[q] : (odd ? cpl_odd_half_[q]
                                                   : cpl_even_[q]);
  if (pairs.empty()) return;
  double* re = s.re.data();
  double* im = s.im.data();
  if (q == 0) {
    for (int i1 = 0; i1 < n_; ++i1) {
      for (size_t p = 0; p < pairs.size(); ++p) {
        const CRot cr = tab[p * n_ + i1];
        if (cr.s == 0.0) continue;
        size_t base = i1 * row + static_cast<size_t>(pairs[p]) * c;
        for (int i2 = 0; i2 < n_; ++i2) {
          size_t off = base + static_cast<size_t>(i2) * nkc;
          crot_run(re + off, im + off, re + off + c, im + off + c, c, cr.c,
                   cr.s);
        }
      }
    }
  } else {
    for (int i1 = 0; i1 < n_; ++i1) {
      size_t base1 = i1 * row;
      for (size_t p = 0; p < pairs.size(); ++p) {
        const CRot* trow = &tab[p * n_];
        size_t kofs = static_cast<size_t>(pairs[p]) * c;
        for (int i2 = 0; i2 < n_; ++i2) {
          const CRot cr = trow[i2];
          if (cr.s == 0.0) continue;
          size_t off = base1 + static_cast<size_t>(i2) * nkc + kofs;
          crot_run(re + off, im + off, re + off + c, im + off + c, c, cr.c,
                   cr.s);
        }
      }
    }
  }
}

void TrotterPropagator::step(StateBlock& s, DriveSampler& drives, double t) {
  auto ng = drives.sample(t + 0.5 * tau_);
  const CpbCoeffs* c1 = &cpb_zero_[0];
  const CpbCoeffs* c2 = &cpb_zero_[1];
  if (ng[0] != 0.0) {
    compute_cpb(0, ng[0], scratch_[0]);
    c1 = &scratch_[0];
  }
  if (ng[1] != 0.0) {
    compute_cpb(1, ng[1], scratch_[1]);
    c2 = &scratch_[1];
  }

  sweep_axis1(s, *c1, false);
  sweep_axis1(s, *c1, true);
  sweep_axis2(s, *c2, false);
  sweep_axis2(s, *c2, true);
  sweep_resonator(s);
  sweep_coupling(s, 0, false, false);
  sweep_coupling(s, 0, true, false);
  sweep_coupling(s, 1, false, false);
  sweep_coupling(s, 1, true, true);  // middle factor, merged to full tau
  sweep_coupling(s, 1, false, false);
  sweep_coupling(s, 0, true, false);
  sweep_coupling(s, 0, false, false);
  sweep_resonator(s);
  sweep_axis2(s, *c2, true);
  sweep_axis2(s, *c2, false);
  sweep_axis1(s, *c1, true);
  sweep_axis1(s, *c1, false);
}

// ---------------------------------------------------------------------------

namespace {

void check_basis(const BasisConfig& a, const BasisConfig& b) {
  if (a.n_min != b.n_min || a.n_max != b.n_max || a.k_max != b.k_max)
    throw std::invalid_argument("basis configuration mismatch");
}

}  // namespace

void evolve(StateBlock& s, const DeviceParameters& dev,
            const PulseSchedule& drives, const TimeGrid& grid,
            const StepObserver& observer) {
  grid.validate();
  check_basis(s.basis, dev.basis);
  double wmax = drives.max_carrier_freq();
  if (wmax > 0.0 && two_pi / wmax < 20.0 * grid.tau)
    throw std::invalid_argument(
        "tau under-resolves the fastest drive carrier (need >= 20 steps per "
        "period)");

  auto terms = hamiltonian_terms(dev);
  TrotterPropagator prop(terms, dev.basis, grid.tau);
  DriveSampler sampler(drives);
  const long n = grid.n_steps();
  double norm0 = s.cols > 0 ? s.norm(0) : 0.0;
  for (long i = 0; i < n; ++i) {
    double t = grid.t_start + i * grid.tau;
    prop.step(s, sampler, t);
    if (observer) observer(i, grid.t_start + (i + 1) * grid.tau, s);
  }
  if (s.cols > 0) {
    double drift = std::abs(s.norm(0) - norm0);
    if (drift > 1e-9)
      std::cerr << "warning: norm drift " << drift << " over " << n
                << " steps\n";
  }
}

StateVector trotter_step(const StateVector& state, const DeviceParameters& dev,
                         const PulseSchedule& drives, double t, double tau) {
  check_basis(state.basis, dev.basis);
  auto terms = hamiltonian_terms(dev);
  TrotterPropagator prop(terms, dev.basis, tau);
  DriveSampler sampler(drives);
  StateBlock s = StateBlock::zeros(dev.basis, 1);
  s.set_column(0, state);
  prop.step(s, sampler, t);
  return s.column(0);
}

// ---------------------------------------------------------------------------

StateVector to_transmon_basis(const StateVector& state,
                              const std::array<TransmonEigenbasis, 2>& eig) {
  if (state.repr != StateRepr::charge)
    throw std::invalid_argument("state is not in the charge basis");
  const BasisConfig& basis = state.basis;
  const int n = basis.n_states();
  const int nk = basis.k_states();

  std::vector<cdouble> t1(static_cast<size_t>(n) * n * nk);
  for (int m1 = 0; m1 < n; ++m1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int k = 0; k < nk; ++k) {
        cdouble acc = 0.0;
        for (int i1 = 0; i1 < n; ++i1)
          acc += eig[0].b(i1, m1) * state.amp[basis.index(i1, i2, k)];
        t1[basis.index(m1, i2, k)] = acc;
      }

  StateVector out;
  out.basis = basis;
  out.repr = StateRepr::transmon;
  out.amp.resize(state.amp.size());
  for (int m1 = 0; m1 < n; ++m1)
    for (int m2 = 0; m2 < n; ++m2)
      for (int k = 0; k < nk; ++k) {
        cdouble acc = 0.0;
        for (int i2 = 0; i2 < n; ++i2)
          acc += eig[1].b(i2, m2) * t1[basis.index(m1, i2, k)];
        out.amp[basis.index(m1, m2, k)] = acc;
      }
  return out;
}

void apply_rotating_frame(StateVector& state, double t,
                          const std::array<double, 2>& omega_bar) {
  if (state.repr != StateRepr::transmon)
    throw std::invalid_argument("rotating frame applies to transmon states");
  const BasisConfig& basis = state.basis;
  const int n = basis.n_states();
  const int nk = basis.k_states();
  std::vector<cdouble> ph1(n), ph2(n);
  for (int m = 0; m < n; ++m) {
    ph1[m] = std::polar(1.0, omega_bar[0] * m * t);
    ph2[m] = std::polar(1.0, omega_bar[1] * m * t);
  }
  for (int m1 = 0; m1 < n; ++m1)
    for (int m2 = 0; m2 < n; ++m2) {
      cdouble p = ph1[m1] * ph2[m2];
      for (int k = 0; k < nk; ++k) state.amp[basis.index(m1, m2, k)] *= p;
    }
}

StateVector computational_state(const BasisConfig& basis,
                                const std::array<TransmonEigenbasis, 2>& eig,
                                int m1, int m2) {
  if (m1 < 0 || m1 > 1 || m2 < 0 || m2 > 1)
    throw std::invalid_argument("computational labels must be 0 or 1");
  return product_state(basis, eig[0].b.col(m1), eig[1].b.col(m2));
}

StateVector product_state(const BasisConfig& basis, const Eigen::VectorXd& v1,
                          const Eigen::VectorXd& v2) {
  const int n = basis.n_states();
  if (v1.size() != n || v2.size() != n)
    throw std::invalid_argument("charge-space vector size mismatch");
  StateVector out;
  out.basis = basis;
  out.amp.assign(basis.dim(), 0.0);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      out.amp[basis.index(i1, i2, 0)] = v1(i1) * v2(i2);
  return out;
}

std::array<cdouble, 4> computational_amplitudes(
    const StateBlock& s, int col,
    const std::array<TransmonEigenbasis, 2>& eig) {
  const BasisConfig& basis = s.basis;
  const int n = basis.n_states();
  std::array<std::vector<cdouble>, 2> u;
  u[0].assign(n, 0.0);
  u[1].assign(n, 0.0);
  for (int m1 = 0; m1 < 2; ++m1)
    for (int i2 = 0; i2 < n; ++i2) {
      cdouble acc = 0.0;
      for (int i1 = 0; i1 < n; ++i1)
        acc += eig[0].b(i1, m1) * s.get(basis.index(i1, i2, 0), col);
      u[m1][i2] = acc;
    }
  std::array<cdouble, 4> a{};
  for (int m1 = 0; m1 < 2; ++m1)
    for (int m2 = 0; m2 < 2; ++m2) {
      cdouble acc = 0.0;
      for (int i2 = 0; i2 < n; ++i2) acc += eig[1].b(i2, m2) * u[m1][i2];
      a[2 * m1 + m2] = acc;
    }
  return a;
}

Eigen::Matrix2cd qubit_rdm(const StateBlock& s, int col, int qubit,
                           const std::array<TransmonEigenbasis, 2>& eig) {
  const BasisConfig& basis = s.basis;
  const int n = basis.n_states();
  const int nk = basis.k_states();
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  const Eigen::MatrixXd& b = eig[qubit].b;
  for (int j = 0; j < n; ++j)       // spectator charge index
    for (int k = 0; k < nk; ++k) {
      cdouble u0 = 0.0, u1 = 0.0;
      for (int i = 0; i < n; ++i) {
        cdouble amp = qubit == 0 ? s.get(basis.index(i, j, k), col)
                                 : s.get(basis.index(j, i, k), col);
        u0 += b(i, 0) * amp;
        u1 += b(i, 1) * amp;
      }
      rho(0, 0) += u0 * std::conj(u0);
      rho(0, 1) += u0 * std::conj(u1);
      rho(1, 1) += u1 * std::conj(u1);
    }
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

// ---------------------------------------------------------------------------

Eigen::Matrix4cd apply_frame_phase(const Eigen::Matrix4cd& m,
                                   const std::array<double, 2>& frame_phase) {
  Eigen::Vector4cd z;
  for (int m1 = 0; m1 < 2; ++m1)
    for (int m2 = 0; m2 < 2; ++m2)
      z(2 * m1 + m2) =
          std::polar(1.0, -0.5 * frame_phase[0] * (1 - 2 * m1) -
                              0.5 * frame_phase[1] * (1 - 2 * m2));
  return z.asDiagonal() * m;
}

std::vector<MapSnapshot> computational_map_series(
    const DeviceParameters& dev, const std::array<TransmonEigenbasis, 2>& eig,
    const PulseSchedule& drives, const std::vector<SnapshotRequest>& snaps,
    double tau, const std::array<double, 2>& omega_bar) {
  if (snaps.empty()) return {};
  StateBlock s = StateBlock::zeros(dev.basis, 4);
  for (int m1 = 0; m1 < 2; ++m1)
    for (int m2 = 0; m2 < 2; ++m2)
      s.set_column(2 * m1 + m2, computational_state(dev.basis, eig, m1, m2));

  std::vector<long> target_steps(snaps.size());
  for (size_t i = 0; i < snaps.size(); ++i) {
    target_steps[i] = std::llround(snaps[i].t / tau);
    if (std::abs(target_steps[i] * tau - snaps[i].t) > 1e-9)
      throw std::invalid_argument("snapshot time off the step grid");
    if (i > 0 && target_steps[i] <= target_steps[i - 1])
      throw std::invalid_argument("snapshot times must increase");
  }

  std::vector<MapSnapshot> out(snaps.size());
  auto capture = [&](size_t snap_idx, const StateBlock& block) {
    const auto& req = snaps[snap_idx];
    MapSnapshot& ms = out[snap_idx];
    ms.t = req.t;
    std::array<cdouble, 2> ph1, ph2;
    for (int m = 0; m < 2; ++m) {
      ph1[m] = std::polar(1.0, omega_bar[0] * m * req.t);
      ph2[m] = std::polar(1.0, omega_bar[1] * m * req.t);
    }
    for (int col = 0; col < 4; ++col) {
      auto a = computational_amplitudes(block, col, eig);
      double pcomp = 0.0;
      for (int m1 = 0; m1 < 2; ++m1)
        for (int m2 = 0; m2 < 2; ++m2) {
          int r = 2 * m1 + m2;
          a[r] *= ph1[m1] * ph2[m2];
          pcomp += std::norm(a[r]);
        }
      for (int r = 0; r < 4; ++r) ms.m(r, col) = a[r];
      ms.leak[col] = 1.0 - pcomp;
    }
    ms.m = apply_frame_phase(ms.m, req.frame_phase);
  };

  size_t cursor = 0;
  while (cursor < snaps.size() && target_steps[cursor] == 0)
    capture(cursor++, s);
  if (cursor < snaps.size()) {
    TimeGrid grid{0.0, snaps.back().t, tau};
    evolve(s, dev, drives, grid,
           [&](long step, double, StateBlock& block) {
             while (cursor < snaps.size() && step + 1 == target_steps[cursor])
               capture(cursor++, block);
           });
  }
  return out;
}

Eigen::Matrix4cd computational_map(const DeviceParameters& dev,
                                   const std::array<TransmonEigenbasis, 2>& eig,
                                   const PulseSchedule& drives, double duration,
                                   double tau,
                                   const std::array<double, 2>& omega_bar,
                                   const std::array<double, 2>& frame_phase) {
  std::vector<SnapshotRequest> snaps{{duration, frame_phase}};
  return computational_map_series(dev, eig, drives, snaps, tau, omega_bar)[0]
      .m;
}

}  // namespace transmon
