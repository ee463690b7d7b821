// solver.hpp -- second-order product-formula time evolution on the composite
// charge x charge x Fock basis.
//
// One step over [t, t + tau] applies
//
//   U2(tau) = e^{-i tau/2 A1} ... e^{-i tau/2 A8} e^{-i tau A9}
//             e^{-i tau/2 A8} ... e^{-i tau/2 A1}
//
// with the fixed term order A1..A9 = CPB1 even, CPB1 odd, CPB2 even, CPB2
// odd, resonator diagonal, coupling1 even, coupling1 odd, coupling2 even,
// coupling2 odd.  Even/odd refer to the checkerboard split of a tridiagonal
// factor into commuting 2x2 blocks; each block carries half of the diagonal.
// Gate charges are sampled once per step at the interval midpoint.
//
// States are processed in batches (StateBlock): all columns share the same
// schedule, so the 2x2 rotations amortize across columns and the inner loops
// vectorize over contiguous memory.
#pragma once

#include "transmon/model.hpp"
#include "transmon/pulses.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace transmon {

using cdouble = std::complex<double>;

enum class StateRepr { charge, transmon };

struct StateVector {
  BasisConfig basis;
  StateRepr repr = StateRepr::charge;
  std::vector<cdouble> amp;  // layout: (i1 * N2 + i2) * NK + k

  double norm() const;
};

// Batch of column states stored split re/im; entry (idx, c) lives at
// [idx * cols + c].
struct StateBlock {
  BasisConfig basis;
  int cols = 0;
  std::vector<double> re, im;

  static StateBlock zeros(const BasisConfig& basis, int cols);
  int dim() const { return basis.dim(); }
  cdouble get(int idx, int c) const {
    return {re[static_cast<size_t>(idx) * cols + c],
            im[static_cast<size_t>(idx) * cols + c]};
  }
  void set(int idx, int c, cdouble v) {
    re[static_cast<size_t>(idx) * cols + c] = v.real();
    im[static_cast<size_t>(idx) * cols + c] = v.imag();
  }
  StateVector column(int c) const;
  void set_column(int c, const StateVector& v);
  double norm(int c) const;
};

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  double tau = 1e-3;  // ns

  long n_steps() const;
  void validate() const;
};

class TrotterPropagator {
 public:
  TrotterPropagator(const std::vector<HamiltonianTerm>& terms,
                    const BasisConfig& basis, double tau);

  double tau() const { return tau_; }
  // Advances the block by one step covering [t, t + tau].
  void step(StateBlock& s, DriveSampler& drives, double t);

 private:
  struct Rot2 {  // complex symmetric 2x2 exponential
    double ar, ai, br, bi, gr, gi;
  };
  struct Phase {
    double pr, pi;
  };
  struct CRot {  // x' = c x - i s y on a Fock pair
    double c, s;
  };
  struct CpbCoeffs {
    std::vector<Rot2> even, odd;
    std::vector<Phase> even_single, odd_single;
  };

  void compute_cpb(int q, double n_g, CpbCoeffs& out) const;
  void sweep_axis1(StateBlock& s, const CpbCoeffs& c, bool odd) const;
  void sweep_axis2(StateBlock& s, const CpbCoeffs& c, bool odd) const;
  void sweep_resonator(StateBlock& s) const;
  void sweep_coupling(StateBlock& s, int q, bool odd, bool full) const;

  int n_ = 0, nk_ = 0;
  double tau_ = 0.0;
  std::array<double, 2> ec_{}, ej_{};
  std::vector<double> charge_;
  std::vector<int> even_pairs_, odd_pairs_;      // charge-axis block starts
  std::vector<int> even_singles_, odd_singles_;
  std::vector<int> k_even_pairs_, k_odd_pairs_;  // Fock-axis block starts
  std::array<CpbCoeffs, 2> cpb_zero_;            // cached n_g = 0 coefficients
  std::array<CpbCoeffs, 2> scratch_;
  std::vector<Phase> res_phase_;                 // e^{-i tau/2 w_r k}
  // Coupling tables indexed [pair * n + charge_index].
  std::array<std::vector<CRot>, 2> cpl_even_, cpl_odd_half_, cpl_odd_full_;
};

using StepObserver = std::function<void(long step, double t, StateBlock&)>;

// Evolves the block across the grid.  The observer, when set, is invoked
// after every completed step with (step index, end time, block).
void evolve(StateBlock& s, const DeviceParameters& dev,
            const PulseSchedule& drives, const TimeGrid& grid,
            const StepObserver& observer = {});

// Single-step convenience wrapper (sets up a propagator per call).
StateVector trotter_step(const StateVector& state, const DeviceParameters& dev,
                         const PulseSchedule& drives, double t, double tau);

// ---------------------------------------------------------------------------
// Basis transforms and computational-subspace extraction.

// Charge -> transmon-eigenbasis transform (same layout, m indices).
StateVector to_transmon_basis(const StateVector& state,
                              const std::array<TransmonEigenbasis, 2>& eig);

// Multiplies transmon-basis amplitudes by exp(i t (w1 m1 + w2 m2)).
void apply_rotating_frame(StateVector& state, double t,
                          const std::array<double, 2>& omega_bar);

// |m1 m2> x |k=0> as a charge-basis state.
StateVector computational_state(const BasisConfig& basis,
                                const std::array<TransmonEigenbasis, 2>& eig,
                                int m1, int m2);
// Product of arbitrary per-qubit charge-space vectors with k = 0.
StateVector product_state(const BasisConfig& basis, const Eigen::VectorXd& v1,
                          const Eigen::VectorXd& v2);

// Amplitudes of |k=0, m1 m2 in {0,1}> ordered (00, 01, 10, 11).
std::array<cdouble, 4> computational_amplitudes(
    const StateBlock& s, int col, const std::array<TransmonEigenbasis, 2>& eig);

// Reduced 2x2 density matrix of one qubit in its lowest two levels.
Eigen::Matrix2cd qubit_rdm(const StateBlock& s, int col, int qubit,
                           const std::array<TransmonEigenbasis, 2>& eig);

// ---------------------------------------------------------------------------
// Computational map: evolve the four computational basis columns through a
// schedule and read out the rotating-frame 4x4 map at snapshot times.

struct MapSnapshot {
  double t = 0.0;
  Eigen::Matrix4cd m;
  std::array<double, 4> leak{};
};

struct SnapshotRequest {
  double t = 0.0;
  std::array<double, 2> frame_phase{0.0, 0.0};  // trailing virtual-Z angles
};

std::vector<MapSnapshot> computational_map_series(
    const DeviceParameters& dev, const std::array<TransmonEigenbasis, 2>& eig,
    const PulseSchedule& drives, const std::vector<SnapshotRequest>& snaps,
    double tau, const std::array<double, 2>& omega_bar);

Eigen::Matrix4cd computational_map(const DeviceParameters& dev,
                                   const std::array<TransmonEigenbasis, 2>& eig,
                                   const PulseSchedule& drives, double duration,
                                   double tau,
                                   const std::array<double, 2>& omega_bar,
                                   const std::array<double, 2>& frame_phase);

// (Z_{phi1} x Z_{phi2}) applied on the left of a computational map.
Eigen::Matrix4cd apply_frame_phase(const Eigen::Matrix4cd& m,
                                   const std::array<double, 2>& frame_phase);

}  // namespace transmon
