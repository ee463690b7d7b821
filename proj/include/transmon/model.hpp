// model.hpp -- device description and Hamiltonian assembly for two
// charge-driven transmons coupled to a common readout resonator.
//
// Each transmon is described in the charge basis n in [n_min, n_max], where
// the Cooper-pair-box Hamiltonian is tridiagonal:
//
//   H_cpb = sum_n Ec (n - n_g)^2 |n><n|  -  Ej/2 sum_n (|n+1><n| + h.c.)
//
// The resonator is a truncated Fock ladder k in [0, k_max] and couples to the
// charge operator of each transmon through g_i n_i (a + a^dagger).
//
// Composite basis states are indexed by (n1, n2, k); the flattened layout is
// idx = (i1 * N2 + i2) * NK + k with i = n - n_min.  All energies are rad/ns.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace transmon {

struct BasisConfig {
  int n_min = -8;
  int n_max = 8;
  int k_max = 3;

  int n_states() const { return n_max - n_min + 1; }
  int k_states() const { return k_max + 1; }
  int dim() const { return n_states() * n_states() * k_states(); }
  int index(int i1, int i2, int k) const {
    return (i1 * n_states() + i2) * k_states() + k;
  }
  // Charge value of charge-basis slot i.
  double charge(int i) const { return static_cast<double>(n_min + i); }
  void validate() const;
};

struct DeviceParameters {
  std::array<double, 2> ec{};       // charging energies, rad/ns
  std::array<double, 2> ej{};       // Josephson energies, rad/ns
  std::array<double, 2> g{};        // resonator couplings, rad/ns
  double omega_r = 0.0;             // resonator frequency, rad/ns
  BasisConfig basis;

  // Bare qubit frequencies / anharmonicities, filled by diagonalize_device.
  std::array<double, 2> omega{};
  std::array<double, 2> alpha{};

  static DeviceParameters defaults();
  static DeviceParameters from_file(const std::string& path);
  void save(const std::string& path) const;
  void validate() const;
};

// Single-transmon eigenbasis.  b.col(m) holds the charge-basis amplitudes of
// eigenstate m with the dominant component made real and positive.
struct TransmonEigenbasis {
  Eigen::VectorXd energies;   // ascending, rad/ns
  Eigen::MatrixXd b;          // n_states x n_states, orthonormal columns
  bool degenerate = false;    // lowest levels closer than the resolution limit

  double omega() const { return energies(1) - energies(0); }
  double alpha() const {
    return (energies(2) - energies(1)) - (energies(1) - energies(0));
  }
};

// Tridiagonal Cooper-pair-box Hamiltonian at gate charge n_g (real symmetric).
Eigen::MatrixXd build_cpb_matrix(double ec, double ej, const BasisConfig& basis,
                                 double n_g);

TransmonEigenbasis diagonalize_transmon(double ec, double ej,
                                        const BasisConfig& basis);

// Diagonalizes both transmons at n_g = 0 and fills omega/alpha on the device.
std::array<TransmonEigenbasis, 2> diagonalize_device(DeviceParameters& dev);

// ---------------------------------------------------------------------------
// Structured term list consumed by the product-formula solver.

// One factor acting along a single axis of the composite basis.  A factor with
// an empty offdiag is diagonal; otherwise it is tridiagonal with the given
// sub/superdiagonal.
struct FactorMatrix {
  enum class Axis { qubit1 = 0, qubit2 = 1, resonator = 2 };
  Axis axis;
  Eigen::VectorXd diag;
  Eigen::VectorXd offdiag;
};

struct HamiltonianTerm {
  std::string label;
  std::vector<FactorMatrix> factors;  // identity on axes not listed
  // For the CPB terms the diagonal depends on the gate charge; drive_qubit
  // names which n_g enters (0 or 1, -1 for static terms).  The stored diag is
  // the n_g = 0 snapshot.
  int drive_qubit = -1;
  double ec = 0.0;  // charging energy for re-evaluating the driven diagonal
};

// The five-term splitting: cpb1, cpb2, resonator, coupling1, coupling2.
std::vector<HamiltonianTerm> hamiltonian_terms(const DeviceParameters& dev);

// Dense assembly of the full Hamiltonian at gate charges (n_g1, n_g2); used by
// tests and small-basis reference propagators.
Eigen::MatrixXd assemble_dense(const std::vector<HamiltonianTerm>& terms,
                               const BasisConfig& basis, double n_g1,
                               double n_g2);

}  // namespace transmon
