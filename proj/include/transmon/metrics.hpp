#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <random>
#include <span>

namespace transmon {

// Gate maps act on the four-dimensional computational subspace; all figures
// of merit below compare such a map M against an ideal unitary U.

Eigen::Vector4cd haar_state(std::mt19937_64& rng);

// Mean squared overlap between U|psi> and M|psi> over Haar-random states.
double average_gate_fidelity(const Eigen::Matrix4cd& m,
                             const Eigen::Matrix4cd& u, long samples,
                             std::uint64_t seed);

// Exact Haar average of the same estimator, via the second-moment identity.
double average_gate_fidelity_exact(const Eigen::Matrix4cd& m,
                                   const Eigen::Matrix4cd& u);

// Purity retention of the traceless part; 1 for unitary maps.
double unitarity(const Eigen::Matrix4cd& m, long samples, std::uint64_t seed);

// Half the summed absolute probability gap, without renormalization, so
// leakage out of the subspace counts against the match.
double statistical_distance(std::span<const double> p,
                            std::span<const double> q);

// Squared Frobenius mismatch insensitive to a global phase.
double gate_discrepancy(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& u);

// Error-rate bounds derived from the average gate fidelity.
double pauli_error_bound(double f_avg);
double diamond_error_upper_bound(double f_avg);

struct DiamondOptions {
  int seeds = 10000;
  int polish_evals = 2000;
  std::uint64_t seed = 777;
};

// Worst-case (completely bounded) error rate of M against U, computed by
// minimizing the two-factor norm bound over the mixing matrix; the bound is
// tight for maps of Kraus rank two, which covers the difference map here.
double diamond_error_rate(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& u,
                          const DiamondOptions& opt = {});

// Per-qubit frame-phase corrections maximizing the overlap with U, and the
// discrepancy that remains after applying them.
std::array<double, 2> vz_phase_correction(const Eigen::Matrix4cd& m,
                                          const Eigen::Matrix4cd& u);
double corrected_discrepancy(const Eigen::Matrix4cd& m,
                             const Eigen::Matrix4cd& u);

// Diagonal phase gate exp(-i phi Z / 2) on each qubit, row order |m1 m2>.
Eigen::Matrix4cd frame_phase_matrix(double phi1, double phi2);

}  // namespace transmon
