#include "transmon/model.hpp"
#include "transmon/pulses.hpp"
#include "transmon/solver.hpp"
#include "transmon/units.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

using namespace transmon;
using Catch::Approx;

namespace {

DeviceParameters reduced_device() {
  DeviceParameters dev = DeviceParameters::defaults();
  dev.basis = BasisConfig{-2, 2, 3};  // dim 100
  return dev;
}

PulseSchedule drag_on_qubit1(double t_on = 0.0) {
  PulseSchedule s;
  emit_drag(s, t_on, 0, 0.00444, 0.219, ghz_to_radns(5.346), 0.3);
  return s;
}

// Midpoint-sampled dense reference propagator on a small basis.
void dense_reference(StateBlock& s, const DeviceParameters& dev,
                     const PulseSchedule& drives, double t_end, double tau) {
  auto terms = hamiltonian_terms(dev);
  int d = dev.basis.dim();
  Eigen::VectorXcd psi[4];
  for (int c = 0; c < s.cols; ++c) {
    psi[c].resize(d);
    for (int i = 0; i < d; ++i) psi[c](i) = s.get(i, c);
  }
  long n = std::llround(t_end / tau);
  for (long i = 0; i < n; ++i) {
    auto ng = drives.sample((i + 0.5) * tau);
    Eigen::MatrixXd h = assemble_dense(terms, dev.basis, ng[0], ng[1]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::VectorXcd ph(d);
    for (int j = 0; j < d; ++j)
      ph(j) = std::polar(1.0, -tau * es.eigenvalues()(j));
    Eigen::MatrixXcd u = es.eigenvectors().cast<cdouble>() * ph.asDiagonal() *
                         es.eigenvectors().transpose().cast<cdouble>();
    for (int c = 0; c < s.cols; ++c) psi[c] = u * psi[c];
  }
  for (int c = 0; c < s.cols; ++c)
    for (int i = 0; i < d; ++i) s.set(i, c, psi[c](i));
}

double block_distance(const StateBlock& a, const StateBlock& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.re.size(); ++i)
    m = std::max(m, std::hypot(a.re[i] - b.re[i], a.im[i] - b.im[i]));
  return m;
}

StateBlock random_block(const BasisConfig& basis, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  StateBlock s = StateBlock::zeros(basis, cols);
  for (int c = 0; c < cols; ++c) {
    double n2 = 0.0;
    std::vector<cdouble> v(basis.dim());
    for (auto& a : v) {
      a = {nd(rng), nd(rng)};
      n2 += std::norm(a);
    }
    for (int i = 0; i < basis.dim(); ++i) s.set(i, c, v[i] / std::sqrt(n2));
  }
  return s;
}

}  // namespace

TEST_CASE("product-formula step conserves the norm", "[solver]") {
  DeviceParameters dev = reduced_device();
  StateBlock s = random_block(dev.basis, 1, 7);
  TimeGrid grid{0.0, 1.0, 1e-3};
  evolve(s, dev, drag_on_qubit1(), grid);
  CHECK(s.norm(0) == Approx(1.0).margin(1e-12));
}

TEST_CASE("undriven evolution matches the exact propagator", "[solver]") {
  DeviceParameters dev = reduced_device();
  StateBlock s = random_block(dev.basis, 2, 11);
  StateBlock ref = s;
  PulseSchedule idle;
  evolve(s, dev, idle, TimeGrid{0.0, 1.0, 2e-5});
  dense_reference(ref, dev, idle, 1.0, 1.0);  // single exact step
  CHECK(block_distance(s, ref) < 1e-6);
}

TEST_CASE("driven evolution matches a dense midpoint reference", "[solver]") {
  DeviceParameters dev = reduced_device();
  StateBlock s = random_block(dev.basis, 1, 13);
  StateBlock ref = s;
  // Center the pulse on the window so the drive is near full strength.
  PulseSchedule drives = drag_on_qubit1(-41.5);
  evolve(s, dev, drives, TimeGrid{0.0, 0.25, 2e-5});
  dense_reference(ref, dev, drives, 0.25, 1e-4);
  CHECK(block_distance(s, ref) < 1e-6);
}

TEST_CASE("splitting error shows second-order convergence in tau", "[solver]") {
  DeviceParameters dev = reduced_device();
  PulseSchedule drives = drag_on_qubit1();
  double errs[2];
  int idx = 0;
  for (double tau : {1e-3, 5e-4}) {
    StateBlock s = random_block(dev.basis, 1, 17);
    StateBlock ref = s;
    evolve(s, dev, drives, TimeGrid{0.0, 0.5, tau});
    dense_reference(ref, dev, drives, 0.5, tau);
    errs[idx++] = block_distance(s, ref);
  }
  double ratio = errs[0] / errs[1];
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("decoupled transmon eigenstate is stationary", "[solver]") {
  DeviceParameters dev = DeviceParameters::defaults();
  dev.g = {0.0, 0.0};
  auto eig = diagonalize_device(dev);
  StateVector psi0 = computational_state(dev.basis, eig, 1, 0);
  PulseSchedule idle;
  double expected = -(eig[0].energies(1) + eig[1].energies(0));

  auto phase_drift = [&](double tau) {
    StateBlock s = StateBlock::zeros(dev.basis, 1);
    s.set_column(0, psi0);
    evolve(s, dev, idle, TimeGrid{0.0, 1.0, tau});
    StateVector psi1 = s.column(0);
    cdouble overlap = 0.0;
    for (int i = 0; i < dev.basis.dim(); ++i)
      overlap += std::conj(psi0.amp[i]) * psi1.amp[i];
    CHECK(std::abs(overlap) == Approx(1.0).margin(1e-9));
    return std::arg(overlap * std::polar(1.0, -expected));
  };

  // The splitting shifts the effective energy at second order in tau, so the
  // accumulated phase drifts; it must be small and shrink 4x when tau halves.
  double d3 = phase_drift(1e-3), d4 = phase_drift(5e-4), d5 = phase_drift(1e-4);
  CHECK(std::abs(d5) < 1e-3);
  CHECK(d3 / d4 > 3.2);
  CHECK(d3 / d4 < 4.8);
}

TEST_CASE("batched columns evolve exactly like separate runs", "[solver]") {
  DeviceParameters dev = reduced_device();
  PulseSchedule drives = drag_on_qubit1();
  StateBlock batch = random_block(dev.basis, 4, 23);
  std::vector<StateBlock> singles;
  for (int c = 0; c < 4; ++c) {
    StateBlock one = StateBlock::zeros(dev.basis, 1);
    one.set_column(0, batch.column(c));
    singles.push_back(one);
  }
  TimeGrid grid{0.0, 0.2, 1e-3};
  evolve(batch, dev, drives, grid);
  for (int c = 0; c < 4; ++c) {
    evolve(singles[c], dev, drives, grid);
    StateVector a = batch.column(c), b = singles[c].column(0);
    double m = 0.0;
    for (int i = 0; i < dev.basis.dim(); ++i)
      m = std::max(m, std::abs(a.amp[i] - b.amp[i]));
    CHECK(m < 1e-13);
  }
}

TEST_CASE("transmon-basis transform is unitary and maps computational states "
          "to unit vectors",
          "[solver]") {
  DeviceParameters dev = DeviceParameters::defaults();
  auto eig = diagonalize_device(dev);
  StateVector psi = computational_state(dev.basis, eig, 1, 1);
  CHECK(psi.norm() == Approx(1.0).margin(1e-12));
  StateVector t = to_transmon_basis(psi, eig);
  CHECK(t.norm() == Approx(1.0).margin(1e-12));
  int hit = dev.basis.index(1, 1, 0);
  for (int i = 0; i < dev.basis.dim(); ++i) {
    if (i == hit) CHECK(std::abs(t.amp[i]) == Approx(1.0).margin(1e-10));
    else CHECK(std::abs(t.amp[i]) < 1e-10);
  }
}

TEST_CASE("idle computational map is the identity in the rotating frame",
          "[solver]") {
  DeviceParameters dev = DeviceParameters::defaults();
  dev.g = {0.0, 0.0};  // bare frequencies are then the frame frequencies
  auto eig = diagonalize_device(dev);
  PulseSchedule idle;
  std::array<double, 2> wbar = {eig[0].omega(), eig[1].omega()};
  Eigen::Matrix4cd m = computational_map(dev, eig, idle, 5.0, 1e-4, wbar,
                                         {0.0, 0.0});
  // Identity up to a global phase and the residual second-order energy drift.
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) CHECK(std::abs(m(i, i)) == Approx(1.0).margin(1e-7));
      else CHECK(std::abs(m(i, j)) < 1e-5);
    }
    CHECK(std::abs(std::arg(m(i, i) / m(0, 0))) < 1e-3);
  }
}

TEST_CASE("snapshots must sit on the step grid", "[solver]") {
  DeviceParameters dev = reduced_device();
  auto eig = diagonalize_device(dev);
  PulseSchedule idle;
  std::vector<SnapshotRequest> bad{{0.00037, {0.0, 0.0}}};
  CHECK_THROWS_AS(
      computational_map_series(dev, eig, idle, bad, 1e-3, {1.0, 1.0}),
      std::invalid_argument);
}

TEST_CASE("under-resolved carriers are rejected", "[solver]") {
  DeviceParameters dev = reduced_device();
  StateBlock s = random_block(dev.basis, 1, 5);
  PulseSchedule fast;
  fast.append({0, EnvelopeKind::gaussian, 0.0, 10.0, 0.01,
               ghz_to_radns(5.0), 0.0});
  CHECK_THROWS_AS(evolve(s, dev, fast, TimeGrid{0.0, 1.0, 0.05}),
                  std::invalid_argument);
}

TEST_CASE("grid validation rejects degenerate spans", "[solver]") {
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, -1e-3}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{1.0, 0.0, 1e-3}).validate(), std::invalid_argument);
  (TimeGrid{0.0, 83.0, 1e-3}).validate();
}
