#include "transmon/model.hpp"

#include "transmon/units.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace transmon {

void BasisConfig::validate() const {
  if (n_min >= 0 || n_max <= 0)
    throw std::invalid_argument("charge window must contain n = 0");
  if (n_states() < 5)
    throw std::invalid_argument("charge window too small (need >= 5 states)");
  if (k_max < 0) throw std::invalid_argument("k_max must be >= 0");
}

DeviceParameters DeviceParameters::defaults() {
  DeviceParameters dev;
  dev.ec = {ghz_to_radns(1.204), ghz_to_radns(1.204)};
  dev.ej = {ghz_to_radns(13.349), ghz_to_radns(12.292)};
  dev.g = {ghz_to_radns(0.07), ghz_to_radns(0.07)};
  dev.omega_r = ghz_to_radns(7.0);
  return dev;
}

void DeviceParameters::validate() const {
  basis.validate();
  for (int i = 0; i < 2; ++i) {
    if (!(ec[i] > 0.0) || !(ej[i] > 0.0))
      throw std::invalid_argument("transmon energies must be positive");
    if (!std::isfinite(g[i]))
      throw std::invalid_argument("coupling must be finite");
    double ratio = ej[i] / ec[i];
    if (ratio < 5.0 || ratio > 50.0)
      std::cerr << "warning: qubit " << i + 1 << " has Ej/Ec = " << ratio
                << ", outside the usual transmon regime\n";
  }
  if (!(omega_r > 0.0))
    throw std::invalid_argument("resonator frequency must be positive");
}

DeviceParameters DeviceParameters::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open device file: " + path);
  DeviceParameters dev = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, eq;
    double value;
    if (!(ls >> key)) continue;  // blank line
    if (!(ls >> eq >> value) || eq != "=")
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    if (key == "ec1") dev.ec[0] = ghz_to_radns(value);
    else if (key == "ec2") dev.ec[1] = ghz_to_radns(value);
    else if (key == "ej1") dev.ej[0] = ghz_to_radns(value);
    else if (key == "ej2") dev.ej[1] = ghz_to_radns(value);
    else if (key == "g1") dev.g[0] = ghz_to_radns(value);
    else if (key == "g2") dev.g[1] = ghz_to_radns(value);
    else if (key == "omega_r") dev.omega_r = ghz_to_radns(value);
    else if (key == "n_min") dev.basis.n_min = static_cast<int>(value);
    else if (key == "n_max") dev.basis.n_max = static_cast<int>(value);
    else if (key == "k_max") dev.basis.k_max = static_cast<int>(value);
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
  }
  dev.validate();
  return dev;
}

void DeviceParameters::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write device file: " + path);
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "ec1 = %.17g\nej1 = %.17g\nec2 = %.17g\nej2 = %.17g\n"
                "g1 = %.17g\ng2 = %.17g\nomega_r = %.17g\n"
                "n_min = %d\nn_max = %d\nk_max = %d\n",
                radns_to_ghz(ec[0]), radns_to_ghz(ej[0]), radns_to_ghz(ec[1]),
                radns_to_ghz(ej[1]), radns_to_ghz(g[0]), radns_to_ghz(g[1]),
                radns_to_ghz(omega_r), basis.n_min, basis.n_max, basis.k_max);
  out << buf;
}

Eigen::MatrixXd build_cpb_matrix(double ec, double ej, const BasisConfig& basis,
                                 double n_g) {
  if (!std::isfinite(n_g))
    throw std::invalid_argument("gate charge must be finite");
  int n = basis.n_states();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double q = basis.charge(i) - n_g;
    h(i, i) = ec * q * q;
    if (i + 1 < n) {
      h(i, i + 1) = -0.5 * ej;
      h(i + 1, i) = -0.5 * ej;
    }
  }
  return h;
}

TransmonEigenbasis diagonalize_transmon(double ec, double ej,
                                        const BasisConfig& basis) {
  Eigen::MatrixXd h = build_cpb_matrix(ec, ej, basis, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("transmon diagonalization failed");
  TransmonEigenbasis eig;
  eig.energies = es.eigenvalues();
  eig.b = es.eigenvectors();

  // Fix each eigenvector phase: the dominant charge component is made real
  // and positive, ties broken towards the lowest charge index.
  int n = basis.n_states();
  for (int m = 0; m < n; ++m) {
    double amax = eig.b.col(m).cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      if (std::abs(eig.b(i, m)) >= (1.0 - 1e-8) * amax) {
        if (eig.b(i, m) < 0.0) eig.b.col(m) *= -1.0;
        break;
      }
    }
  }

  double scale = std::abs(eig.energies(n - 1) - eig.energies(0));
  if (eig.energies(1) - eig.energies(0) < 1e-12 * scale ||
      eig.energies(2) - eig.energies(1) < 1e-12 * scale)
    eig.degenerate = true;
  return eig;
}

std::array<TransmonEigenbasis, 2> diagonalize_device(DeviceParameters& dev) {
  std::array<TransmonEigenbasis, 2> out = {
      diagonalize_transmon(dev.ec[0], dev.ej[0], dev.basis),
      diagonalize_transmon(dev.ec[1], dev.ej[1], dev.basis)};
  for (int i = 0; i < 2; ++i) {
    dev.omega[i] = out[i].omega();
    dev.alpha[i] = out[i].alpha();
  }
  return out;
}

std::vector<HamiltonianTerm> hamiltonian_terms(const DeviceParameters& dev) {
  const BasisConfig& basis = dev.basis;
  int n = basis.n_states();
  int nk = basis.k_states();

  Eigen::VectorXd charge(n);
  for (int i = 0; i < n; ++i) charge(i) = basis.charge(i);

  Eigen::VectorXd fock_off(nk - 1);
  for (int k = 0; k + 1 < nk; ++k) fock_off(k) = std::sqrt(k + 1.0);

  std::vector<HamiltonianTerm> terms;
  for (int q = 0; q < 2; ++q) {
    HamiltonianTerm cpb;
    cpb.label = q == 0 ? "cpb1" : "cpb2";
    cpb.drive_qubit = q;
    cpb.ec = dev.ec[q];
    FactorMatrix f;
    f.axis = q == 0 ? FactorMatrix::Axis::qubit1 : FactorMatrix::Axis::qubit2;
    f.diag = dev.ec[q] * charge.array().square();
    f.offdiag = Eigen::VectorXd::Constant(n - 1, -0.5 * dev.ej[q]);
    cpb.factors.push_back(std::move(f));
    terms.push_back(std::move(cpb));
  }
  {
    HamiltonianTerm res;
    res.label = "resonator";
    FactorMatrix f;
    f.axis = FactorMatrix::Axis::resonator;
    f.diag = Eigen::VectorXd::LinSpaced(nk, 0.0, nk - 1.0) * dev.omega_r;
    res.factors.push_back(std::move(f));
    terms.push_back(std::move(res));
  }
  for (int q = 0; q < 2; ++q) {
    HamiltonianTerm cpl;
    cpl.label = q == 0 ? "coupling1" : "coupling2";
    FactorMatrix fn;
    fn.axis = q == 0 ? FactorMatrix::Axis::qubit1 : FactorMatrix::Axis::qubit2;
    fn.diag = dev.g[q] * charge;
    FactorMatrix fa;
    fa.axis = FactorMatrix::Axis::resonator;
    fa.diag = Eigen::VectorXd::Zero(nk);
    fa.offdiag = fock_off;
    cpl.factors.push_back(std::move(fn));
    cpl.factors.push_back(std::move(fa));
    terms.push_back(std::move(cpl));
  }
  return terms;
}

namespace {

// Dense matrix of one factor on its own axis.
Eigen::MatrixXd factor_dense(const FactorMatrix& f) {
  int n = f.diag.size();
  Eigen::MatrixXd m = f.diag.asDiagonal();
  for (int i = 0; i + 1 < n; ++i)
    if (f.offdiag.size() > 0) {
      m(i, i + 1) = f.offdiag(i);
      m(i + 1, i) = f.offdiag(i);
    }
  return m;
}

}  // namespace

Eigen::MatrixXd assemble_dense(const std::vector<HamiltonianTerm>& terms,
                               const BasisConfig& basis, double n_g1,
                               double n_g2) {
  int n = basis.n_states();
  int nk = basis.k_states();
  int d = basis.dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);

  std::array<double, 2> ng = {n_g1, n_g2};
  for (const auto& term : terms) {
    // Per-axis dense factors, identity where absent.
    std::array<Eigen::MatrixXd, 3> fac = {Eigen::MatrixXd::Identity(n, n),
                                          Eigen::MatrixXd::Identity(n, n),
                                          Eigen::MatrixXd::Identity(nk, nk)};
    for (const auto& f : term.factors) {
      Eigen::MatrixXd m = factor_dense(f);
      if (term.drive_qubit >= 0 && f.offdiag.size() > 0) {
        // CPB diagonal re-evaluated at the requested gate charge.
        double g = ng[term.drive_qubit];
        for (int i = 0; i < n; ++i) {
          double q = basis.charge(i) - g;
          m(i, i) = term.ec * q * q;
        }
      }
      fac[static_cast<int>(f.axis)] = std::move(m);
    }
    for (int i1 = 0; i1 < n; ++i1)
      for (int j1 = 0; j1 < n; ++j1)
        for (int i2 = 0; i2 < n; ++i2)
          for (int j2 = 0; j2 < n; ++j2) {
            if (fac[0](i1, j1) == 0.0) continue;
            double p12 = fac[0](i1, j1) * fac[1](i2, j2);
            if (p12 == 0.0) continue;
            for (int ik = 0; ik < nk; ++ik)
              for (int jk = 0; jk < nk; ++jk) {
                double v = p12 * fac[2](ik, jk);
                if (v != 0.0)
                  h(basis.index(i1, i2, ik), basis.index(j1, j2, jk)) += v;
              }
          }
  }
  return h;
}

}  // namespace transmon
