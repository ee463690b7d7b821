#include "transmon/metrics.hpp"

#include "transmon/optim.hpp"
#include "transmon/rng.hpp"
#include "transmon/units.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace transmon {

namespace {

using cdouble = std::complex<double>;

constexpr double subspace_dim = 4.0;

// exp of a general complex 2x2 matrix: split off the trace, then use the
// closed form for the traceless remainder whose square is a scalar.
Eigen::Matrix2cd expm2(const Eigen::Matrix2cd& a) {
  cdouble mu = 0.5 * (a(0, 0) + a(1, 1));
  Eigen::Matrix2cd b = a;
  b(0, 0) -= mu;
  b(1, 1) -= mu;
  cdouble delta2 = b(0, 0) * b(0, 0) + b(0, 1) * b(1, 0);
  cdouble delta = std::sqrt(delta2);
  cdouble ch, shd;
  if (std::abs(delta) < 1e-6) {
    ch = 1.0 + delta2 * (0.5 + delta2 / 24.0);
    shd = 1.0 + delta2 * (1.0 / 6.0 + delta2 / 120.0);
  } else {
    ch = std::cosh(delta);
    shd = std::sinh(delta) / delta;
  }
  return std::exp(mu) * (ch * Eigen::Matrix2cd::Identity() + shd * b);
}

double largest_eigenvalue(const Eigen::Matrix4cd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(3);
}

struct DiamondProblem {
  Eigen::Matrix4cd k, kdk;

  explicit DiamondProblem(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& u)
      : k(m * u.adjoint()), kdk(k.adjoint() * k) {}

  // Two-factor norm bound for a given mixing matrix S.
  double eval(const Eigen::Matrix2cd& s) const {
    Eigen::Matrix2cd q = s * s.adjoint();
    double tr = std::real(q(0, 0) + q(1, 1));
    double det = std::real(q(0, 0)) * std::real(q(1, 1)) - std::norm(q(0, 1));
    if (!(det > 0.0) || !std::isfinite(tr))
      return std::numeric_limits<double>::infinity();
    double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    double lmax = 0.5 * tr + disc;
    if (lmax * lmax > 1e13 * det)  // ill-conditioned scaling
      return std::numeric_limits<double>::infinity();
    Eigen::Matrix2cd p;
    p << q(1, 1) / det, -q(0, 1) / det, -q(1, 0) / det, q(0, 0) / det;
    Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    Eigen::Matrix4cd f1 =
        p(0, 0) * kdk - p(0, 1) * k.adjoint() - p(1, 0) * k + p(1, 1) * id;
    Eigen::Matrix4cd f2 =
        q(0, 0) * kdk + q(0, 1) * k.adjoint() + q(1, 0) * k + q(1, 1) * id;
    return 0.5 * std::sqrt(largest_eigenvalue(f1) * largest_eigenvalue(f2));
  }

  double eval_params(const std::vector<double>& a) const {
    Eigen::Matrix2cd m;
    m << cdouble(a[0], a[1]), cdouble(a[2], a[3]), cdouble(a[4], a[5]),
        cdouble(a[6], a[7]);
    return eval(expm2(m));
  }
};

}  // namespace

Eigen::Vector4cd haar_state(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Vector4cd v;
  for (int i = 0; i < 4; ++i) v(i) = cdouble(nd(rng), nd(rng));
  return v / v.norm();
}

double average_gate_fidelity(const Eigen::Matrix4cd& m,
                             const Eigen::Matrix4cd& u, long samples,
                             std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("need a positive sample count");
  Eigen::Matrix4cd k = m * u.adjoint();
  double acc = 0.0;
  long chunks = (samples + rng_chunk - 1) / rng_chunk;
  for (long c = 0; c < chunks; ++c) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    long in_chunk = std::min(rng_chunk, samples - c * rng_chunk);
    double part = 0.0;
    for (long i = 0; i < in_chunk; ++i) {
      Eigen::Vector4cd psi = haar_state(rng);
      part += std::norm(psi.dot(k * psi));
    }
    acc += part;
  }
  return acc / static_cast<double>(samples);
}

double average_gate_fidelity_exact(const Eigen::Matrix4cd& m,
                                   const Eigen::Matrix4cd& u) {
  Eigen::Matrix4cd k = m * u.adjoint();
  double d = subspace_dim;
  return (std::norm(k.trace()) + k.squaredNorm()) / (d * (d + 1.0));
}

double unitarity(const Eigen::Matrix4cd& m, long samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("need a positive sample count");
  Eigen::Matrix4cd mm4 = (m * m.adjoint()) / subspace_dim;
  double acc = 0.0;
  long chunks = (samples + rng_chunk - 1) / rng_chunk;
  for (long c = 0; c < chunks; ++c) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    long in_chunk = std::min(rng_chunk, samples - c * rng_chunk);
    double part = 0.0;
    for (long i = 0; i < in_chunk; ++i) {
      Eigen::Vector4cd v = m * haar_state(rng);
      Eigen::Matrix4cd x = v * v.adjoint() - mm4;
      x -= (x.trace() / subspace_dim) * Eigen::Matrix4cd::Identity();
      part += x.squaredNorm();
    }
    acc += part;
  }
  return (subspace_dim / (subspace_dim - 1.0)) * acc /
         static_cast<double>(samples);
}

double statistical_distance(std::span<const double> p,
                            std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("distributions must have equal size");
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double gate_discrepancy(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& u) {
  return m.squaredNorm() + subspace_dim -
         2.0 * std::abs((m * u.adjoint()).trace());
}

double pauli_error_bound(double f_avg) {
  double d = subspace_dim;
  return (d + 1.0) * (1.0 - f_avg) / d;
}

double diamond_error_upper_bound(double f_avg) {
  double d = subspace_dim;
  return std::sqrt(d * (d + 1.0) * std::max(0.0, 1.0 - f_avg));
}

double diamond_error_rate(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& u,
                          const DiamondOptions& opt) {
  DiamondProblem prob(m, u);
  std::vector<double> best_a(8, 0.0);
  double best = prob.eval_params(best_a);  // identity scaling
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 0.9);
  std::vector<double> a(8);
  for (int i = 0; i < opt.seeds; ++i) {
    for (double& x : a) x = nd(rng);
    double v = prob.eval_params(a);
    if (v < best) {
      best = v;
      best_a = a;
    }
  }
  auto res =
      nelder_mead([&](const std::vector<double>& x) { return prob.eval_params(x); },
                  best_a, std::vector<double>(8, 0.05), 1e-13, opt.polish_evals);
  return std::min(best, res.value);
}

Eigen::Matrix4cd frame_phase_matrix(double phi1, double phi2) {
  Eigen::Vector4cd z;
  for (int m1 = 0; m1 < 2; ++m1)
    for (int m2 = 0; m2 < 2; ++m2)
      z(2 * m1 + m2) = std::polar(1.0, -0.5 * phi1 * (1 - 2 * m1) -
                                           0.5 * phi2 * (1 - 2 * m2));
  return z.asDiagonal();
}

std::array<double, 2> vz_phase_correction(const Eigen::Matrix4cd& m,
                                          const Eigen::Matrix4cd& u) {
  Eigen::Matrix4cd k = m * u.adjoint();
  auto overlap = [&](const std::vector<double>& phi) {
    return -std::abs((frame_phase_matrix(phi[0], phi[1]) * k).trace());
  };
  // Align the (00,11) and (01,10) diagonal pairs for the two starts; the
  // second start flips the relative sign between the pairs.
  double a0 = std::arg(k(0, 0)) - std::arg(k(3, 3));
  double b0 = std::arg(k(1, 1)) - std::arg(k(2, 2));
  std::array<double, 2> best{0.0, 0.0};
  double best_v = std::numeric_limits<double>::infinity();
  for (double b : {b0, b0 + two_pi}) {
    std::vector<double> x0{0.5 * (a0 + b), 0.5 * (a0 - b)};
    auto res = nelder_mead(overlap, x0, {0.25, 0.25}, 1e-14, 500);
    if (res.value < best_v) {
      best_v = res.value;
      best = {std::remainder(res.x[0], two_pi), std::remainder(res.x[1], two_pi)};
    }
  }
  return best;
}

double corrected_discrepancy(const Eigen::Matrix4cd& m,
                             const Eigen::Matrix4cd& u) {
  auto phi = vz_phase_correction(m, u);
  return gate_discrepancy(frame_phase_matrix(phi[0], phi[1]) * m, u);
}

}  // namespace transmon
