#pragma once

#include <Eigen/Dense>

#include <complex>

namespace transmon {

// Ideal gate matrices on the computational subspace. Row and column index
// 2*m1 + m2, so qubit 1 is the leading bit.

inline Eigen::Matrix2cd rotation_x(double theta) {
  double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  Eigen::Matrix2cd u;
  u << std::complex<double>(c, 0.0), std::complex<double>(0.0, -s),
      std::complex<double>(0.0, -s), std::complex<double>(c, 0.0);
  return u;
}

inline Eigen::Matrix2cd rotation_z(double theta) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
  u(0, 0) = std::polar(1.0, -0.5 * theta);
  u(1, 1) = std::polar(1.0, 0.5 * theta);
  return u;
}

inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a,
                              const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline Eigen::Matrix4cd on_qubit(const Eigen::Matrix2cd& u, int qubit) {
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return qubit == 0 ? kron2(u, id) : kron2(id, u);
}

inline Eigen::Matrix4cd ideal_cnot(int control, int target) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  for (int m1 = 0; m1 < 2; ++m1)
    for (int m2 = 0; m2 < 2; ++m2) {
      int m[2] = {m1, m2};
      int out[2] = {m1, m2};
      if (m[control] == 1) out[target] ^= 1;
      u(2 * out[0] + out[1], 2 * m1 + m2) = 1.0;
    }
  return u;
}

}  // namespace transmon
