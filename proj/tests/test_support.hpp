#pragma once

#include <Eigen/Dense>
#include <functional>
#include <random>

#include "imrec/image.hpp"

namespace imrec::testing {

inline Image random_image(int side, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Image m(side);
  for (double& v : m.values()) v = u(rng);
  return m;
}

inline Eigen::VectorXd as_vector(const Image& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
}

// Columns are op(e_k).
inline Eigen::MatrixXd assemble(int side, const std::function<Image(const Image&)>& op) {
  const Eigen::Index n = static_cast<Eigen::Index>(side) * side;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Image e(side);
    e[static_cast<std::size_t>(k)] = 1.0;
    a.col(k) = as_vector(op(e));
  }
  return a;
}

// 5-point Laplacian with natural boundary conditions, scaled by 1/h^2 (negative semidefinite).
inline Eigen::MatrixXd neumann_laplacian(int side) {
  const double h = 1.0 / (side - 1);
  const Eigen::Index n = static_cast<Eigen::Index>(side) * side;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  auto idx = [side](int i, int j) { return static_cast<Eigen::Index>(i) * side + j; };
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const int nbr[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nbr) {
        if (q[0] < 0 || q[1] < 0 || q[0] >= side || q[1] >= side) continue;
        lap(idx(i, j), idx(q[0], q[1])) += 1.0;
        lap(idx(i, j), idx(i, j)) -= 1.0;
      }
    }
  }
  return lap / (h * h);
}

}  // namespace imrec::testing
