#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ctqw/simulator.hpp"

namespace ctqw {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigensolver(const Eigen::MatrixXd& input, double tol, int max_sweeps) {
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigensolver: matrix is not square");
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = input;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = tol * std::max(1.0, input.norm());

  SymmetricEigen out;
  while (off_diagonal_norm(a) >= target) {
    if (out.sweeps == max_sweeps)
      throw std::runtime_error(fmt::format("jacobi_eigensolver: no convergence after {} sweeps", max_sweeps));
    ++out.sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p, q); t = tan(phi), smaller root.
        const double theta = (a(q, q) - a(p, p)) / (2 * apq);
        const double t = std::abs(theta) > 1e150
                             ? 0.5 / theta
                             : (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        const double tau = s / (1 + c);
        // Increment form keeps the updated entries close to the old ones.
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = a(p, k) = akp - s * (akq + tau * akp);
          a(k, q) = a(q, k) = akq + s * (akp - tau * akq);
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp - s * (vkq + tau * vkp);
          v(k, q) = vkq + s * (vkp - tau * vkq);
        }
      }
  }
  out.values = a.diagonal();
  out.vectors = std::move(v);
  return out;
}

}  // namespace ctqw
