#pragma once

// Test-only reference computations. None of these share code with the
// production routes they check.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ctqw/circuit.hpp"
#include "ctqw/graph.hpp"

namespace oracle {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

inline MatrixXd to_real(const ctqw::IntMatrix& m) {
  MatrixXd d(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) d(i, j) = double(m(i, j));
  return d;
}

/// exp(i theta A) for real symmetric A via Eigen's self-adjoint solver.
inline MatrixXcd exp_i_symmetric(const MatrixXd& a, double theta) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  Eigen::VectorXcd ph(a.rows());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph[k] = std::exp(cd(0, theta * es.eigenvalues()[k]));
  return es.eigenvectors().cast<cd>() * ph.asDiagonal() * es.eigenvectors().transpose().cast<cd>();
}

/// exp(M) by Eigen's Pade-based matrix exponential.
inline MatrixXcd expm(const MatrixXcd& m) { return m.exp(); }

/// Truncated Taylor series of exp(M) for small matrices.
inline MatrixXcd exp_series(const MatrixXcd& m, int terms = 60) {
  MatrixXcd sum = MatrixXcd::Identity(m.rows(), m.cols());
  MatrixXcd term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * m / double(k);
    sum += term;
  }
  return sum;
}

inline MatrixXcd pauli(char c) {
  MatrixXcd p(2, 2);
  switch (c) {
    case 'X':
      p << 0, 1, 1, 0;
      break;
    case 'Y':
      p << 0, cd(0, -1), cd(0, 1), 0;
      break;
    case 'Z':
      p << 1, 0, 0, -1;
      break;
    default:
      p << 1, 0, 0, 1;
  }
  return p;
}

/// Kronecker product of single-qubit factors, qubit 1 leftmost.
inline MatrixXcd kron_all(const std::vector<MatrixXcd>& factors) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (const auto& f : factors) {
    MatrixXcd next = Eigen::kroneckerProduct(out, f).eval();
    out = next;
  }
  return out;
}

/// {I, X} string whose X pattern is the n-bit word `pattern` (qubit 1 = MSB).
inline MatrixXcd x_string(int n, std::uint32_t pattern) {
  std::vector<MatrixXcd> f;
  for (int q = 1; q <= n; ++q) f.push_back(pauli((pattern >> (n - q)) & 1 ? 'X' : 'I'));
  return kron_all(f);
}

/// Full 2^n matrix of one gate built from Kronecker products; the CNOT uses
/// |0><0|_c (x) I + |1><1|_c (x) X_t.
inline MatrixXcd gate_matrix(int n, const ctqw::Gate& g) {
  const auto id = pauli('I');
  if (const auto* c = std::get_if<ctqw::CnotGate>(&g)) {
    MatrixXcd p0(2, 2), p1(2, 2);
    p0 << 1, 0, 0, 0;
    p1 << 0, 0, 0, 1;
    std::vector<MatrixXcd> a(n, id), b(n, id);
    a[c->control - 1] = p0;
    b[c->control - 1] = p1;
    b[c->target - 1] = pauli('X');
    return kron_all(a) + kron_all(b);
  }
  if (const auto* r = std::get_if<ctqw::RotationGate>(&g)) {
    MatrixXcd m(2, 2);
    if (r->axis == ctqw::Axis::Y)
      m << std::cos(r->angle), std::sin(r->angle), -std::sin(r->angle), std::cos(r->angle);
    else
      m << std::exp(cd(0, r->angle)), 0, 0, std::exp(cd(0, -r->angle));
    std::vector<MatrixXcd> f(n, id);
    f[r->target - 1] = m;
    return kron_all(f);
  }
  const std::size_t dim = std::size_t{1} << n;
  if (const auto* d = std::get_if<ctqw::DiagonalPhaseGate>(&g)) {
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = std::exp(cd(0, d->phases[i]));
    return m;
  }
  const auto& gp = std::get<ctqw::GlobalPhaseGate>(g);
  return std::exp(cd(0, gp.angle)) * MatrixXcd::Identity(dim, dim);
}

/// Product of gate matrices; gates[0] acts first.
inline MatrixXcd circuit_matrix(const ctqw::Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.qubits();
  MatrixXcd u = MatrixXcd::Identity(dim, dim);
  for (const auto& g : c.gates()) u = gate_matrix(c.qubits(), g) * u;
  return u;
}

/// Haar-ish random 2x2 unitary from a seeded generator (QR of a Gaussian matrix).
inline Eigen::Matrix2cd random_unitary2(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = cd(nd(rng), nd(rng));
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  return qr.householderQ();
}

/// Dense-multiplication partition route: conjugate L by the permutation
/// matrix, keep the 2x2 block-diagonal positions, conjugate back.
inline ctqw::IntMatrix conjugation_component(const ctqw::IntMatrix& l, const ctqw::IntMatrix& perm) {
  const auto c = perm * l * perm;
  ctqw::IntMatrix masked(l.dim());
  for (std::size_t r = 0; r < l.dim(); ++r)
    for (std::size_t col = 0; col < l.dim(); ++col)
      if ((r >> 1) == (col >> 1)) masked(r, col) = c(r, col);
  return perm * masked * perm;
}

}  // namespace oracle
