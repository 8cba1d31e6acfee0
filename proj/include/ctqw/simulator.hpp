#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "ctqw/circuit.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/partition.hpp"
#include "ctqw/synthesis.hpp"

namespace ctqw {

/// 2^n amplitudes; qubit 1 is the most significant bit of the index.
struct Statevector {
  int qubits = 0;
  Eigen::VectorXcd amplitudes;

  static Statevector basis(int qubits, std::size_t index);
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
  std::vector<double> probabilities() const;
};

void apply_gate(Statevector& state, const Gate& gate);

/// Throws std::invalid_argument if the widths differ.
Statevector run_circuit(const Circuit& circuit, Statevector state);

inline constexpr int kMaxDenseQubits = 10;

/// Column-by-column image of the basis; throws std::length_error above
/// kMaxDenseQubits.
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit);

struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns are eigenvectors
  int sweeps = 0;
};

/// Cyclic Jacobi rotations. Converged when the off-diagonal Frobenius mass
/// drops below tol * max(1, |A|_F); throws std::runtime_error after max_sweeps.
SymmetricEigen jacobi_eigensolver(const Eigen::MatrixXd& a, double tol = 1e-12, int max_sweeps = 100);

Eigen::MatrixXd to_dense(const IntMatrix& m);

/// e^{-iHt} with H = -gamma L, through one eigendecomposition of L.
class ExactPropagator {
 public:
  ExactPropagator(const IntMatrix& laplacian, double gamma);

  Statevector evolve(const Statevector& psi0, double t) const;
  Eigen::MatrixXcd unitary(double t) const;
  const SymmetricEigen& eigen() const { return eig_; }

 private:
  int qubits_;
  double gamma_;
  SymmetricEigen eig_;
};

Statevector exact_evolution(const IntMatrix& laplacian, double gamma, double t, const Statevector& psi0);

struct EvolutionParams {
  double gamma = 1.0;
  double dt = 1e-3;
  double t = 0.0;

  /// round(t / dt); throws std::invalid_argument for negative or non-finite input.
  std::uint64_t steps() const;
  double t_eff() const { return double(steps()) * dt; }
};

enum class Backend { Gates, MatrixPower };

class GateBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Repeated application of one synthesized Trotter step.
class TrotterPropagator {
 public:
  static constexpr std::uint64_t kDefaultGateBudget = 2'000'000'000ULL;

  TrotterPropagator(const LaplacianPartition& partition, double gamma, double dt, Backend backend,
                    const SynthesisOptions& opts = {}, std::uint64_t gate_budget = kDefaultGateBudget);

  /// U_step^r psi0. The gates backend throws GateBudgetExceeded when
  /// r * (gates per step) exceeds the budget.
  Statevector evolve(const Statevector& psi0, std::uint64_t r) const;

  const Circuit& step_circuit() const { return step_; }
  /// Dense step unitary, built on first use.
  const Eigen::MatrixXcd& step_unitary() const;
  Backend backend() const { return backend_; }
  double dt() const { return dt_; }

 private:
  const Eigen::MatrixXcd& power_of_two(int k) const;

  int qubits_;
  double dt_;
  Backend backend_;
  std::uint64_t budget_;
  Circuit step_;
  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<Eigen::MatrixXcd>> powers_;  // powers_[k] = U^{2^k}
};

Statevector trotter_evolution(const LaplacianPartition& partition, const EvolutionParams& params,
                              const Statevector& psi0, Backend backend,
                              std::uint64_t gate_budget = TrotterPropagator::kDefaultGateBudget);

/// |<a|b>|^2; throws std::invalid_argument on dimension mismatch.
double fidelity(const Statevector& a, const Statevector& b);

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& u, std::uint64_t r);

}  // namespace ctqw
