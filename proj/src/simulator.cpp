#include "ctqw/simulator.hpp"

#include <bit>
#include <cmath>
#include <complex>

#include <fmt/format.h>

namespace ctqw {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::size_t bit_of(int qubits, int qubit) { return std::size_t{1} << (qubits - qubit); }

void apply_single(Eigen::VectorXcd& a, std::size_t tbit, const Eigen::Matrix2cd& m) {
  const auto dim = static_cast<std::size_t>(a.size());
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & tbit) continue;
    const cd a0 = a[i], a1 = a[i | tbit];
    a[i] = m(0, 0) * a0 + m(0, 1) * a1;
    a[i | tbit] = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

}  // namespace

Statevector Statevector::basis(int qubits, std::size_t index) {
  if (qubits < 1 || qubits > 30) throw std::invalid_argument("Statevector: qubit count out of range");
  const std::size_t dim = std::size_t{1} << qubits;
  if (index >= dim) throw std::out_of_range("Statevector: basis index out of range");
  Statevector s{qubits, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim))};
  s.amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amplitudes[static_cast<Eigen::Index>(i)]);
  return p;
}

void apply_gate(Statevector& s, const Gate& gate) {
  const int n = s.qubits;
  auto& a = s.amplitudes;
  std::visit(overloaded{
                 [&](const CnotGate& g) {
                   const auto cbit = bit_of(n, g.control), tbit = bit_of(n, g.target);
                   for (std::size_t i = 0; i < s.dim(); ++i)
                     if ((i & cbit) && !(i & tbit)) std::swap(a[i], a[i | tbit]);
                 },
                 [&](const RotationGate& g) {
                   const auto tbit = bit_of(n, g.target);
                   if (g.axis == Axis::Z) {
                     const cd up = std::exp(kI * g.angle), down = std::conj(up);
                     for (std::size_t i = 0; i < s.dim(); ++i) a[i] *= (i & tbit) ? down : up;
                   } else {
                     apply_single(a, tbit, rotation_matrix(Axis::Y, g.angle));
                   }
                 },
                 [&](const DiagonalPhaseGate& g) {
                   for (std::size_t i = 0; i < s.dim(); ++i) a[i] *= std::exp(kI * g.phases[i]);
                 },
                 [&](const GlobalPhaseGate& g) { a *= std::exp(kI * g.angle); },
             },
             gate);
}

Statevector run_circuit(const Circuit& circuit, Statevector state) {
  if (circuit.qubits() != state.qubits || state.dim() != (std::size_t{1} << state.qubits))
    throw std::invalid_argument(
        fmt::format("run_circuit: circuit on {} qubits, state on {}", circuit.qubits(), state.qubits));
  for (const auto& g : circuit.gates()) apply_gate(state, g);
  return state;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
  const int n = circuit.qubits();
  if (n < 1 || n > kMaxDenseQubits)
    throw std::length_error(fmt::format("circuit_unitary: {} qubits outside [1, {}]", n, kMaxDenseQubits));
  const auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    u.col(col) = run_circuit(circuit, Statevector::basis(n, static_cast<std::size_t>(col))).amplitudes;
  return u;
}

Eigen::MatrixXd to_dense(const IntMatrix& m) {
  const auto dim = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd d(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) d(i, j) = double(m(i, j));
  return d;
}

ExactPropagator::ExactPropagator(const IntMatrix& laplacian, double gamma)
    : qubits_(std::countr_zero(laplacian.dim())), gamma_(gamma) {
  if (!laplacian.is_symmetric()) throw std::invalid_argument("ExactPropagator: Laplacian is not symmetric");
  eig_ = jacobi_eigensolver(to_dense(laplacian));
}

Statevector ExactPropagator::evolve(const Statevector& psi0, double t) const {
  if (psi0.qubits != qubits_) throw std::invalid_argument("ExactPropagator: state width mismatch");
  const auto& q = eig_.vectors;
  // e^{iγLt} = Q diag(e^{iγλt}) Q^T
  Eigen::VectorXcd coeff = q.transpose().cast<cd>() * psi0.amplitudes;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff[k] *= std::exp(kI * (gamma_ * eig_.values[k] * t));
  return Statevector{qubits_, q.cast<cd>() * coeff};
}

Eigen::MatrixXcd ExactPropagator::unitary(double t) const {
  const auto& q = eig_.vectors;
  Eigen::VectorXcd phases(eig_.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::exp(kI * (gamma_ * eig_.values[k] * t));
  return q.cast<cd>() * phases.asDiagonal() * q.transpose().cast<cd>();
}

Statevector exact_evolution(const IntMatrix& laplacian, double gamma, double t, const Statevector& psi0) {
  return ExactPropagator(laplacian, gamma).evolve(psi0, t);
}

std::uint64_t EvolutionParams::steps() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("EvolutionParams: dt must be positive");
  if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("EvolutionParams: t must be non-negative");
  return static_cast<std::uint64_t>(std::llround(t / dt));
}

TrotterPropagator::TrotterPropagator(const LaplacianPartition& partition, double gamma, double dt, Backend backend,
                                     const SynthesisOptions& opts, std::uint64_t gate_budget)
    : qubits_(partition.qubits),
      dt_(dt),
      backend_(backend),
      budget_(gate_budget),
      step_(synthesize_trotter_step(partition, gamma, dt, opts)) {}

const Eigen::MatrixXcd& TrotterPropagator::step_unitary() const { return power_of_two(0); }

const Eigen::MatrixXcd& TrotterPropagator::power_of_two(int k) const {
  std::lock_guard lock(mu_);
  if (powers_.empty()) powers_.push_back(std::make_unique<Eigen::MatrixXcd>(circuit_unitary(step_)));
  while (static_cast<int>(powers_.size()) <= k) {
    const auto& last = *powers_.back();
    powers_.push_back(std::make_unique<Eigen::MatrixXcd>(last * last));
  }
  return *powers_[k];
}

Statevector TrotterPropagator::evolve(const Statevector& psi0, std::uint64_t r) const {
  if (psi0.qubits != qubits_) throw std::invalid_argument("TrotterPropagator: state width mismatch");
  if (backend_ == Backend::Gates) {
    const std::uint64_t per_step = std::max<std::uint64_t>(1, step_.size());
    if (r > budget_ / per_step)
      throw GateBudgetExceeded(
          fmt::format("gates backend: {} steps x {} gates exceeds the budget of {}", r, per_step, budget_));
    Statevector s = psi0;
    for (std::uint64_t i = 0; i < r; ++i) s = run_circuit(step_, std::move(s));
    return s;
  }
  Statevector s = psi0;
  for (int k = 0; r >> k; ++k)
    if ((r >> k) & 1) s.amplitudes = power_of_two(k) * s.amplitudes;
  return s;
}

Statevector trotter_evolution(const LaplacianPartition& partition, const EvolutionParams& params,
                              const Statevector& psi0, Backend backend, std::uint64_t gate_budget) {
  return TrotterPropagator(partition, params.gamma, params.dt, backend, {}, gate_budget)
      .evolve(psi0, params.steps());
}

double fidelity(const Statevector& a, const Statevector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::norm(a.amplitudes.dot(b.amplitudes));
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& u, std::uint64_t r) {
  if (u.rows() != u.cols()) throw std::invalid_argument("matrix_power: matrix is not square");
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  Eigen::MatrixXcd base = u;
  while (r) {
    if (r & 1) result = result * base;
    r >>= 1;
    if (r) base = base * base;
  }
  return result;
}

}  // namespace ctqw
