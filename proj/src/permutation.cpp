#include "ctqw/permutation.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace ctqw {

namespace {

void check_index(int qubits, std::uint32_t j) {
  if (qubits < 1 || qubits > 16) throw std::out_of_range("permutation: qubit count must be in [1, 16]");
  if (j >= (std::uint32_t{1} << qubits))
    throw std::out_of_range(fmt::format("permutation: j = {} out of range for n = {}", j, qubits));
}

std::uint32_t bit_of_qubit(int qubits, int qubit) { return std::uint32_t{1} << (qubits - qubit); }

}  // namespace

// alpha(u) = sum_{k in kappa} u_k 2^{k+1} + sum_{k not in kappa} u_k 2^{k+1} + 2
std::uint32_t alpha_index(std::uint32_t kappa_mask, std::uint32_t u) {
  return 2 * (u & kappa_mask) + 2 * (u & ~kappa_mask) + 2;
}

// beta(u) flips the kappa bits of u: ubar_k = u_k xor 1 for k in kappa.
std::uint32_t beta_index(ParityClass g, std::uint32_t kappa_mask, std::uint32_t u) {
  const std::uint32_t flipped = ~u & kappa_mask;
  return 2 * flipped + 2 * (u & ~kappa_mask) + (g == ParityClass::Even ? 2 : 1);
}

std::uint32_t CycleSpec::apply(std::uint32_t index) const {
  // 1-based cycle endpoints; the cycles are disjoint so at most one matches.
  const std::uint32_t one_based = index + 1;
  for (const auto& t : cycles) {
    if (t.alpha == one_based) return t.beta - 1;
    if (t.beta == one_based) return t.alpha - 1;
  }
  return index;
}

CycleSpec cycles_for(int qubits, std::uint32_t j) {
  check_index(qubits, j);
  CycleSpec spec;
  spec.qubits = qubits;
  spec.j = j;
  spec.parity = (j % 2 == 1) ? ParityClass::Even : ParityClass::Odd;
  spec.x = (j % 2 == 1) ? (j - 1) / 2 : j / 2;
  for (int k = 0; k < qubits - 1; ++k)
    if (spec.x & (std::uint32_t{1} << k)) spec.kappa.push_back(k);
  if (j < 2) return spec;

  const std::uint32_t half = std::uint32_t{1} << (qubits - 1);
  for (std::uint32_t u = 0; u < half; ++u) {
    const auto a = alpha_index(spec.x, u);
    const auto b = beta_index(spec.parity, spec.x, u);
    if (a < b) spec.cycles.push_back({a, b});
  }
  return spec;
}

CnotSequence cnot_sequence_for(int qubits, std::uint32_t j) {
  check_index(qubits, j);
  CnotSequence seq;
  if (j < 2) return seq;
  const auto spec = cycles_for(qubits, j);
  const int n = qubits;
  CnotSequence fan;
  for (int k : spec.kappa) fan.push_back({n, n - k - 1});
  if (j % 2 == 1) return fan;

  // Even j: one conjugating CNOT on each side of the whole fan.
  const Cnot outer{n - spec.kappa.back() - 1, n};
  seq.push_back(outer);
  seq.insert(seq.end(), fan.begin(), fan.end());
  seq.push_back(outer);
  return seq;
}

IntMatrix permutation_matrix(const CycleSpec& spec) {
  const std::size_t dim = std::size_t{1} << spec.qubits;
  IntMatrix p = IntMatrix::identity(dim);
  for (const auto& t : spec.cycles) {
    const auto a = t.alpha - 1, b = t.beta - 1;
    p(a, a) = 0;
    p(b, b) = 0;
    p(a, b) = 1;
    p(b, a) = 1;
  }
  return p;
}

IntMatrix cnot_sequence_matrix(int qubits, const CnotSequence& seq) {
  const std::size_t dim = std::size_t{1} << qubits;
  IntMatrix m(dim);
  for (std::uint32_t col = 0; col < dim; ++col) {
    std::uint32_t idx = col;
    for (const auto& g : seq) {
      if (g.control == g.target || g.control < 1 || g.target < 1 || g.control > qubits || g.target > qubits)
        throw std::invalid_argument("cnot_sequence_matrix: invalid gate");
      if (idx & bit_of_qubit(qubits, g.control)) idx ^= bit_of_qubit(qubits, g.target);
    }
    m(idx, col) = 1;
  }
  return m;
}

bool verify_cnot_equals_cycles(int qubits, std::uint32_t j) {
  return cnot_sequence_matrix(qubits, cnot_sequence_for(qubits, j)) == permutation_matrix(cycles_for(qubits, j));
}

}  // namespace ctqw
