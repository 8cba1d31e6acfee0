#pragma once

#include <cstdint>
#include <vector>

#include "ctqw/graph.hpp"

namespace ctqw {

/// Parity class of a 2-cycle family. Even: both endpoints of every cycle are
/// even (1-based). Odd: exactly one endpoint is odd. Odd j uses Even cycles
/// and even j uses Odd cycles.
enum class ParityClass { Even, Odd };

/// 1-based transposition (alpha beta), alpha < beta.
struct Transposition {
  std::uint32_t alpha;
  std::uint32_t beta;
  bool operator==(const Transposition&) const = default;
};

struct CycleSpec {
  int qubits = 0;
  std::uint32_t j = 0;
  ParityClass parity = ParityClass::Even;
  std::uint32_t x = 0;               // n-1 bit string: (j-1)/2 or j/2
  std::vector<int> kappa;            // set bit positions of x, ascending
  std::vector<Transposition> cycles;

  std::uint32_t kappa_mask() const { return x; }
  /// Image of a 0-based index under the permutation (an involution).
  std::uint32_t apply(std::uint32_t index) const;
};

/// Qubits are 1-based; qubit 1 is the most significant bit of a vertex index.
struct Cnot {
  int control;
  int target;
  bool operator==(const Cnot&) const = default;
};

using CnotSequence = std::vector<Cnot>;

// Index functions of the cycle construction, 1-based, for a set of flipped
// bit positions kappa (as a mask over the n-1 bits of u).
std::uint32_t alpha_index(std::uint32_t kappa_mask, std::uint32_t u);
std::uint32_t beta_index(ParityClass g, std::uint32_t kappa_mask, std::uint32_t u);

/// Throws std::out_of_range unless 0 <= j < 2^n.
CycleSpec cycles_for(int qubits, std::uint32_t j);
CnotSequence cnot_sequence_for(int qubits, std::uint32_t j);

/// Dense 0/1 matrix of the product of the spec's transpositions.
IntMatrix permutation_matrix(const CycleSpec& spec);

/// Dense 0/1 matrix of a CNOT sequence (gates applied left to right).
IntMatrix cnot_sequence_matrix(int qubits, const CnotSequence& seq);

bool verify_cnot_equals_cycles(int qubits, std::uint32_t j);

}  // namespace ctqw
