#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ctqw/circuit.hpp"
#include "ctqw/partition.hpp"

namespace ctqw {

/// exp(i * gamma * dt * B) for a real symmetric 2x2 block, in closed form.
Eigen::Matrix2cd block_exponential(const Block2& block, double gamma, double dt);
Eigen::Matrix2cd block_exponential(const Eigen::Matrix2d& block, double gamma, double dt);

Eigen::Matrix2cd rotation_matrix(Axis axis, double angle);

/// U = e^{i global_phase} Rz(alpha) Ry(gamma) Rz(beta), as a matrix product
/// (so Rz(beta) acts first).
struct BlockUnitary {
  double global_phase = 0;
  double alpha = 0;
  double gamma = 0;  // in [0, pi/2]
  double beta = 0;

  Eigen::Matrix2cd matrix() const;
};

/// Throws std::invalid_argument unless U is unitary to 1e-10.
BlockUnitary zyz_decompose(const Eigen::Matrix2cd& u);

enum class MultiplexorLayout {
  Recursive,  // the nested layout: 2^{k+1} - 2 CNOTs, masks in natural order
  GrayCode,   // one CNOT between rotations: 2^k CNOTs, masks gray(i)
};

/// m_i for i = 0..2^k-1. Bit k-1 of a mask is the first control qubit.
std::vector<std::uint32_t> multiplexor_masks(int k, MultiplexorLayout layout);

/// eta_c = sum_i (-1)^{<c, m_i>} omega_i, summed term by term.
std::vector<double> parity_forward(const std::vector<double>& omega, const std::vector<std::uint32_t>& masks);

/// S[c][i] = (-1)^{popcount(c & m_i)}.
std::vector<std::vector<int>> sign_matrix(const std::vector<std::uint32_t>& masks);

/// Inverts parity_forward through a fast Walsh-Hadamard transform.
/// Throws std::invalid_argument if |eta| is not a power of two or the masks
/// are not a permutation of {0..|eta|-1}.
std::vector<double> solve_multiplexor_angles(const std::vector<double>& eta, const std::vector<std::uint32_t>& masks);

struct MultiplexorSpec {
  Axis axis = Axis::Z;
  int k = 0;
  std::vector<double> eta;
  std::vector<double> omega;
  std::vector<std::uint32_t> masks;
};

MultiplexorSpec make_multiplexor(Axis axis, std::vector<double> eta, MultiplexorLayout layout);

/// Rotations on `target` separated by CNOTs from `controls` (controls[0] is
/// the most significant bit of the control string). The CNOTs between
/// rotation i and i+1 realize m_i xor m_{i+1}; a final group returns the
/// parity to zero. Within a group, later controls are emitted first.
Circuit compile_multiplexor(int qubits, const std::vector<int>& controls, int target, const MultiplexorSpec& spec);

struct SynthesisOptions {
  MultiplexorLayout layout = MultiplexorLayout::Recursive;
  bool decompose_diagonal = false;  // lower DIAG_PHASE to multiplexed Rz + global phase
};

/// Circuit for the direct sum of 2^{n-1} blocks; block w acts on basis states
/// 2w and 2w+1, i.e. qubit n is the target and qubits 1..n-1 select the block.
/// Throws std::invalid_argument if the block count is not 2^{n-1}.
Circuit synthesize_block_diagonal(int qubits, const std::vector<Eigen::Matrix2cd>& blocks,
                                  const SynthesisOptions& opts = {});

/// P_n^j * exp(i gamma dt L_BD^(j)) * P_n^j as a gate list.
Circuit synthesize_component(int qubits, const PartitionComponent& component, double gamma, double dt,
                             const SynthesisOptions& opts = {});

/// One first-order step: components j = 1..N-1 in ascending order, with the
/// diagonal component folded into j = 1.
Circuit synthesize_trotter_step(const LaplacianPartition& partition, double gamma, double dt,
                                const SynthesisOptions& opts = {});

/// Replaces DIAG_PHASE gates by multiplexed Rz rotations on qubits n, n-1, ...,
/// 1 and a closing global phase.
Circuit decompose_diagonal(const Circuit& c, MultiplexorLayout layout = MultiplexorLayout::Recursive);

/// Gate count of the textbook Pauli-string route for a dense real symmetric
/// Hamiltonian: every non-identity string with an even number of Y factors,
/// each costing basis changes, a CNOT ladder and one Rz.
std::uint64_t pauli_string_gate_count(int qubits);

/// Gates in one step as emitted (DIAG_PHASE and GLOBAL_PHASE count as one each).
inline std::uint64_t gate_count(const Circuit& c) { return c.size(); }

}  // namespace ctqw
