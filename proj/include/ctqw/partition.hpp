#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ctqw/graph.hpp"

namespace ctqw {

struct MatrixEntry {
  std::uint32_t row;
  std::uint32_t col;
  std::int64_t value;
  auto operator<=>(const MatrixEntry&) const = default;
};

/// Symmetric 2x2 block [[a, b], [b, d]] of a block-diagonal form.
struct Block2 {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t d = 0;
  bool operator==(const Block2&) const = default;
  Block2& operator+=(const Block2& o) {
    a += o.a;
    b += o.b;
    d += o.d;
    return *this;
  }
};

/// One structural class L^(j): the entries with row xor col == j, and the
/// 2^{n-1} blocks of P_n^j L^(j) P_n^j (block w spans rows 2w, 2w+1).
struct PartitionComponent {
  std::uint32_t j = 0;
  std::vector<MatrixEntry> entries;  // nonzero entries only, sorted
  std::vector<Block2> blocks;
};

struct LaplacianPartition {
  int qubits = 0;
  std::vector<PartitionComponent> components;  // indexed by j
  std::uint64_t operation_count = 0;           // element reads + writes

  std::size_t dim() const { return std::size_t{1} << qubits; }
  IntMatrix reconstruct() const;
};

/// Structural class of a matrix position (0-based).
inline std::uint32_t component_of(std::uint32_t row, std::uint32_t col) { return row ^ col; }

/// Splits a symmetric 2^n x 2^n matrix into its 2^n structural classes.
/// Throws std::invalid_argument for non-symmetric or non-power-of-two input.
LaplacianPartition partition_laplacian(const IntMatrix& l);

inline std::uint64_t operation_count(const LaplacianPartition& p) { return p.operation_count; }

/// Recomputes the blocks of P_n^j L^(j) P_n^j from the component's entries.
/// Throws std::logic_error if the conjugated form is not 2x2 block diagonal.
std::vector<Block2> conjugated_blocks(const PartitionComponent& c, int qubits);

IntMatrix dense(const PartitionComponent& c, int qubits);

/// L^(0) + L^(1): both share the identity permutation, so their blocks add.
PartitionComponent fold_diagonal(const PartitionComponent& diagonal, const PartitionComponent& first);

struct PartitionCheck {
  bool exact_reconstruction = false;
  bool disjoint_supports = false;
  bool structure_law = false;   // every entry satisfies row xor col == j
  bool block_diagonal = false;  // Alg. 1 blocks agree with the conjugation route
  bool ok() const { return exact_reconstruction && disjoint_supports && structure_law && block_diagonal; }
};

PartitionCheck verify_partition(const LaplacianPartition& p, const IntMatrix& l);

void to_json(nlohmann::json& out, const LaplacianPartition& p);
LaplacianPartition partition_from_json(const nlohmann::json& in);

}  // namespace ctqw
