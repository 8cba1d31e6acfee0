#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace ctqw {

using Vertex = std::uint32_t;

/// Square integer matrix, row-major. Used for Laplacians and for the dense
/// 0/1 permutation oracles.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0) {}

  std::size_t dim() const { return dim_; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  bool is_symmetric() const;
  IntMatrix operator*(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix&) const = default;

  static IntMatrix identity(std::size_t dim);

 private:
  std::size_t dim_ = 0;
  std::vector<std::int64_t> data_;
};

struct Edge {
  Vertex u;
  Vertex v;  // u < v
  auto operator<=>(const Edge&) const = default;
};

/// Where a graph came from; carried through the edge-list format.
struct GraphOrigin {
  std::optional<double> p;
  std::optional<std::uint64_t> seed;
};

/// Simple undirected graph on N = 2^n vertices. Immutable once built.
class Graph {
 public:
  /// Edges may be given in either orientation; duplicates collapse.
  /// Throws std::invalid_argument on self-loops or out-of-range endpoints.
  Graph(int qubits, std::vector<Edge> edges, GraphOrigin origin = {});

  int qubits() const { return qubits_; }
  std::size_t vertex_count() const { return std::size_t{1} << qubits_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const GraphOrigin& origin() const { return origin_; }

  bool has_edge(Vertex a, Vertex b) const;
  std::vector<std::int64_t> degrees() const;

  bool operator==(const Graph& o) const { return qubits_ == o.qubits_ && edges_ == o.edges_; }

 private:
  int qubits_;
  std::vector<Edge> edges_;  // sorted, unique
  GraphOrigin origin_;
};

/// G(N, p) with N = 2^n. Candidate edges are visited in lexicographic
/// order; each consumes one 53-bit uniform draw from mt19937_64(seed).
Graph generate_erdos_renyi(int qubits, double p, std::uint64_t seed);

Graph complete_graph(int qubits);

/// L = D - A, exact integers.
IntMatrix laplacian(const Graph& g);

enum class DegreeExtremum { Min, Max };

/// Ties go to the lowest index.
Vertex extremal_degree_vertex(const Graph& g, DegreeExtremum mode);

// Edge-list text format:
//   n p seed        (p and seed may be "-")
//   i j             (one line per edge)
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace ctqw
