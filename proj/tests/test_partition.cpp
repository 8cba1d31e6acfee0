#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ctqw/partition.hpp"
#include "ctqw/permutation.hpp"
#include "oracles.hpp"

using namespace ctqw;

namespace {

// Graph with ten edges on eight vertices.
Graph ten_edge_graph() {
  return Graph(3, {{0, 1}, {0, 3}, {0, 6}, {1, 2}, {1, 5}, {2, 7}, {3, 4}, {4, 5}, {5, 6}, {6, 7}});
}

IntMatrix without_diagonal(IntMatrix m) {
  for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) = 0;
  return m;
}

IntMatrix diagonal_only(const IntMatrix& m) {
  IntMatrix d(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) d(i, i) = m(i, i);
  return d;
}

// Component j through dense conjugation with the cycle permutation.
IntMatrix oracle_component(const IntMatrix& l, int n, std::uint32_t j) {
  if (j == 0) return diagonal_only(l);
  return without_diagonal(oracle::conjugation_component(l, permutation_matrix(cycles_for(n, j))));
}

// Blocks of P L^(j) P read from the dense product.
std::vector<Block2> oracle_blocks(const IntMatrix& comp, int n, std::uint32_t j) {
  const auto p = permutation_matrix(cycles_for(n, j));
  const auto c = p * comp * p;
  std::vector<Block2> out(c.dim() / 2);
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = {c(2 * w, 2 * w), c(2 * w, 2 * w + 1), c(2 * w + 1, 2 * w + 1)};
  return out;
}

}  // namespace

TEST(ComponentOf, Examples) {
  EXPECT_EQ(component_of(0, 0), 0u);
  EXPECT_EQ(component_of(0, 1), 1u);
  EXPECT_EQ(component_of(2, 5), 7u);
  // (2, 5) lies in the support of X X X.
  EXPECT_GT(std::abs(oracle::x_string(3, 7)(2, 5)), 0.5);
}

TEST(ComponentOf, MatchesPauliStringSupports) {
  for (int n = 1; n <= 4; ++n) {
    const std::uint32_t dim = 1u << n;
    for (std::uint32_t j = 0; j < dim; ++j) {
      const auto s = oracle::x_string(n, j);
      for (std::uint32_t r = 0; r < dim; ++r)
        for (std::uint32_t c = 0; c < dim; ++c) ASSERT_EQ(std::abs(s(r, c)) > 0.5, component_of(r, c) == j);
    }
  }
}

TEST(Partition, ZeroMatrix) {
  const auto p = partition_laplacian(IntMatrix(8));
  ASSERT_EQ(p.components.size(), 8u);
  for (const auto& c : p.components) {
    EXPECT_TRUE(c.entries.empty());
    for (const auto& b : c.blocks) EXPECT_EQ(b, Block2{});
  }
}

TEST(Partition, CompleteGraphOnTwoVertices) {
  const auto p = partition_laplacian(laplacian(complete_graph(1)));
  ASSERT_EQ(p.components.size(), 2u);
  EXPECT_EQ(p.components[0].entries, (std::vector<MatrixEntry>{{0, 0, 1}, {1, 1, 1}}));
  EXPECT_EQ(p.components[1].entries, (std::vector<MatrixEntry>{{0, 1, -1}, {1, 0, -1}}));
  EXPECT_EQ(p.components[0].blocks, (std::vector<Block2>{{1, 0, 1}}));
  EXPECT_EQ(p.components[1].blocks, (std::vector<Block2>{{0, -1, 0}}));
}

TEST(Partition, RejectsBadInput) {
  IntMatrix asym(4);
  asym(0, 1) = 1;
  EXPECT_THROW(partition_laplacian(asym), std::invalid_argument);
  EXPECT_THROW(partition_laplacian(IntMatrix(6)), std::invalid_argument);
  EXPECT_THROW(partition_laplacian(IntMatrix(1)), std::invalid_argument);
}

TEST(Partition, TenEdgeGraphBlocksMatchDenseConjugation) {
  const auto l = laplacian(ten_edge_graph());
  const auto p = partition_laplacian(l);
  const auto comp3 = oracle_component(l, 3, 3);
  EXPECT_EQ(dense(p.components[3], 3), comp3);
  EXPECT_EQ(p.components[3].blocks, oracle_blocks(comp3, 3, 3));
}

TEST(Partition, AlgorithmMatchesDenseOracle) {
  for (int n = 1; n <= 6; ++n)
    for (double prob : {0.2, 0.5, 0.8, 1.0})
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto l = laplacian(generate_erdos_renyi(n, prob, seed));
        const auto p = partition_laplacian(l);
        for (std::uint32_t j = 0; j < (1u << n); ++j) {
          const auto expect = oracle_component(l, n, j);
          ASSERT_EQ(dense(p.components[j], n), expect) << "n=" << n << " j=" << j;
          ASSERT_EQ(p.components[j].blocks, oracle_blocks(expect, n, j)) << "n=" << n << " j=" << j;
        }
      }
}

TEST(Partition, ExactnessDisjointnessStructure) {
  for (int n = 2; n <= 7; ++n)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const double prob = 0.05 + 0.9 * double(seed) / 19.0;
      const auto l = laplacian(generate_erdos_renyi(n, prob, seed));
      const auto p = partition_laplacian(l);
      const auto check = verify_partition(p, l);
      ASSERT_TRUE(check.exact_reconstruction);
      ASSERT_TRUE(check.disjoint_supports);
      ASSERT_TRUE(check.structure_law);
      ASSERT_TRUE(check.block_diagonal);
      for (const auto& c : p.components) {
        ASSERT_TRUE(dense(c, n).is_symmetric());
        if (c.j == 0) {
          for (const auto& b : c.blocks) ASSERT_EQ(b.b, 0);
        }
      }
    }
}

TEST(Partition, VerifyDetectsTampering) {
  const auto l = laplacian(generate_erdos_renyi(3, 0.6, 5));
  auto p = partition_laplacian(l);
  ASSERT_FALSE(p.components[5].entries.empty());
  p.components[5].entries.front().value += 1;
  EXPECT_FALSE(verify_partition(p, l).exact_reconstruction);
  auto q = partition_laplacian(l);
  auto moved = q.components[5].entries.front();
  q.components[6].entries.push_back(moved);
  q.components[5].entries.erase(q.components[5].entries.begin());
  EXPECT_FALSE(verify_partition(q, l).structure_law);
}

TEST(OperationCount, QuadraticInVertexCount) {
  const auto p3 = partition_laplacian(laplacian(generate_erdos_renyi(3, 0.5, 1)));
  EXPECT_LE(p3.operation_count, 2u * 64u);
  EXPECT_EQ(p3.operation_count, 128u);
  // Zeros are scanned too.
  EXPECT_EQ(partition_laplacian(IntMatrix(32)).operation_count,
            partition_laplacian(laplacian(complete_graph(5))).operation_count);
  for (int n = 2; n <= 9; ++n) {
    const auto a = operation_count(partition_laplacian(IntMatrix(std::size_t{1} << n)));
    const auto b = operation_count(partition_laplacian(IntMatrix(std::size_t{1} << (n + 1))));
    EXPECT_DOUBLE_EQ(double(b) / double(a), 4.0);
  }
}

TEST(FoldDiagonal, AddsBlocks) {
  const auto l = laplacian(generate_erdos_renyi(3, 0.5, 2));
  const auto p = partition_laplacian(l);
  const auto f = fold_diagonal(p.components[0], p.components[1]);
  EXPECT_EQ(f.j, 1u);
  IntMatrix sum = dense(p.components[0], 3);
  const auto d1 = dense(p.components[1], 3);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t k = 0; k < 8; ++k) sum(i, k) += d1(i, k);
  EXPECT_EQ(dense(f, 3), sum);
  EXPECT_EQ(conjugated_blocks(f, 3), f.blocks);
  EXPECT_THROW(fold_diagonal(p.components[1], p.components[0]), std::invalid_argument);
}

TEST(PartitionJson, RoundTrip) {
  const auto l = laplacian(generate_erdos_renyi(4, 0.4, 11));
  const auto p = partition_laplacian(l);
  nlohmann::json j;
  to_json(j, p);
  const auto back = partition_from_json(nlohmann::json::parse(j.dump()));
  ASSERT_EQ(back.components.size(), p.components.size());
  for (std::size_t k = 0; k < p.components.size(); ++k) {
    EXPECT_EQ(back.components[k].entries, p.components[k].entries);
    EXPECT_EQ(back.components[k].blocks, p.components[k].blocks);
  }
  EXPECT_EQ(back.reconstruct(), l);
}
