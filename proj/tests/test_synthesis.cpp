#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ctqw/graph.hpp"
#include "ctqw/partition.hpp"
#include "ctqw/synthesis.hpp"
#include "oracles.hpp"

using namespace ctqw;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd block_diag(const std::vector<Eigen::Matrix2cd>& blocks) {
  const auto dim = static_cast<Eigen::Index>(2 * blocks.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t w = 0; w < blocks.size(); ++w) m.block<2, 2>(2 * w, 2 * w) = blocks[w];
  return m;
}

std::vector<double> random_angles(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> v(count);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<Eigen::Matrix2cd> rotations(Axis axis, const std::vector<double>& eta) {
  std::vector<Eigen::Matrix2cd> out;
  for (double a : eta) {
    Eigen::Matrix2cd m;
    if (axis == Axis::Y)
      m << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
    else
      m << std::exp(cd(0, a)), 0, 0, std::exp(cd(0, -a));
    out.push_back(m);
  }
  return out;
}

double unitarity_error(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm();
}

}  // namespace

TEST(BlockExponential, SwapBlockAtQuarterTurn) {
  const auto u = block_exponential(Block2{1, -1, 1}, 1.0, kPi / 2);
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  // Unit-modulus phase taken from the off-diagonal entry.
  const cd phase = u(0, 1);
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LT((u - phase * x).norm(), 1e-12);
  EXPECT_LT((u - oracle::exp_series(cd(0, kPi / 2) * (oracle::pauli('I') - oracle::pauli('X'))))
                .norm(),
            1e-12);
}

TEST(BlockExponential, TrivialBlocks) {
  EXPECT_LT((block_exponential(Block2{}, 1.0, 0.3) - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
  const auto u = block_exponential(Block2{4, 0, 4}, 0.5, 0.1);
  EXPECT_LT((u - std::exp(cd(0, 0.2)) * Eigen::Matrix2cd::Identity()).norm(), 1e-15);
}

TEST(BlockExponential, MatchesSeriesAndEigenOracles) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> ent(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const Block2 b{ent(rng), ent(rng), ent(rng)};
    const double theta = 0.37 * (trial % 7 + 1);
    Eigen::MatrixXd m(2, 2);
    m << double(b.a), double(b.b), double(b.b), double(b.d);
    const auto u = block_exponential(b, 1.0, theta);
    EXPECT_LT((u - oracle::exp_i_symmetric(m, theta)).norm(), 1e-12);
    // The series loses digits to cancellation for large arguments; keep it to short steps.
    const double small = 0.05 * (trial % 7 + 1);
    EXPECT_LT((block_exponential(b, 1.0, small) - oracle::exp_series(cd(0, small) * m.cast<cd>(), 80)).norm(), 1e-12);
  }
}

TEST(Zyz, CanonicalExamples) {
  const auto id = zyz_decompose(Eigen::Matrix2cd::Identity());
  EXPECT_DOUBLE_EQ(id.global_phase, 0.0);
  EXPECT_DOUBLE_EQ(id.alpha, 0.0);
  EXPECT_DOUBLE_EQ(id.gamma, 0.0);
  EXPECT_DOUBLE_EQ(id.beta, 0.0);

  const auto ry = zyz_decompose(rotation_matrix(Axis::Y, 0.3));
  EXPECT_NEAR(ry.global_phase, 0.0, 1e-15);
  EXPECT_NEAR(ry.alpha, 0.0, 1e-15);
  EXPECT_NEAR(ry.beta, 0.0, 1e-15);
  EXPECT_NEAR(ry.gamma, 0.3, 1e-15);
}

TEST(Zyz, RoundTripRandomUnitaries) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Matrix2cd u = oracle::random_unitary2(rng);
    const auto z = zyz_decompose(u);
    EXPECT_LT((z.matrix() - u).norm(), 1e-10);
    EXPECT_GE(z.gamma, 0.0);
    EXPECT_LE(z.gamma, kPi / 2 + 1e-15);
    EXPECT_LT(unitarity_error(z.matrix()), 1e-12);
  }
}

TEST(Zyz, DegenerateCases) {
  Eigen::Matrix2cd anti;
  anti << 0, std::exp(cd(0, 0.4)), -std::exp(cd(0, -0.4)), 0;
  const auto a = zyz_decompose(anti);
  EXPECT_LT((a.matrix() - anti).norm(), 1e-12);
  EXPECT_DOUBLE_EQ(a.beta, 0.0);

  Eigen::Matrix2cd diag;
  diag << std::exp(cd(0, 1.1)), 0, 0, std::exp(cd(0, -0.3));
  const auto d = zyz_decompose(diag);
  EXPECT_LT((d.matrix() - diag).norm(), 1e-12);
  EXPECT_DOUBLE_EQ(d.beta, 0.0);
  EXPECT_DOUBLE_EQ(d.gamma, 0.0);
}

TEST(Zyz, RejectsNonUnitary) {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, 2;
  EXPECT_THROW(zyz_decompose(m), std::invalid_argument);
}

TEST(Multiplexor, TwoControlSignMatrix) {
  const auto s = sign_matrix(multiplexor_masks(2, MultiplexorLayout::Recursive));
  const std::vector<std::vector<int>> expect{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  EXPECT_EQ(s, expect);
}

TEST(Multiplexor, TwoControlForwardAndInverse) {
  const auto masks = multiplexor_masks(2, MultiplexorLayout::Recursive);
  const auto eta = parity_forward({1, 0, 0, 0}, masks);
  EXPECT_EQ(eta, (std::vector<double>{1, 1, 1, 1}));
  const auto omega = solve_multiplexor_angles(eta, masks);
  EXPECT_EQ(omega, (std::vector<double>{1, 0, 0, 0}));
}

TEST(Multiplexor, OneControlWalshPair) {
  const auto omega = solve_multiplexor_angles({0.9, 0.3}, multiplexor_masks(1, MultiplexorLayout::Recursive));
  EXPECT_NEAR(omega[0], 0.6, 1e-15);
  EXPECT_NEAR(omega[1], 0.3, 1e-15);
}

TEST(Multiplexor, RejectsBadInput) {
  EXPECT_THROW(solve_multiplexor_angles({1, 2, 3}, {0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(solve_multiplexor_angles({1, 2}, {0, 0}), std::invalid_argument);
}

TEST(Multiplexor, ForwardInverseRoundTrip) {
  std::mt19937_64 rng(5);
  for (auto layout : {MultiplexorLayout::Recursive, MultiplexorLayout::GrayCode})
    for (int k = 0; k <= 6; ++k) {
      const auto masks = multiplexor_masks(k, layout);
      const auto eta = random_angles(rng, std::size_t{1} << k);
      const auto back = parity_forward(solve_multiplexor_angles(eta, masks), masks);
      for (std::size_t c = 0; c < eta.size(); ++c) ASSERT_NEAR(back[c], eta[c], 1e-12);
    }
}

TEST(Multiplexor, MaskLayouts) {
  EXPECT_EQ(multiplexor_masks(2, MultiplexorLayout::Recursive), (std::vector<std::uint32_t>{0, 1, 2, 3}));
  EXPECT_EQ(multiplexor_masks(2, MultiplexorLayout::GrayCode), (std::vector<std::uint32_t>{0, 1, 3, 2}));
}

TEST(Multiplexor, CnotCountsAndCircuitPatterns) {
  // One control: R C R C.
  const auto one = compile_multiplexor(2, {1}, 2, make_multiplexor(Axis::Z, {0.1, 0.2}, MultiplexorLayout::Recursive));
  ASSERT_EQ(one.size(), 4u);
  EXPECT_TRUE(std::holds_alternative<RotationGate>(one.gates()[0]));
  EXPECT_EQ(std::get<CnotGate>(one.gates()[1]), (CnotGate{1, 2}));
  EXPECT_TRUE(std::holds_alternative<RotationGate>(one.gates()[2]));
  EXPECT_EQ(std::get<CnotGate>(one.gates()[3]), (CnotGate{1, 2}));

  // Two controls, nested layout: R C2 R C2 C1 R C2 R C2 C1.
  const auto two =
      compile_multiplexor(3, {1, 2}, 3, make_multiplexor(Axis::Y, {0.1, 0.2, 0.3, 0.4}, MultiplexorLayout::Recursive));
  EXPECT_EQ(two.rotation_count(), 4u);
  EXPECT_EQ(two.cnot_count(), 6u);
  std::string pattern;
  for (const auto& g : two.gates())
    pattern += std::holds_alternative<RotationGate>(g) ? "R" : "C" + std::to_string(std::get<CnotGate>(g).control);
  EXPECT_EQ(pattern, "RC2RC2C1RC2RC2C1");

  const auto gray =
      compile_multiplexor(3, {1, 2}, 3, make_multiplexor(Axis::Y, {0.1, 0.2, 0.3, 0.4}, MultiplexorLayout::GrayCode));
  EXPECT_EQ(gray.rotation_count(), 4u);
  EXPECT_EQ(gray.cnot_count(), 4u);

  for (int k = 1; k <= 6; ++k) {
    std::vector<int> controls(k);
    for (int q = 0; q < k; ++q) controls[q] = q + 1;
    const std::vector<double> eta(std::size_t{1} << k, 0.1);
    EXPECT_EQ(compile_multiplexor(k + 1, controls, k + 1, make_multiplexor(Axis::Z, eta, MultiplexorLayout::Recursive))
                  .cnot_count(),
              (std::size_t{2} << k) - 2);
    EXPECT_EQ(compile_multiplexor(k + 1, controls, k + 1, make_multiplexor(Axis::Z, eta, MultiplexorLayout::GrayCode))
                  .cnot_count(),
              std::size_t{1} << k);
  }
}

TEST(Multiplexor, DenseUnitaryIsDirectSumOfRotations) {
  std::mt19937_64 rng(9);
  for (auto layout : {MultiplexorLayout::Recursive, MultiplexorLayout::GrayCode})
    for (auto axis : {Axis::Y, Axis::Z})
      for (int k = 0; k <= 4; ++k) {
        std::vector<int> controls(k);
        for (int q = 0; q < k; ++q) controls[q] = q + 1;
        const auto eta = random_angles(rng, std::size_t{1} << k);
        const auto c = compile_multiplexor(k + 1, controls, k + 1, make_multiplexor(axis, eta, layout));
        ASSERT_LT((oracle::circuit_matrix(c) - block_diag(rotations(axis, eta))).norm(), 1e-12) << k;
      }
}

TEST(Multiplexor, ConstantAnglesCollapse) {
  const auto spec = make_multiplexor(Axis::Y, std::vector<double>(8, 0.7), MultiplexorLayout::Recursive);
  EXPECT_NEAR(spec.omega[0], 0.7, 1e-15);
  for (std::size_t i = 1; i < spec.omega.size(); ++i) EXPECT_NEAR(spec.omega[i], 0.0, 1e-15);
}

TEST(BlockDiagonal, IdentityBlocks) {
  const std::vector<Eigen::Matrix2cd> blocks(4, Eigen::Matrix2cd::Identity());
  const auto c = synthesize_block_diagonal(3, blocks);
  EXPECT_LT((oracle::circuit_matrix(c) - Eigen::MatrixXcd::Identity(8, 8)).norm(), 1e-14);
  EXPECT_THROW(synthesize_block_diagonal(3, std::vector<Eigen::Matrix2cd>(3, Eigen::Matrix2cd::Identity())),
               std::invalid_argument);
}

TEST(BlockDiagonal, SingleQubitIsPlainZyz) {
  std::mt19937_64 rng(4);
  const Eigen::Matrix2cd u = oracle::random_unitary2(rng);
  const auto c = synthesize_block_diagonal(1, {u});
  ASSERT_EQ(c.size(), 4u);
  EXPECT_TRUE(std::holds_alternative<GlobalPhaseGate>(c.gates()[0]));
  EXPECT_EQ(c.cnot_count(), 0u);
  EXPECT_LT((oracle::circuit_matrix(c) - u).norm(), 1e-10);
}

TEST(BlockDiagonal, RandomBlocksMatchDirectSum) {
  std::mt19937_64 rng(21);
  for (auto layout : {MultiplexorLayout::Recursive, MultiplexorLayout::GrayCode})
    for (bool lower : {false, true})
      for (int n = 1; n <= 5; ++n) {
        std::vector<Eigen::Matrix2cd> blocks;
        for (std::size_t w = 0; w < (std::size_t{1} << (n - 1)); ++w) blocks.push_back(oracle::random_unitary2(rng));
        const auto c = synthesize_block_diagonal(n, blocks, {layout, lower});
        const auto u = oracle::circuit_matrix(c);
        ASSERT_LT((u - block_diag(blocks)).norm(), 1e-10) << n;
        ASSERT_LT(unitarity_error(u), 1e-10);
        if (lower) {
          for (const auto& g : c.gates()) ASSERT_FALSE(std::holds_alternative<DiagonalPhaseGate>(g));
        }
      }
}

TEST(DecomposeDiagonal, MatchesDiagonalPhase) {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 5; ++n) {
    Circuit c(n);
    c.append(DiagonalPhaseGate{random_angles(rng, std::size_t{1} << n)});
    const auto d = decompose_diagonal(c);
    EXPECT_LT((oracle::circuit_matrix(d) - oracle::circuit_matrix(c)).norm(), 1e-12) << n;
  }
}

TEST(Component, ZeroComponentIsIdentity) {
  const auto p = partition_laplacian(IntMatrix(8));
  for (std::uint32_t j = 1; j < 8; ++j) {
    const auto c = synthesize_component(3, p.components[j], 1.0, 0.1);
    EXPECT_LT((oracle::circuit_matrix(c) - Eigen::MatrixXcd::Identity(8, 8)).norm(), 1e-14);
    for (const auto& g : c.gates())
      if (const auto* r = std::get_if<RotationGate>(&g)) {
        EXPECT_EQ(r->angle, 0.0);
      }
  }
}

TEST(Component, TwoVertexQuarterTurnSwaps) {
  const auto p = partition_laplacian(laplacian(complete_graph(1)));
  const auto c = synthesize_component(1, fold_diagonal(p.components[0], p.components[1]), 1.0, kPi / 2);
  const auto u = oracle::circuit_matrix(c);
  EXPECT_NEAR(std::abs(u(0, 1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(1, 0)), 1.0, 1e-12);
}

TEST(Component, MatchesMatrixExponentialOracle) {
  for (int n = 1; n <= 5; ++n)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const double prob = 0.1 + 0.8 * double(seed % 5) / 4.0;
      const auto l = laplacian(generate_erdos_renyi(n, prob, seed));
      const auto part = partition_laplacian(l);
      const double gamma = 1.0, dt = 0.05 + 0.01 * double(seed);
      for (std::uint32_t j = 1; j < (1u << n); ++j) {
        const auto comp = j == 1 ? fold_diagonal(part.components[0], part.components[1]) : part.components[j];
        const auto expect = oracle::expm(cd(0, gamma * dt) * oracle::to_real(dense(comp, n)).cast<cd>());
        const auto u = oracle::circuit_matrix(synthesize_component(n, comp, gamma, dt));
        ASSERT_LT((u - expect).norm(), 1e-10) << "n=" << n << " seed=" << seed << " j=" << j;
        ASSERT_LT(unitarity_error(u), 1e-10);
      }
    }
}

TEST(TrotterStep, EmptyGraphIsIdentity) {
  const auto p = partition_laplacian(IntMatrix(8));
  const auto u = oracle::circuit_matrix(synthesize_trotter_step(p, 1.0, 0.1));
  EXPECT_LT((u - Eigen::MatrixXcd::Identity(8, 8)).norm(), 1e-13);
}

TEST(TrotterStep, SingleQubitIsExact) {
  const auto l = laplacian(complete_graph(1));
  const auto u = oracle::circuit_matrix(synthesize_trotter_step(partition_laplacian(l), 1.0, 0.7));
  EXPECT_LT((u - oracle::exp_i_symmetric(oracle::to_real(l), 0.7)).norm(), 1e-12);
}

TEST(TrotterStep, OrderedProductOfComponents) {
  const auto l = laplacian(generate_erdos_renyi(3, 0.4, 12));
  const auto p = partition_laplacian(l);
  const double dt = 1e-3;
  Eigen::MatrixXcd expect = oracle::exp_i_symmetric(oracle::to_real(dense(fold_diagonal(p.components[0], p.components[1]), 3)), dt);
  for (std::uint32_t j = 2; j < 8; ++j) expect = oracle::exp_i_symmetric(oracle::to_real(dense(p.components[j], 3)), dt) * expect;
  const auto u = oracle::circuit_matrix(synthesize_trotter_step(p, 1.0, dt));
  EXPECT_LT((u - expect).norm(), 1e-10);
  const auto exact = oracle::exp_i_symmetric(oracle::to_real(l), dt);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u - exact);
  EXPECT_LE(svd.singularValues()(0), dt * dt * std::pow(2.0, 5));
}

std::uint64_t complete_graph_step_gates(int n, MultiplexorLayout layout) {
  const auto p = partition_laplacian(laplacian(complete_graph(n)));
  return gate_count(synthesize_trotter_step(p, 1.0, 1e-3, {layout, false}));
}

TEST(GateCount, GrayLayoutBelowPauliStringRoute) {
  for (int n = 3; n <= 8; ++n) {
    const auto ours = complete_graph_step_gates(n, MultiplexorLayout::GrayCode);
    EXPECT_LT(ours, pauli_string_gate_count(n)) << "n=" << n;
    // (2^n - 1) components of O(2^n) gates each.
    EXPECT_LE(double(ours), 4.0 * std::pow(4.0, n)) << "n=" << n;
  }
}

// The nested layout spends 2^{k+1} - 2 CNOTs per multiplexor instead of 2^k,
// which puts it above the Pauli-string count at n = 3 (245 vs 217). From
// n = 4 on it is below.
TEST(GateCount, RecursiveLayoutCrossover) {
  EXPECT_EQ(complete_graph_step_gates(3, MultiplexorLayout::Recursive), 245u);
  EXPECT_EQ(pauli_string_gate_count(3), 217u);
  for (int n = 4; n <= 8; ++n) {
    const auto ours = complete_graph_step_gates(n, MultiplexorLayout::Recursive);
    EXPECT_LT(ours, pauli_string_gate_count(n)) << "n=" << n;
    EXPECT_LE(double(ours), 5.0 * std::pow(4.0, n)) << "n=" << n;
  }
}

TEST(GateCount, PauliStringFormulaSmallCases) {
  // n=1: X (cost 3), Z (cost 1); Y excluded.
  EXPECT_EQ(pauli_string_gate_count(1), 4u);
}
