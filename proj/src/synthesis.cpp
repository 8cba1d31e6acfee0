#include "ctqw/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/LU>
#include <fmt/format.h>

#include "ctqw/permutation.hpp"

namespace ctqw {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Below this magnitude an off-diagonal (or diagonal) ZYZ entry is treated as
// zero and the degenerate branch beta = 0 is taken.
constexpr double kDegenerate = 1e-14;

void fwht(std::vector<double>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1)
    for (std::size_t i = 0; i < v.size(); i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

void append_cnots(Circuit& c, const CnotSequence& seq) {
  for (const auto& g : seq) c.append(CnotGate{g.control, g.target});
}

}  // namespace

Eigen::Matrix2cd block_exponential(const Eigen::Matrix2d& block, double gamma, double dt) {
  // B = m I + hz Z + hx X with r = |(hz, hx)|; the traceless part squares to r^2 I.
  const double theta = gamma * dt;
  const double m = 0.5 * (block(0, 0) + block(1, 1));
  const double hz = 0.5 * (block(0, 0) - block(1, 1));
  const double hx = 0.5 * (block(0, 1) + block(1, 0));
  const double r = std::hypot(hz, hx);
  const double c = std::cos(theta * r);
  const double s = r > 0 ? std::sin(theta * r) / r : theta;
  const cd phase = std::exp(kI * (theta * m));
  Eigen::Matrix2cd u;
  u << c + kI * s * hz, kI * s * hx, kI * s * hx, c - kI * s * hz;
  return phase * u;
}

Eigen::Matrix2cd block_exponential(const Block2& block, double gamma, double dt) {
  Eigen::Matrix2d b;
  b << double(block.a), double(block.b), double(block.b), double(block.d);
  return block_exponential(b, gamma, dt);
}

Eigen::Matrix2cd rotation_matrix(Axis axis, double angle) {
  Eigen::Matrix2cd m;
  if (axis == Axis::Y) {
    const double c = std::cos(angle), s = std::sin(angle);
    m << c, s, -s, c;
  } else {
    m << std::exp(kI * angle), 0, 0, std::exp(-kI * angle);
  }
  return m;
}

Eigen::Matrix2cd BlockUnitary::matrix() const {
  return std::exp(kI * global_phase) * rotation_matrix(Axis::Z, alpha) * rotation_matrix(Axis::Y, gamma) *
         rotation_matrix(Axis::Z, beta);
}

BlockUnitary zyz_decompose(const Eigen::Matrix2cd& u) {
  const double dev = (u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm();
  if (!(dev < 1e-10)) throw std::invalid_argument(fmt::format("zyz_decompose: input not unitary (deviation {:g})", dev));

  BlockUnitary out;
  out.global_phase = 0.5 * std::arg(u.determinant());
  const Eigen::Matrix2cd v = std::exp(-kI * out.global_phase) * u;
  // v = [[a, b], [-conj(b), conj(a)]] with a = cos(g) e^{i(alpha+beta)}, b = sin(g) e^{i(alpha-beta)}.
  const cd a = v(0, 0), b = v(0, 1);
  out.gamma = std::atan2(std::abs(b), std::abs(a));
  if (std::abs(b) < kDegenerate) {
    out.alpha = std::arg(a);
  } else if (std::abs(a) < kDegenerate) {
    out.alpha = std::arg(b);
  } else {
    out.alpha = 0.5 * (std::arg(a) + std::arg(b));
    out.beta = 0.5 * (std::arg(a) - std::arg(b));
  }
  return out;
}

std::vector<std::uint32_t> multiplexor_masks(int k, MultiplexorLayout layout) {
  if (k < 0 || k > 20) throw std::invalid_argument("multiplexor_masks: k out of range");
  std::vector<std::uint32_t> m(std::size_t{1} << k);
  for (std::uint32_t i = 0; i < m.size(); ++i) m[i] = layout == MultiplexorLayout::Recursive ? i : (i ^ (i >> 1));
  return m;
}

std::vector<double> parity_forward(const std::vector<double>& omega, const std::vector<std::uint32_t>& masks) {
  if (omega.size() != masks.size()) throw std::invalid_argument("parity_forward: omega and masks differ in length");
  std::vector<double> eta(omega.size(), 0.0);
  for (std::uint32_t c = 0; c < eta.size(); ++c)
    for (std::size_t i = 0; i < omega.size(); ++i)
      eta[c] += (std::popcount(c & masks[i]) % 2 ? -1.0 : 1.0) * omega[i];
  return eta;
}

std::vector<std::vector<int>> sign_matrix(const std::vector<std::uint32_t>& masks) {
  std::vector<std::vector<int>> s(masks.size(), std::vector<int>(masks.size()));
  for (std::uint32_t c = 0; c < masks.size(); ++c)
    for (std::size_t i = 0; i < masks.size(); ++i) s[c][i] = std::popcount(c & masks[i]) % 2 ? -1 : 1;
  return s;
}

std::vector<double> solve_multiplexor_angles(const std::vector<double>& eta, const std::vector<std::uint32_t>& masks) {
  if (eta.empty() || !std::has_single_bit(eta.size()))
    throw std::invalid_argument(fmt::format("solve_multiplexor_angles: length {} is not a power of two", eta.size()));
  if (masks.size() != eta.size()) throw std::invalid_argument("solve_multiplexor_angles: masks differ in length");
  std::vector<char> seen(eta.size(), 0);
  for (auto m : masks) {
    if (m >= eta.size() || seen[m]) throw std::invalid_argument("solve_multiplexor_angles: masks are not a permutation");
    seen[m] = 1;
  }
  // S = H P with H the Walsh-Hadamard matrix, so S^{-1} = 2^{-k} S^T.
  std::vector<double> w = eta;
  fwht(w);
  const double scale = 1.0 / double(eta.size());
  std::vector<double> omega(eta.size());
  for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = scale * w[masks[i]];
  return omega;
}

MultiplexorSpec make_multiplexor(Axis axis, std::vector<double> eta, MultiplexorLayout layout) {
  if (eta.empty() || !std::has_single_bit(eta.size()))
    throw std::invalid_argument("make_multiplexor: angle count is not a power of two");
  MultiplexorSpec spec;
  spec.axis = axis;
  spec.k = std::countr_zero(eta.size());
  spec.masks = multiplexor_masks(spec.k, layout);
  spec.omega = solve_multiplexor_angles(eta, spec.masks);
  spec.eta = std::move(eta);
  return spec;
}

Circuit compile_multiplexor(int qubits, const std::vector<int>& controls, int target, const MultiplexorSpec& spec) {
  const int k = static_cast<int>(controls.size());
  if (spec.k != k || spec.omega.size() != (std::size_t{1} << k) || spec.masks.size() != spec.omega.size())
    throw std::invalid_argument("compile_multiplexor: spec does not match the control count");
  Circuit c(qubits);
  const auto toggle = [&](std::uint32_t diff) {
    for (int bit = 0; bit < k; ++bit)
      if (diff & (1u << bit)) c.append(CnotGate{controls[k - 1 - bit], target});
  };
  std::uint32_t parity = 0;
  for (std::size_t i = 0; i < spec.omega.size(); ++i) {
    toggle(parity ^ spec.masks[i]);
    parity = spec.masks[i];
    c.append(RotationGate{spec.axis, target, spec.omega[i]});
  }
  toggle(parity);
  return c;
}

Circuit synthesize_block_diagonal(int qubits, const std::vector<Eigen::Matrix2cd>& blocks, const SynthesisOptions& opts) {
  if (qubits < 1 || blocks.size() != (std::size_t{1} << (qubits - 1)))
    throw std::invalid_argument(
        fmt::format("synthesize_block_diagonal: expected {} blocks, got {}", std::size_t{1} << (qubits - 1), blocks.size()));

  const std::size_t nb = blocks.size();
  std::vector<double> delta(nb), alpha(nb), gamma(nb), beta(nb);
  for (std::size_t w = 0; w < nb; ++w) {
    const auto z = zyz_decompose(blocks[w]);
    delta[w] = z.global_phase;
    alpha[w] = z.alpha;
    gamma[w] = z.gamma;
    beta[w] = z.beta;
  }

  Circuit c(qubits);
  if (qubits == 1) {
    c.append(GlobalPhaseGate{delta[0]});
  } else {
    std::vector<double> phases(2 * nb);
    for (std::size_t w = 0; w < nb; ++w) phases[2 * w] = phases[2 * w + 1] = delta[w];
    c.append(DiagonalPhaseGate{std::move(phases)});
  }

  std::vector<int> controls(qubits - 1);
  for (int q = 1; q < qubits; ++q) controls[q - 1] = q;
  // Rz(beta) acts first, then Ry(gamma), then Rz(alpha).
  c.append(compile_multiplexor(qubits, controls, qubits, make_multiplexor(Axis::Z, std::move(beta), opts.layout)));
  c.append(compile_multiplexor(qubits, controls, qubits, make_multiplexor(Axis::Y, std::move(gamma), opts.layout)));
  c.append(compile_multiplexor(qubits, controls, qubits, make_multiplexor(Axis::Z, std::move(alpha), opts.layout)));
  return opts.decompose_diagonal ? decompose_diagonal(c, opts.layout) : c;
}

Circuit synthesize_component(int qubits, const PartitionComponent& component, double gamma, double dt,
                             const SynthesisOptions& opts) {
  std::vector<Eigen::Matrix2cd> blocks;
  blocks.reserve(component.blocks.size());
  for (const auto& b : component.blocks) blocks.push_back(block_exponential(b, gamma, dt));

  const auto perm = cnot_sequence_for(qubits, component.j);
  Circuit c(qubits);
  append_cnots(c, perm);
  c.append(synthesize_block_diagonal(qubits, blocks, opts));
  append_cnots(c, perm);
  return c;
}

Circuit synthesize_trotter_step(const LaplacianPartition& partition, double gamma, double dt,
                                const SynthesisOptions& opts) {
  const auto& comps = partition.components;
  if (comps.size() != partition.dim() || comps.size() < 2)
    throw std::invalid_argument("synthesize_trotter_step: partition is incomplete");
  Circuit step(partition.qubits);
  step.append(synthesize_component(partition.qubits, fold_diagonal(comps[0], comps[1]), gamma, dt, opts));
  for (std::size_t j = 2; j < comps.size(); ++j)
    step.append(synthesize_component(partition.qubits, comps[j], gamma, dt, opts));
  return step;
}

Circuit decompose_diagonal(const Circuit& c, MultiplexorLayout layout) {
  const int n = c.qubits();
  Circuit out(n);
  for (const auto& g : c.gates()) {
    const auto* d = std::get_if<DiagonalPhaseGate>(&g);
    if (!d) {
      out.append(g);
      continue;
    }
    // Peel one qubit at a time: diag(p0, p1) = e^{i(p0+p1)/2} Rz((p0-p1)/2).
    std::vector<double> phi = d->phases;
    for (int q = n; q >= 1; --q) {
      const std::size_t half = phi.size() / 2;
      std::vector<double> eta(half), mean(half);
      for (std::size_t w = 0; w < half; ++w) {
        eta[w] = 0.5 * (phi[2 * w] - phi[2 * w + 1]);
        mean[w] = 0.5 * (phi[2 * w] + phi[2 * w + 1]);
      }
      std::vector<int> controls(q - 1);
      for (int i = 1; i < q; ++i) controls[i - 1] = i;
      out.append(compile_multiplexor(n, controls, q, make_multiplexor(Axis::Z, std::move(eta), layout)));
      phi = std::move(mean);
    }
    out.append(GlobalPhaseGate{phi[0]});
  }
  return out;
}

std::uint64_t pauli_string_gate_count(int qubits) {
  if (qubits < 1 || qubits > 30) throw std::invalid_argument("pauli_string_gate_count: qubit count out of range");
  const int n = qubits;
  // binom[a][b] for multinomial coefficients.
  std::vector<std::vector<std::uint64_t>> binom(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int a = 0; a <= n; ++a) {
    binom[a][0] = 1;
    for (int b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + (b <= a - 1 ? binom[a - 1][b] : 0);
  }
  std::uint64_t total = 0;
  for (int ny = 0; ny <= n; ny += 2)
    for (int nx = 0; nx + ny <= n; ++nx)
      for (int nz = 0; nx + ny + nz <= n; ++nz) {
        const int w = nx + ny + nz;
        if (w == 0) continue;
        const std::uint64_t strings = binom[n][w] * binom[w][ny] * binom[w - ny][nx];
        const std::uint64_t cost = 2 * std::uint64_t(w - 1) + 1 + 2 * std::uint64_t(nx + ny);
        total += strings * cost;
      }
  return total;
}

}  // namespace ctqw
