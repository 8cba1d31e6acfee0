#include "ctqw/partition.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ctqw/permutation.hpp"

namespace ctqw {

namespace {

int qubits_for_dim(std::size_t dim) {
  if (dim < 2 || !std::has_single_bit(dim)) throw std::invalid_argument("partition: dimension must be 2^n with n >= 1");
  return std::countr_zero(dim);
}

// Collects one component while Algorithm 1 runs. Subscripts passed in are
// already 0-based.
class ComponentBuilder {
 public:
  ComponentBuilder(std::uint32_t j, std::size_t dim, std::uint64_t& ops) : ops_(ops) {
    c_.j = j;
    c_.blocks.assign(dim / 2, Block2{});
  }

  // [L_BD]_{bd_r, bd_c} <- [L]_{l_r, l_c}; the read position belongs to L^(j).
  void move(const IntMatrix& l, std::uint32_t bd_r, std::uint32_t bd_c, std::uint32_t l_r, std::uint32_t l_c) {
    const auto v = l(l_r, l_c);
    ops_ += 2;
    write_block(bd_r, bd_c, v);
    if (v != 0) c_.entries.push_back({l_r, l_c, v});
  }

  PartitionComponent finish() && {
    std::sort(c_.entries.begin(), c_.entries.end());
    return std::move(c_);
  }

 private:
  void write_block(std::uint32_t r, std::uint32_t c, std::int64_t v) {
    if ((r >> 1) != (c >> 1)) throw std::logic_error(fmt::format("partition: write ({}, {}) off the block diagonal", r, c));
    auto& b = c_.blocks[r >> 1];
    if (r != c)
      b.b = v;
    else if (r % 2 == 0)
      b.a = v;
    else
      b.d = v;
  }

  PartitionComponent c_;
  std::uint64_t& ops_;
};

}  // namespace

IntMatrix LaplacianPartition::reconstruct() const {
  IntMatrix out(dim());
  for (const auto& c : components)
    for (const auto& e : c.entries) out(e.row, e.col) += e.value;
  return out;
}

LaplacianPartition partition_laplacian(const IntMatrix& l) {
  const int n = qubits_for_dim(l.dim());
  if (!l.is_symmetric()) throw std::invalid_argument("partition: input matrix is not symmetric");
  const auto dim = static_cast<std::uint32_t>(l.dim());

  LaplacianPartition out;
  out.qubits = n;
  out.components.reserve(dim);
  auto& ops = out.operation_count;

  {
    ComponentBuilder diag(0, dim, ops);
    for (std::uint32_t k = 0; k < dim; ++k) diag.move(l, k, k, k, k);
    out.components.push_back(std::move(diag).finish());
  }
  {
    ComponentBuilder first(1, dim, ops);
    for (std::uint32_t k = 0; k < dim; k += 2) {
      first.move(l, k, k + 1, k, k + 1);
      first.move(l, k + 1, k, k + 1, k);
    }
    out.components.push_back(std::move(first).finish());
  }

  // The loop below follows the 1-based subscripts of the element-swap
  // algorithm: a 1-based pair (r, c) is read at (r - 1, c - 1). With
  // alpha = 2u + 2 the BD-side writes land on blocks u and u xor x; the
  // L-side reads are exactly the positions with row xor col == j.
  const std::uint32_t half = dim / 2;
  for (std::uint32_t j = 2; j < dim; ++j) {
    ComponentBuilder comp(j, dim, ops);
    const bool odd = j % 2 == 1;
    const auto g = odd ? ParityClass::Even : ParityClass::Odd;
    const std::uint32_t x = odd ? (j - 1) / 2 : j / 2;
    for (std::uint32_t u = 0; u < half; ++u) {
      const std::uint32_t a = alpha_index(x, u);
      const std::uint32_t b = beta_index(g, x, u);
      if (!(a < b)) continue;
      if (odd) {
        comp.move(l, a - 2, a - 1, a - 2, b - 1);  // [L']_{a-1,a}   <- [L]_{a-1,b}
        comp.move(l, b - 1, b - 2, a - 1, b - 2);  // [L']_{b,b-1}   <- [L]_{a,b-1}
        comp.move(l, a - 1, a - 2, b - 1, a - 2);  // [L']_{a,a-1}   <- [L]_{b,a-1}
        comp.move(l, b - 2, b - 1, b - 2, a - 1);  // [L']_{b-1,b}   <- [L]_{b-1,a}
      } else {
        comp.move(l, a - 2, a - 1, a - 2, b - 1);  // [L']_{a-1,a}   <- [L]_{a-1,b}
        comp.move(l, b - 1, b, a - 1, b);          // [L']_{b,b+1}   <- [L]_{a,b+1}
        comp.move(l, a - 1, a - 2, b - 1, a - 2);  // [L']_{a,a-1}   <- [L]_{b,a-1}
        comp.move(l, b, b - 1, b, a - 1);          // [L']_{b+1,b}   <- [L]_{b+1,a}
      }
    }
    out.components.push_back(std::move(comp).finish());
  }
  return out;
}

std::vector<Block2> conjugated_blocks(const PartitionComponent& c, int qubits) {
  const std::size_t dim = std::size_t{1} << qubits;
  std::vector<std::uint32_t> image(dim);
  for (std::uint32_t i = 0; i < dim; ++i) image[i] = i;
  if (c.j >= 2) {
    for (const auto& t : cycles_for(qubits, c.j).cycles) {
      image[t.alpha - 1] = t.beta - 1;
      image[t.beta - 1] = t.alpha - 1;
    }
  }

  std::vector<Block2> blocks(dim / 2);
  for (const auto& e : c.entries) {
    const auto r = image[e.row], col = image[e.col];
    if ((r >> 1) != (col >> 1))
      throw std::logic_error(fmt::format("component {}: entry ({}, {}) conjugates to ({}, {}), off the block diagonal",
                                         c.j, e.row, e.col, r, col));
    auto& b = blocks[r >> 1];
    if (r != col)
      b.b = e.value;
    else if (r % 2 == 0)
      b.a = e.value;
    else
      b.d = e.value;
  }
  return blocks;
}

IntMatrix dense(const PartitionComponent& c, int qubits) {
  IntMatrix m(std::size_t{1} << qubits);
  for (const auto& e : c.entries) m(e.row, e.col) = e.value;
  return m;
}

PartitionComponent fold_diagonal(const PartitionComponent& diagonal, const PartitionComponent& first) {
  if (diagonal.j != 0 || first.j != 1 || diagonal.blocks.size() != first.blocks.size())
    throw std::invalid_argument("fold_diagonal: expects components 0 and 1 of the same partition");
  PartitionComponent out;
  out.j = 1;
  out.entries = diagonal.entries;
  out.entries.insert(out.entries.end(), first.entries.begin(), first.entries.end());
  std::sort(out.entries.begin(), out.entries.end());
  out.blocks = diagonal.blocks;
  for (std::size_t w = 0; w < out.blocks.size(); ++w) out.blocks[w] += first.blocks[w];
  return out;
}

PartitionCheck verify_partition(const LaplacianPartition& p, const IntMatrix& l) {
  PartitionCheck check;
  check.exact_reconstruction = p.reconstruct() == l;

  const std::size_t dim = p.dim();
  std::vector<int> owners(dim * dim, 0);
  check.structure_law = true;
  check.block_diagonal = p.components.size() == dim;
  for (const auto& c : p.components) {
    for (const auto& e : c.entries) {
      ++owners[std::size_t{e.row} * dim + e.col];
      if (component_of(e.row, e.col) != c.j) check.structure_law = false;
    }
    try {
      if (conjugated_blocks(c, p.qubits) != c.blocks) check.block_diagonal = false;
    } catch (const std::logic_error&) {
      check.block_diagonal = false;
    }
  }
  check.disjoint_supports = std::all_of(owners.begin(), owners.end(), [](int k) { return k <= 1; });
  return check;
}

void to_json(nlohmann::json& out, const LaplacianPartition& p) {
  out = nlohmann::json::object();
  out["n"] = p.qubits;
  auto& comps = out["components"] = nlohmann::json::array();
  for (const auto& c : p.components) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : c.entries) entries.push_back({e.row, e.col, e.value});
    comps.push_back({{"j", c.j}, {"entries", std::move(entries)}});
  }
}

LaplacianPartition partition_from_json(const nlohmann::json& in) {
  LaplacianPartition p;
  p.qubits = in.at("n").get<int>();
  if (p.qubits < 1 || p.qubits > 16) throw std::invalid_argument("partition json: bad n");
  for (const auto& jc : in.at("components")) {
    PartitionComponent c;
    c.j = jc.at("j").get<std::uint32_t>();
    for (const auto& e : jc.at("entries"))
      c.entries.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), e.at(2).get<std::int64_t>()});
    std::sort(c.entries.begin(), c.entries.end());
    c.blocks = conjugated_blocks(c, p.qubits);
    p.components.push_back(std::move(c));
  }
  return p;
}

}  // namespace ctqw
