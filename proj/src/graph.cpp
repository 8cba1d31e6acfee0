#include "ctqw/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace ctqw {

bool IntMatrix::is_symmetric() const {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r + 1; c < dim_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (rhs.dim_ != dim_) throw std::invalid_argument("IntMatrix: dimension mismatch");
  IntMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = 0; k < dim_; ++k) {
      const auto a = (*this)(r, k);
      if (a == 0) continue;
      for (std::size_t c = 0; c < dim_; ++c) out(r, c) += a * rhs(k, c);
    }
  return out;
}

IntMatrix IntMatrix::identity(std::size_t dim) {
  IntMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

Graph::Graph(int qubits, std::vector<Edge> edges, GraphOrigin origin)
    : qubits_(qubits), edges_(std::move(edges)), origin_(origin) {
  if (qubits < 1 || qubits > 16) throw std::invalid_argument("Graph: qubit count must be in [1, 16]");
  const auto n = static_cast<Vertex>(vertex_count());
  for (auto& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument(fmt::format("Graph: self-loop at vertex {}", e.u));
    if (e.u >= n || e.v >= n)
      throw std::invalid_argument(fmt::format("Graph: edge {{{}, {}}} out of range for N = {}", e.u, e.v, n));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

std::vector<std::int64_t> Graph::degrees() const {
  std::vector<std::int64_t> d(vertex_count(), 0);
  for (const auto& e : edges_) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

Graph generate_erdos_renyi(int qubits, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(fmt::format("erdos_renyi: p = {} outside [0, 1]", p));
  if (qubits < 1 || qubits > 16) throw std::invalid_argument("erdos_renyi: qubit count must be in [1, 16]");
  const auto n = static_cast<Vertex>(std::size_t{1} << qubits);
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) edges.push_back({i, j});
    }
  }
  return Graph(qubits, std::move(edges), GraphOrigin{p, seed});
}

Graph complete_graph(int qubits) {
  if (qubits < 1 || qubits > 16) throw std::invalid_argument("complete_graph: qubit count must be in [1, 16]");
  const auto n = static_cast<Vertex>(std::size_t{1} << qubits);
  std::vector<Edge> edges;
  edges.reserve(std::size_t{n} * (n - 1) / 2);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(qubits, std::move(edges), GraphOrigin{1.0, std::nullopt});
}

IntMatrix laplacian(const Graph& g) {
  IntMatrix l(g.vertex_count());
  for (const auto& e : g.edges()) {
    l(e.u, e.v) = -1;
    l(e.v, e.u) = -1;
    ++l(e.u, e.u);
    ++l(e.v, e.v);
  }
  return l;
}

Vertex extremal_degree_vertex(const Graph& g, DegreeExtremum mode) {
  const auto d = g.degrees();
  const auto it = mode == DegreeExtremum::Min ? std::min_element(d.begin(), d.end())
                                              : std::max_element(d.begin(), d.end());
  return static_cast<Vertex>(it - d.begin());
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto& o = g.origin();
  out << g.qubits() << ' ' << (o.p ? fmt::format("{}", *o.p) : std::string("-")) << ' '
      << (o.seed ? std::to_string(*o.seed) : std::string("-")) << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("edge list: missing header line");
  std::istringstream header(line);
  int qubits = 0;
  std::string p_tok = "-", seed_tok = "-";
  if (!(header >> qubits)) throw std::invalid_argument("edge list: header must start with the qubit count");
  header >> p_tok >> seed_tok;
  GraphOrigin origin;
  try {
    if (p_tok != "-") origin.p = std::stod(p_tok);
    if (seed_tok != "-") origin.seed = std::stoull(seed_tok);
  } catch (const std::exception&) {
    throw std::invalid_argument("edge list: malformed header '" + line + "'");
  }

  std::vector<Edge> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    long long a = -1, b = -1;
    if (!(row >> a >> b) || a < 0 || b < 0)
      throw std::invalid_argument(fmt::format("edge list: bad edge on line {}", line_no));
    edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b)});
  }
  return Graph(qubits, std::move(edges), origin);
}

}  // namespace ctqw
