#include "ctqw/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/SVD>
#include <fmt/format.h>

namespace ctqw {

namespace {

void check_average_args(std::size_t samples, double horizon) {
  if (samples == 0) throw std::invalid_argument("time average: need at least one sample");
  if (!(horizon > 0)) throw std::invalid_argument("time average: horizon must be positive");
}

void check_vertices(std::size_t n) {
  if (n < 2) throw std::invalid_argument("complete graph: need N >= 2");
}

// |(1/K) sum_{k=1..K} cos(w k h)| <= min(1, 1 / (K |sin(w h / 2)|))
double cosine_mean_bound(double w, std::size_t samples, double h) {
  const double s = std::abs(std::sin(0.5 * w * h));
  return s > 0 ? std::min(1.0, 1.0 / (double(samples) * s)) : 1.0;
}

}  // namespace

LocalizationProfile time_averaged_probability(const ProbabilitySampler& sampler, std::size_t start_vertex,
                                              std::size_t samples, double horizon) {
  check_average_args(samples, horizon);
  LocalizationProfile out;
  out.start_vertex = start_vertex;
  for (std::size_t k = 1; k <= samples; ++k) {
    const auto p = sampler(double(k) * horizon / double(samples));
    if (out.p_bar.empty()) out.p_bar.assign(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) out.p_bar[i] += p[i];
  }
  for (auto& v : out.p_bar) v /= double(samples);
  return out;
}

LocalizationProfile time_averaged_probability(const ExactPropagator& exact, std::size_t start_vertex,
                                              std::size_t samples, double horizon) {
  const int n = static_cast<int>(std::countr_zero(static_cast<std::size_t>(exact.eigen().values.size())));
  const auto psi0 = Statevector::basis(n, start_vertex);
  return time_averaged_probability([&](double t) { return exact.evolve(psi0, t).probabilities(); }, start_vertex,
                                   samples, horizon);
}

LocalizationProfile time_averaged_probability(const TrotterPropagator& circuit, std::size_t start_vertex,
                                              std::size_t samples, double horizon) {
  const auto psi0 = Statevector::basis(circuit.step_circuit().qubits(), start_vertex);
  const double dt = circuit.dt();
  return time_averaged_probability(
      [&](double t) {
        const auto r = static_cast<std::uint64_t>(std::llround(t / dt));
        return circuit.evolve(psi0, r).probabilities();
      },
      start_vertex, samples, horizon);
}

bool localization_test(const LocalizationProfile& profile, std::size_t vertex) {
  if (vertex >= profile.dim()) throw std::out_of_range("localization_test: vertex out of range");
  return profile.p_bar[vertex] > 1.0 / double(profile.dim());
}

double ipr(const std::vector<double>& p) {
  return std::accumulate(p.begin(), p.end(), 0.0, [](double acc, double x) { return acc + x * x; });
}

double complete_graph_return_probability(std::size_t n_vertices, double t) {
  check_vertices(n_vertices);
  const double n = double(n_vertices);
  return 1 / (n * n) + (1 - 1 / n) * (1 - 1 / n) + (2 / n) * (1 - 1 / n) * std::cos(n * t);
}

double complete_graph_average_return(std::size_t n_vertices) {
  check_vertices(n_vertices);
  const double n = double(n_vertices);
  return 1 - 2 / n + 2 / (n * n);
}

double complete_graph_ipr_average(std::size_t n_vertices) {
  check_vertices(n_vertices);
  const double n = double(n_vertices);
  return 1 - 4 / n + 10 / (n * n) - 6 / (n * n * n);
}

double complete_graph_ipr_horizon_bound(std::size_t n_vertices, std::size_t samples, double horizon) {
  check_vertices(n_vertices);
  check_average_args(samples, horizon);
  // p_v = A + B c and p_u = D (1 - c) for the N - 1 other vertices, c = cos(Nt), so
  // IPR = const + (2AB - 2(N-1)D^2) c + (B^2 + (N-1)D^2) c^2 with c^2 = (1 + cos 2Nt) / 2.
  const double n = double(n_vertices);
  const double a = 1 / (n * n) + (1 - 1 / n) * (1 - 1 / n);
  const double b = (2 / n) * (1 - 1 / n);
  const double d = 2 / (n * n);
  const double c1 = 2 * a * b - 2 * (n - 1) * d * d;
  const double c2 = 0.5 * (b * b + (n - 1) * d * d);
  const double h = horizon / double(samples);
  return std::abs(c1) * cosine_mean_bound(n, samples, h) + std::abs(c2) * cosine_mean_bound(2 * n, samples, h);
}

std::optional<double> cutoff_time(const std::vector<FidelitySample>& s, double threshold) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i].fidelity < threshold)) continue;
    if (i == 0) return s[0].t_eff;
    const auto& lo = s[i - 1];
    const auto& hi = s[i];
    const double frac = (lo.fidelity - threshold) / (lo.fidelity - hi.fidelity);
    return std::exp(std::log(lo.t_eff) + frac * (std::log(hi.t_eff) - std::log(lo.t_eff)));
  }
  return std::nullopt;
}

ScalingFit fit_exponential(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_exponential: need at least three points");
  for (const auto& [n, tau] : points)
    if (!(tau > 0)) throw std::invalid_argument(fmt::format("fit_exponential: nonpositive tau {} at n = {}", tau, n));

  const double k = double(points.size());
  double sx = 0, sy = 0;
  for (const auto& [n, tau] : points) {
    sx += n;
    sy += std::log(tau);
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (const auto& [n, tau] : points) {
    sxx += (n - mx) * (n - mx);
    sxy += (n - mx) * (std::log(tau) - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_exponential: all n values are equal");

  ScalingFit fit;
  fit.points = points;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [n, tau] : points) {
    const double e = std::log(tau) - (fit.slope * n + fit.intercept);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

double trotter_error_bound(int qubits, double dt, double epsilon) {
  if (qubits < 1) throw std::invalid_argument("trotter_error_bound: need n >= 1");
  return dt * dt * epsilon * std::ldexp(1.0, 2 * qubits - 1);
}

double accumulated_trotter_error_bound(int qubits, double dt, double horizon, double epsilon) {
  return horizon / dt * trotter_error_bound(qubits, dt, epsilon);
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

double measured_step_error(const TrotterPropagator& circuit, const ExactPropagator& exact) {
  return spectral_norm(circuit.step_unitary() - exact.unitary(circuit.dt()));
}

std::vector<double> log_time_grid(double t_min, double t_max, int points_per_decade) {
  if (!(t_min > 0) || !(t_max >= t_min) || points_per_decade < 1)
    throw std::invalid_argument("log_time_grid: need 0 < t_min <= t_max and a positive density");
  const double lo = std::log10(t_min), hi = std::log10(t_max);
  const auto intervals = static_cast<long>(std::ceil((hi - lo) * points_per_decade - 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(intervals) + 1);
  for (long i = 0; i < intervals; ++i) grid.push_back(std::pow(10.0, lo + double(i) / points_per_decade));
  grid.push_back(t_max);
  return grid;
}

std::vector<std::uint64_t> step_counts(const std::vector<double>& times, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("step_counts: dt must be positive");
  std::vector<std::uint64_t> r;
  r.reserve(times.size());
  for (double t : times) {
    const auto k = static_cast<std::uint64_t>(std::llround(t / dt));
    if (k > 0) r.push_back(k);
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

}  // namespace ctqw
