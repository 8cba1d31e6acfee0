#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ctqw/graph.hpp"
#include "ctqw/partition.hpp"
#include "ctqw/simulator.hpp"

namespace ctqw {

struct LocalizationProfile {
  std::vector<double> p_bar;
  std::size_t start_vertex = 0;
  std::size_t dim() const { return p_bar.size(); }
};

/// Probability vector at time t.
using ProbabilitySampler = std::function<std::vector<double>(double t)>;

/// Mean of p(t_k) over t_k = k T / K, k = 1..K. Throws std::invalid_argument
/// for K == 0 or T <= 0.
LocalizationProfile time_averaged_probability(const ProbabilitySampler& sampler, std::size_t start_vertex,
                                              std::size_t samples, double horizon);

LocalizationProfile time_averaged_probability(const ExactPropagator& exact, std::size_t start_vertex,
                                              std::size_t samples, double horizon);

/// Circuit path: the sample at t_k uses round(t_k / dt) Trotter steps.
LocalizationProfile time_averaged_probability(const TrotterPropagator& circuit, std::size_t start_vertex,
                                              std::size_t samples, double horizon);

/// p_bar(vertex) > 1/N.
bool localization_test(const LocalizationProfile& profile, std::size_t vertex);

double ipr(const std::vector<double>& probabilities);

double complete_graph_return_probability(std::size_t n_vertices, double t);
double complete_graph_average_return(std::size_t n_vertices);
double complete_graph_ipr_average(std::size_t n_vertices);

/// Bound on |mean_k IPR(t_k) - IPR_avg| for K_N sampled at t_k = k T / K.
/// IPR(t) is a quadratic in cos(Nt); each discrete cosine mean obeys
/// |(1/K) sum_k cos(w k h)| <= min(1, 1 / (K |sin(w h / 2)|)).
double complete_graph_ipr_horizon_bound(std::size_t n_vertices, std::size_t samples, double horizon);

struct FidelitySample {
  double t_eff;
  double fidelity;
};

/// First time the fidelity drops below the threshold, interpolated linearly
/// in log t between the bracketing samples. nullopt means the curve never
/// crosses within the samples ("beyond horizon"). A curve that starts below
/// the threshold returns its first time.
std::optional<double> cutoff_time(const std::vector<FidelitySample>& samples, double threshold = 0.95);

struct ScalingFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // RMS of ln(tau) residuals
  std::vector<std::pair<double, double>> points;
};

/// Least squares of ln(tau) on n. Throws std::invalid_argument for fewer
/// than three points or a nonpositive tau.
ScalingFit fit_exponential(const std::vector<std::pair<double, double>>& points);

/// dt^2 * eps * 2^{2n-1}.
double trotter_error_bound(int qubits, double dt, double epsilon = 1.0);
/// T * dt * eps * 2^{2n-1}: the per-step bound times T / dt steps.
double accumulated_trotter_error_bound(int qubits, double dt, double horizon, double epsilon = 1.0);

double spectral_norm(const Eigen::MatrixXcd& m);

/// |U_step - exp(i gamma L dt)| in the spectral norm.
double measured_step_error(const TrotterPropagator& circuit, const ExactPropagator& exact);

/// Logarithmic grid from t_min to t_max inclusive.
std::vector<double> log_time_grid(double t_min, double t_max, int points_per_decade);

/// Distinct step counts round(t / dt) of a grid, ascending, zero dropped.
std::vector<std::uint64_t> step_counts(const std::vector<double>& times, double dt);

}  // namespace ctqw
