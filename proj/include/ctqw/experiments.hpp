#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctqw/analysis.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/simulator.hpp"
#include "ctqw/synthesis.hpp"

namespace ctqw {

/// Runs fn(0..count-1) on up to `jobs` threads. Callers write into
/// index-addressed slots, so output order never depends on scheduling. The
/// first exception thrown by any task is rethrown once all threads stop.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

struct StartPolicy {
  enum class Kind { MinDegree, MaxDegree, Index };
  Kind kind = Kind::MinDegree;
  Vertex index = 0;

  Vertex resolve(const Graph& g) const;
  std::string describe() const;
  /// "min-degree", "max-degree" or a vertex index.
  static StartPolicy parse(const std::string& text);
};

struct TimeGrid {
  double t_min = 1e-2;
  double t_max = 1e5;
  int per_decade = 50;
  std::vector<double> times() const { return log_time_grid(t_min, t_max, per_decade); }
};

/// F(t_eff) = |<exact|trotter>|^2 at t_eff = r dt for each step count.
std::vector<FidelitySample> fidelity_curve(const Graph& g, double gamma, double dt,
                                           const std::vector<std::uint64_t>& steps, Vertex start, Backend backend);

/// Pointwise mean of curves sampled at the same times.
std::vector<FidelitySample> average_curves(const std::vector<std::vector<FidelitySample>>& curves);

struct FidelityRow {
  int n;
  double p;
  std::uint64_t seed;
  double dt;
  double t_eff;
  double fidelity;
};

struct SweepConfig {
  int n = 6;
  std::vector<double> p{0.1, 0.4, 0.7, 1.0};
  std::vector<double> dt{1e-2, 1e-3};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double gamma = 1.0;
  TimeGrid grid{};
  StartPolicy start{StartPolicy::Kind::Index, 0};
  Backend backend = Backend::MatrixPower;
  int jobs = 1;
};

/// Rows ordered by (p, dt, seed, t_eff) in the order given by the config.
std::vector<FidelityRow> fidelity_sweep(const SweepConfig& cfg);

struct CutoffConfig {
  std::vector<int> n{3, 4, 5, 6, 7};
  std::vector<double> p{0.1, 0.4, 0.7, 1.0};
  std::vector<double> dt{1e-2, 1e-3};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double gamma = 1.0;
  TimeGrid grid{1e-2, 1e8, 50};
  StartPolicy start{StartPolicy::Kind::Index, 0};
  double threshold = 0.95;
  int jobs = 1;
};

struct CutoffRow {
  int n;
  double p;
  double dt;
  std::optional<std::uint64_t> seed;  // nullopt: the seed-averaged curve
  std::optional<double> tau_c;        // nullopt: beyond horizon
};

struct FitRow {
  double dt;
  double p;
  std::optional<ScalingFit> fit;  // nullopt: fewer than three crossings
};

struct CutoffResult {
  std::vector<CutoffRow> rows;
  std::vector<FitRow> fits;
  std::map<double, double> mean_slope;  // per dt, mean over the fitted p values
};

/// tau_c is read off the seed-averaged fidelity curve for each (n, p, dt);
/// per-seed values are kept alongside. Fits use n against the averaged tau_c.
CutoffResult cutoff_scaling(const CutoffConfig& cfg);

struct LocalizationConfig {
  int n = 5;
  std::vector<double> p{0.1, 0.4};
  std::vector<std::uint64_t> seeds{1};
  double gamma = 1.0;
  double dt = 1e-3;
  std::size_t samples = 1000;
  double horizon = 100.0;
  StartPolicy start{};
  std::size_t contour_samples = 200;
  int jobs = 1;
};

struct ContourRow {
  double t_eff;
  std::size_t vertex;
  double prob;
};

struct LocalizationRun {
  int n;
  double p;
  std::uint64_t seed;
  Vertex start;
  LocalizationProfile exact;
  LocalizationProfile circuit;
  double linf = 0;
  std::vector<ContourRow> contour;  // circuit path
};

LocalizationRun localization_run(const Graph& g, const LocalizationConfig& cfg, double p, std::uint64_t seed);
std::vector<LocalizationRun> localization_study(const LocalizationConfig& cfg);

struct CompleteGraphReport {
  int n;
  std::size_t vertices;
  double max_return_error;  // |exact - closed form| over random t
  double aligned_average_error;
  double ipr_numeric;
  double ipr_closed;
  double ipr_bound;
  bool ok;
};

struct CompleteGraphCheckConfig {
  std::size_t random_times = 100;
  double t_max = 100.0;
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  double horizon = 100.0;   // IPR average horizon (not period aligned)
  int aligned_periods = 7;  // return-probability horizon = periods * 2 pi / N
  double instant_tol = 1e-10;
  double average_tol = 1e-9;
};

CompleteGraphReport complete_graph_check(int n, const CompleteGraphCheckConfig& cfg = {});

struct IprSample {
  double t_eff;
  double ipr;
};

/// IPR of the exact walk at t_k = k T / K, k = 1..K.
std::vector<IprSample> ipr_series(const Graph& g, double gamma, Vertex start, std::size_t samples, double horizon);

struct ComponentDeviation {
  std::uint32_t j;
  double frobenius;
};

struct SynthesisReport {
  Circuit step;
  bool dense_checked = false;
  std::vector<ComponentDeviation> deviations;
  double max_deviation() const;
};

/// Synthesizes one Trotter step. For n <= dense_limit every component circuit
/// is compared against exp(i gamma dt L^(j)) from an eigendecomposition.
SynthesisReport synthesis_report(const Graph& g, double gamma, double dt, const SynthesisOptions& opts,
                                 int dense_limit = 5);

// CSV output. Every file opens with "# " comment lines carrying the config.
void write_comment(std::ostream& out, const std::string& text);
void write_fidelity_csv(std::ostream& out, const std::vector<FidelityRow>& rows);
void write_cutoff_csv(std::ostream& out, const std::vector<CutoffRow>& rows);
void write_fits_csv(std::ostream& out, const std::vector<FitRow>& fits);
/// Columns n,p,seed,vertex,p_bar; `circuit` picks which profile is written.
void write_localization_csv(std::ostream& out, const std::vector<LocalizationRun>& runs, bool circuit);
void write_contour_csv(std::ostream& out, const std::vector<LocalizationRun>& runs);

}  // namespace ctqw
