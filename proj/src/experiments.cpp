#include "ctqw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ctqw/partition.hpp"

namespace ctqw {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Vertex StartPolicy::resolve(const Graph& g) const {
  switch (kind) {
    case Kind::MinDegree:
      return extremal_degree_vertex(g, DegreeExtremum::Min);
    case Kind::MaxDegree:
      return extremal_degree_vertex(g, DegreeExtremum::Max);
    case Kind::Index:
      if (index >= g.vertex_count())
        throw std::invalid_argument(fmt::format("start vertex {} outside a {}-vertex graph", index, g.vertex_count()));
      return index;
  }
  throw std::logic_error("StartPolicy: unknown kind");
}

std::string StartPolicy::describe() const {
  switch (kind) {
    case Kind::MinDegree:
      return "min-degree";
    case Kind::MaxDegree:
      return "max-degree";
    case Kind::Index:
      return std::to_string(index);
  }
  return "?";
}

StartPolicy StartPolicy::parse(const std::string& text) {
  if (text == "min-degree") return {Kind::MinDegree, 0};
  if (text == "max-degree") return {Kind::MaxDegree, 0};
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text[0] == '-')
    throw std::invalid_argument("start vertex must be min-degree, max-degree or a vertex index, got '" + text + "'");
  return {Kind::Index, static_cast<Vertex>(v)};
}

std::vector<FidelitySample> fidelity_curve(const Graph& g, double gamma, double dt,
                                           const std::vector<std::uint64_t>& steps, Vertex start, Backend backend) {
  const auto l = laplacian(g);
  const ExactPropagator exact(l, gamma);
  const TrotterPropagator trotter(partition_laplacian(l), gamma, dt, backend);
  const auto psi0 = Statevector::basis(g.qubits(), start);
  std::vector<FidelitySample> out;
  out.reserve(steps.size());
  for (auto r : steps) {
    const double t = double(r) * dt;
    out.push_back({t, fidelity(exact.evolve(psi0, t), trotter.evolve(psi0, r))});
  }
  return out;
}

std::vector<FidelitySample> average_curves(const std::vector<std::vector<FidelitySample>>& curves) {
  if (curves.empty()) return {};
  std::vector<FidelitySample> mean = curves.front();
  for (auto& s : mean) s.fidelity = 0;
  for (const auto& c : curves) {
    if (c.size() != mean.size()) throw std::invalid_argument("average_curves: curves have different lengths");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i].t_eff != mean[i].t_eff) throw std::invalid_argument("average_curves: curves sampled at different times");
      mean[i].fidelity += c[i].fidelity;
    }
  }
  for (auto& s : mean) s.fidelity /= double(curves.size());
  return mean;
}

std::vector<FidelityRow> fidelity_sweep(const SweepConfig& cfg) {
  struct Task {
    double p, dt;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double p : cfg.p)
    for (double dt : cfg.dt)
      for (auto seed : cfg.seeds) tasks.push_back({p, dt, seed});

  const auto times = cfg.grid.times();
  std::vector<std::vector<FidelitySample>> curves(tasks.size());
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    const auto& t = tasks[i];
    const auto g = generate_erdos_renyi(cfg.n, t.p, t.seed);
    curves[i] = fidelity_curve(g, cfg.gamma, t.dt, step_counts(times, t.dt), cfg.start.resolve(g), cfg.backend);
  });

  std::vector<FidelityRow> rows;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    for (const auto& s : curves[i]) rows.push_back({cfg.n, tasks[i].p, tasks[i].seed, tasks[i].dt, s.t_eff, s.fidelity});
  return rows;
}

CutoffResult cutoff_scaling(const CutoffConfig& cfg) {
  if (cfg.n.size() < 3) throw std::invalid_argument("cutoff_scaling: need at least three qubit counts");
  struct Task {
    int n;
    double p, dt;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double dt : cfg.dt)
    for (double p : cfg.p)
      for (int n : cfg.n)
        for (auto seed : cfg.seeds) tasks.push_back({n, p, dt, seed});

  const auto times = cfg.grid.times();
  std::vector<std::vector<FidelitySample>> curves(tasks.size());
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    const auto& t = tasks[i];
    const auto g = generate_erdos_renyi(t.n, t.p, t.seed);
    curves[i] = fidelity_curve(g, cfg.gamma, t.dt, step_counts(times, t.dt), cfg.start.resolve(g), Backend::MatrixPower);
  });

  CutoffResult res;
  const std::size_t per_group = cfg.seeds.size();
  std::size_t at = 0;
  for (double dt : cfg.dt) {
    std::vector<double> slopes;
    for (double p : cfg.p) {
      std::vector<std::pair<double, double>> points;
      for (int n : cfg.n) {
        std::vector<std::vector<FidelitySample>> group(curves.begin() + at, curves.begin() + at + per_group);
        const auto tau = cutoff_time(average_curves(group), cfg.threshold);
        res.rows.push_back({n, p, dt, std::nullopt, tau});
        for (std::size_t s = 0; s < per_group; ++s)
          res.rows.push_back({n, p, dt, cfg.seeds[s], cutoff_time(group[s], cfg.threshold)});
        if (tau) points.emplace_back(double(n), *tau);
        at += per_group;
      }
      FitRow fit{dt, p, std::nullopt};
      if (points.size() >= 3) {
        fit.fit = fit_exponential(points);
        slopes.push_back(fit.fit->slope);
      }
      res.fits.push_back(std::move(fit));
    }
    if (!slopes.empty()) {
      double sum = 0;
      for (double s : slopes) sum += s;
      res.mean_slope[dt] = sum / double(slopes.size());
    }
  }
  return res;
}

LocalizationRun localization_run(const Graph& g, const LocalizationConfig& cfg, double p, std::uint64_t seed) {
  const auto l = laplacian(g);
  const ExactPropagator exact(l, cfg.gamma);
  const TrotterPropagator circuit(partition_laplacian(l), cfg.gamma, cfg.dt, Backend::MatrixPower);

  LocalizationRun run;
  run.n = g.qubits();
  run.p = p;
  run.seed = seed;
  run.start = cfg.start.resolve(g);
  run.exact = time_averaged_probability(exact, run.start, cfg.samples, cfg.horizon);
  run.circuit = time_averaged_probability(circuit, run.start, cfg.samples, cfg.horizon);
  for (std::size_t v = 0; v < run.exact.dim(); ++v)
    run.linf = std::max(run.linf, std::abs(run.exact.p_bar[v] - run.circuit.p_bar[v]));

  const auto psi0 = Statevector::basis(g.qubits(), run.start);
  for (std::size_t k = 0; k <= cfg.contour_samples; ++k) {
    const double t = cfg.contour_samples ? double(k) * cfg.horizon / double(cfg.contour_samples) : 0.0;
    const auto r = static_cast<std::uint64_t>(std::llround(t / cfg.dt));
    const auto prob = circuit.evolve(psi0, r).probabilities();
    for (std::size_t v = 0; v < prob.size(); ++v) run.contour.push_back({double(r) * cfg.dt, v, prob[v]});
    if (!cfg.contour_samples) break;
  }
  return run;
}

std::vector<LocalizationRun> localization_study(const LocalizationConfig& cfg) {
  struct Task {
    double p;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double p : cfg.p)
    for (auto seed : cfg.seeds) tasks.push_back({p, seed});
  std::vector<LocalizationRun> runs(tasks.size());
  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t i) {
    runs[i] = localization_run(generate_erdos_renyi(cfg.n, tasks[i].p, tasks[i].seed), cfg, tasks[i].p, tasks[i].seed);
  });
  return runs;
}

CompleteGraphReport complete_graph_check(int n, const CompleteGraphCheckConfig& cfg) {
  const auto g = complete_graph(n);
  const std::size_t big_n = g.vertex_count();
  const ExactPropagator exact(laplacian(g), 1.0);
  const auto psi0 = Statevector::basis(n, 0);

  CompleteGraphReport rep{};
  rep.n = n;
  rep.vertices = big_n;

  std::mt19937_64 rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.random_times; ++i) {
    const double t = double(rng() >> 11) * 0x1.0p-53 * cfg.t_max;
    const double numeric = std::norm(exact.evolve(psi0, t).amplitudes[0]);
    rep.max_return_error = std::max(rep.max_return_error, std::abs(numeric - complete_graph_return_probability(big_n, t)));
  }

  const double aligned = double(cfg.aligned_periods) * 2 * std::numbers::pi / double(big_n);
  const auto avg = time_averaged_probability(exact, 0, cfg.samples, aligned);
  rep.aligned_average_error = std::abs(avg.p_bar[0] - complete_graph_average_return(big_n));

  double ipr_sum = 0;
  for (std::size_t k = 1; k <= cfg.samples; ++k)
    ipr_sum += ipr(exact.evolve(psi0, double(k) * cfg.horizon / double(cfg.samples)).probabilities());
  rep.ipr_numeric = ipr_sum / double(cfg.samples);
  rep.ipr_closed = complete_graph_ipr_average(big_n);
  rep.ipr_bound = complete_graph_ipr_horizon_bound(big_n, cfg.samples, cfg.horizon);

  // The IPR comparison allows 1e-12 of floating-point slack on top of the analytic bound.
  rep.ok = rep.max_return_error < cfg.instant_tol && rep.aligned_average_error < cfg.average_tol &&
           std::abs(rep.ipr_numeric - rep.ipr_closed) <= rep.ipr_bound + 1e-12;
  return rep;
}

std::vector<IprSample> ipr_series(const Graph& g, double gamma, Vertex start, std::size_t samples, double horizon) {
  if (samples == 0 || !(horizon > 0)) throw std::invalid_argument("ipr_series: need samples >= 1 and horizon > 0");
  const ExactPropagator exact(laplacian(g), gamma);
  const auto psi0 = Statevector::basis(g.qubits(), start);
  std::vector<IprSample> out;
  for (std::size_t k = 1; k <= samples; ++k) {
    const double t = double(k) * horizon / double(samples);
    out.push_back({t, ipr(exact.evolve(psi0, t).probabilities())});
  }
  return out;
}

double SynthesisReport::max_deviation() const {
  double m = 0;
  for (const auto& d : deviations) m = std::max(m, d.frobenius);
  return m;
}

SynthesisReport synthesis_report(const Graph& g, double gamma, double dt, const SynthesisOptions& opts,
                                 int dense_limit) {
  const auto part = partition_laplacian(laplacian(g));
  SynthesisReport rep;
  rep.step = synthesize_trotter_step(part, gamma, dt, opts);
  if (g.qubits() > dense_limit) return rep;

  rep.dense_checked = true;
  const int n = g.qubits();
  for (std::size_t j = 1; j < part.components.size(); ++j) {
    const auto comp = j == 1 ? fold_diagonal(part.components[0], part.components[1]) : part.components[j];
    const auto circuit = circuit_unitary(synthesize_component(n, comp, gamma, dt, opts));
    const auto oracle = ExactPropagator(dense(comp, n), gamma).unitary(dt);
    rep.deviations.push_back({comp.j, (circuit - oracle).norm()});
  }
  return rep;
}

void write_comment(std::ostream& out, const std::string& text) {
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    fmt::print(out, "# {}\n", text.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
}

void write_fidelity_csv(std::ostream& out, const std::vector<FidelityRow>& rows) {
  out << "n,p,seed,dt,t_eff,fidelity\n";
  for (const auto& r : rows) fmt::print(out, "{},{},{},{},{},{}\n", r.n, r.p, r.seed, r.dt, r.t_eff, r.fidelity);
}

void write_cutoff_csv(std::ostream& out, const std::vector<CutoffRow>& rows) {
  out << "n,p,dt,seed,tau_c\n";
  for (const auto& r : rows)
    fmt::print(out, "{},{},{},{},{}\n", r.n, r.p, r.dt, r.seed ? std::to_string(*r.seed) : "mean",
               r.tau_c ? fmt::format("{}", *r.tau_c) : "");
}

void write_fits_csv(std::ostream& out, const std::vector<FitRow>& fits) {
  out << "dt,p,slope,intercept,residual\n";
  for (const auto& f : fits) {
    if (f.fit)
      fmt::print(out, "{},{},{},{},{}\n", f.dt, f.p, f.fit->slope, f.fit->intercept, f.fit->residual);
    else
      fmt::print(out, "# dt={} p={}: fewer than three crossings, no fit\n", f.dt, f.p);
  }
}

void write_localization_csv(std::ostream& out, const std::vector<LocalizationRun>& runs, bool circuit) {
  out << "n,p,seed,vertex,p_bar\n";
  for (const auto& r : runs) {
    const auto& prof = circuit ? r.circuit : r.exact;
    for (std::size_t v = 0; v < prof.dim(); ++v) fmt::print(out, "{},{},{},{},{}\n", r.n, r.p, r.seed, v, prof.p_bar[v]);
  }
}

void write_contour_csv(std::ostream& out, const std::vector<LocalizationRun>& runs) {
  out << "n,p,seed,t_eff,vertex,prob\n";
  for (const auto& r : runs)
    for (const auto& c : r.contour) fmt::print(out, "{},{},{},{},{},{}\n", r.n, r.p, r.seed, c.t_eff, c.vertex, c.prob);
}

}  // namespace ctqw
