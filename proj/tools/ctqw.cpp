// Command-line driver: graph -> partition -> circuit -> evolution -> CSV.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ctqw/analysis.hpp"
#include "ctqw/circuit.hpp"
#include "ctqw/experiments.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/partition.hpp"
#include "ctqw/synthesis.hpp"

namespace fs = std::filesystem;
using namespace ctqw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void check_p(const std::vector<double>& ps) {
  require(!ps.empty(), "need at least one edge probability");
  for (double p : ps) require(p >= 0 && p <= 1, fmt::format("edge probability {} outside [0, 1]", p));
}

void check_dt(const std::vector<double>& dts) {
  require(!dts.empty(), "need at least one time step");
  for (double dt : dts) require(dt > 0, fmt::format("time step {} must be positive", dt));
}

void check_qubits(int n, int max = 12) {
  require(n >= 1 && n <= max, fmt::format("qubit count {} outside [1, {}]", n, max));
}

struct GraphSource {
  std::string file;
  int n = 3;
  double p = 0.5;
  std::uint64_t seed = 1;
  bool complete = false;

  void add_to(CLI::App* app) {
    app->add_option("--graph", file, "Edge-list file (overrides the generator flags)");
    app->add_option("-n,--qubits", n, "Qubit count; the graph has 2^n vertices");
    app->add_option("-p,--p", p, "Erdos-Renyi edge probability");
    app->add_option("--seed", seed, "Generator seed");
    app->add_flag("--complete", complete, "Use the complete graph on 2^n vertices");
  }

  Graph load() const {
    if (!file.empty()) {
      std::ifstream in(file);
      require(bool(in), "cannot open graph file " + file);
      try {
        return read_edge_list(in);
      } catch (const std::exception& e) {
        throw ValidationError(fmt::format("{}: {}", file, e.what()));
      }
    }
    check_qubits(n, 16);
    if (complete) return complete_graph(n);
    check_p({p});
    return generate_erdos_renyi(n, p, seed);
  }

  std::string describe() const {
    if (!file.empty()) return "graph=" + file;
    if (complete) return fmt::format("graph=complete n={}", n);
    return fmt::format("graph=erdos-renyi n={} p={} seed={}", n, p, seed);
  }
};

std::string default_output_dir() {
  const char* env = std::getenv("CTQW_OUTPUT_DIR");
  return env && *env ? env : ".";
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

Backend parse_backend(const std::string& s) {
  if (s == "matrix-power") return Backend::MatrixPower;
  if (s == "gates") return Backend::Gates;
  throw ValidationError("backend must be matrix-power or gates, got '" + s + "'");
}

MultiplexorLayout parse_layout(const std::string& s) {
  if (s == "recursive") return MultiplexorLayout::Recursive;
  if (s == "gray") return MultiplexorLayout::GrayCode;
  throw ValidationError("layout must be recursive or gray, got '" + s + "'");
}

StartPolicy parse_start(const std::string& s) {
  try {
    return StartPolicy::parse(s);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

std::vector<std::uint64_t> seed_list(const std::vector<std::uint64_t>& seeds, std::size_t count) {
  if (!seeds.empty()) return seeds;
  require(count >= 1, "need at least one seed");
  std::vector<std::uint64_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = i + 1;
  return out;
}

struct GridOptions {
  double t_min = 1e-2;
  double t_max = 1e5;
  int per_decade = 50;

  void add_to(CLI::App* app) {
    app->add_option("--t-min", t_min, "First grid time")->capture_default_str();
    app->add_option("--t-max", t_max, "Last grid time")->capture_default_str();
    app->add_option("--points-per-decade", per_decade, "Logarithmic grid density")->capture_default_str();
  }
  TimeGrid grid() const {
    require(t_min > 0 && t_max >= t_min, "time grid needs 0 < t-min <= t-max");
    require(per_decade >= 1, "points-per-decade must be positive");
    return {t_min, t_max, per_decade};
  }
};

// ---------------------------------------------------------------- partition

struct PartitionCmd {
  GraphSource src;
  std::string out = "partition.json";

  int run(const fs::path& dir) const {
    const auto g = src.load();
    const auto l = laplacian(g);
    const auto part = partition_laplacian(l);
    const auto check = verify_partition(part, l);

    nlohmann::json j;
    to_json(j, part);
    auto f = open_output(dir / out);
    f << j.dump() << '\n';

    fmt::print("{}\n", src.describe());
    fmt::print("components: {}  operation count: {}\n", part.components.size(), part.operation_count);
    fmt::print("exact reconstruction: {}\n", check.exact_reconstruction ? "ok" : "FAILED");
    fmt::print("disjoint supports:    {}\n", check.disjoint_supports ? "ok" : "FAILED");
    fmt::print("row xor col law:      {}\n", check.structure_law ? "ok" : "FAILED");
    fmt::print("block diagonal:       {}\n", check.block_diagonal ? "ok" : "FAILED");
    fmt::print("wrote {}\n", (dir / out).string());
    return check.ok() ? kExitOk : kExitVerification;
  }
};

// --------------------------------------------------------------- synthesize

struct SynthesizeCmd {
  GraphSource src;
  double gamma = 1.0;
  double dt = 1e-3;
  std::string layout = "recursive";
  bool decompose = false;
  int dense_limit = 5;
  std::string out = "circuit.json";
  std::string text;

  int run(const fs::path& dir) const {
    check_dt({dt});
    const auto g = src.load();
    const SynthesisOptions opts{parse_layout(layout), decompose};
    const auto rep = synthesis_report(g, gamma, dt, opts, dense_limit);

    nlohmann::json j;
    to_json(j, rep.step);
    open_output(dir / out) << j.dump() << '\n';
    if (!text.empty()) open_output(dir / text) << disassemble(rep.step);

    fmt::print("{} gamma={} dt={} layout={}\n", src.describe(), gamma, dt, layout);
    fmt::print("gates per step: {} ({} CNOT, {} rotations)\n", rep.step.size(), rep.step.cnot_count(),
               rep.step.rotation_count());
    if (!rep.dense_checked) {
      fmt::print("dense check skipped: n = {} exceeds the limit of {}\n", g.qubits(), dense_limit);
      return kExitOk;
    }
    for (const auto& d : rep.deviations) fmt::print("component {:>4}: |U_circuit - exp| = {:.3e}\n", d.j, d.frobenius);
    const double worst = rep.max_deviation();
    fmt::print("max deviation {:.3e} (tolerance 1e-8)\n", worst);
    return worst > 1e-8 ? kExitVerification : kExitOk;
  }
};

// ----------------------------------------------------------- fidelity-sweep

struct FidelitySweepCmd {
  int n = 6;
  std::vector<double> p{0.1, 0.4, 0.7, 1.0};
  std::vector<double> dt{1e-2, 1e-3};
  std::vector<std::uint64_t> seeds;
  std::size_t seed_count = 10;
  double gamma = 1.0;
  GridOptions grid;
  std::string start = "0";
  std::string backend = "matrix-power";
  std::string out = "fidelity.csv";

  int run(const fs::path& dir, int jobs) const {
    check_qubits(n, 10);
    check_p(p);
    check_dt(dt);
    SweepConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.dt = dt;
    cfg.seeds = seed_list(seeds, seed_count);
    cfg.gamma = gamma;
    cfg.grid = grid.grid();
    cfg.start = parse_start(start);
    cfg.backend = parse_backend(backend);
    cfg.jobs = jobs;

    const auto rows = fidelity_sweep(cfg);
    auto f = open_output(dir / out);
    write_comment(f, fmt::format("ctqw fidelity-sweep n={} p={} dt={} seeds={} gamma={}", n, fmt::join(p, ","),
                                 fmt::join(dt, ","), fmt::join(cfg.seeds, ","), gamma));
    write_comment(f, fmt::format("grid t_min={} t_max={} points_per_decade={} start={} backend={}", cfg.grid.t_min,
                                 cfg.grid.t_max, cfg.grid.per_decade, cfg.start.describe(), backend));
    write_fidelity_csv(f, rows);
    fmt::print("wrote {} rows to {}\n", rows.size(), (dir / out).string());
    return kExitOk;
  }
};

// ----------------------------------------------------------- cutoff-scaling

struct CutoffCmd {
  std::vector<int> n{3, 4, 5, 6, 7};
  std::vector<double> p{0.1, 0.4, 0.7, 1.0};
  std::vector<double> dt{1e-2, 1e-3};
  std::vector<std::uint64_t> seeds;
  std::size_t seed_count = 10;
  double gamma = 1.0;
  GridOptions grid{1e-2, 1e8, 50};
  double threshold = 0.95;
  std::string start = "0";
  std::string out = "fits.csv";
  std::string cutoff_out = "cutoff.csv";

  int run(const fs::path& dir, int jobs) const {
    require(n.size() >= 3, "cutoff scaling needs at least three qubit counts");
    for (int q : n) check_qubits(q, 9);
    check_p(p);
    check_dt(dt);
    require(threshold > 0 && threshold < 1, "threshold must lie in (0, 1)");
    CutoffConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.dt = dt;
    cfg.seeds = seed_list(seeds, seed_count);
    cfg.gamma = gamma;
    cfg.grid = grid.grid();
    cfg.threshold = threshold;
    cfg.start = parse_start(start);
    cfg.jobs = jobs;

    const auto res = cutoff_scaling(cfg);
    const auto header = fmt::format("ctqw cutoff-scaling n={} p={} dt={} seeds={} gamma={} threshold={}\n"
                                    "grid t_min={} t_max={} points_per_decade={} start={}",
                                    fmt::join(n, ","), fmt::join(p, ","), fmt::join(dt, ","),
                                    fmt::join(cfg.seeds, ","), gamma, threshold, cfg.grid.t_min, cfg.grid.t_max,
                                    cfg.grid.per_decade, cfg.start.describe());
    {
      auto f = open_output(dir / cutoff_out);
      write_comment(f, header + "\nseed=mean rows come from the seed-averaged curve; empty tau_c = beyond horizon");
      write_cutoff_csv(f, res.rows);
    }
    {
      auto f = open_output(dir / out);
      write_comment(f, header + "\nfit: ln(tau_c) = slope * n + intercept against the seed-averaged tau_c");
      write_fits_csv(f, res.fits);
    }
    for (const auto& fr : res.fits) {
      if (fr.fit)
        fmt::print("dt={:<6} p={:<4} slope={:+.4f} intercept={:+.4f} residual={:.4f}\n", fr.dt, fr.p, fr.fit->slope,
                   fr.fit->intercept, fr.fit->residual);
      else
        fmt::print("dt={:<6} p={:<4} no fit (fewer than three crossings)\n", fr.dt, fr.p);
    }
    for (const auto& [d, m] : res.mean_slope) fmt::print("dt={}: mean slope {:+.4f}\n", d, m);
    fmt::print("wrote {} and {}\n", (dir / cutoff_out).string(), (dir / out).string());
    return kExitOk;
  }
};

// ------------------------------------------------------------- localization

struct LocalizationCmd {
  int n = 5;
  std::vector<double> p{0.1, 0.4};
  std::vector<std::uint64_t> seeds{1};
  double gamma = 1.0;
  double dt = 1e-3;
  std::size_t samples = 1000;
  double horizon = 100.0;
  std::string start = "min-degree";
  std::size_t contour_samples = 200;

  int run(const fs::path& dir, int jobs) const {
    check_qubits(n, 10);
    check_p(p);
    check_dt({dt});
    require(samples >= 1 && horizon > 0, "need samples >= 1 and horizon > 0");
    require(!seeds.empty(), "need at least one seed");
    LocalizationConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.seeds = seeds;
    cfg.gamma = gamma;
    cfg.dt = dt;
    cfg.samples = samples;
    cfg.horizon = horizon;
    cfg.start = parse_start(start);
    cfg.contour_samples = contour_samples;
    cfg.jobs = jobs;

    const auto runs = localization_study(cfg);
    const auto header = fmt::format("ctqw localization n={} p={} seeds={} gamma={} dt={} samples={} horizon={} start={}",
                                    n, fmt::join(p, ","), fmt::join(seeds, ","), gamma, dt, samples, horizon,
                                    cfg.start.describe());
    {
      auto f = open_output(dir / "localization.csv");
      write_comment(f, header + "\nprofile: circuit (Trotterized) evolution");
      write_localization_csv(f, runs, true);
    }
    {
      auto f = open_output(dir / "localization_exact.csv");
      write_comment(f, header + "\nprofile: exact evolution");
      write_localization_csv(f, runs, false);
    }
    {
      auto f = open_output(dir / "contour.csv");
      write_comment(f, header + fmt::format("\ncircuit evolution sampled at {} + 1 times", contour_samples));
      write_contour_csv(f, runs);
    }
    const double uniform = 1.0 / double(std::size_t{1} << n);
    for (const auto& r : runs)
      fmt::print("p={} seed={} start={}: p_bar exact={:.6f} circuit={:.6f} (1/N={:.6f}) Linf={:.3e}\n", r.p, r.seed,
                 r.start, r.exact.p_bar[r.start], r.circuit.p_bar[r.start], uniform, r.linf);
    return kExitOk;
  }
};

// ---------------------------------------------------- complete-graph-check

struct CompleteGraphCmd {
  int n_min = 1;
  int n_max = 8;
  CompleteGraphCheckConfig cfg;

  int run() const {
    require(n_min >= 1 && n_max >= n_min && n_max <= 9, "need 1 <= n-min <= n-max <= 9");
    require(cfg.samples >= 1 && cfg.horizon > 0, "need samples >= 1 and horizon > 0");
    bool ok = true;
    fmt::print("{:>4} {:>6} {:>12} {:>12} {:>12} {:>12} {:>12}  status\n", "n", "N", "return err", "avg err",
               "IPR num", "IPR closed", "IPR bound");
    for (int n = n_min; n <= n_max; ++n) {
      const auto r = complete_graph_check(n, cfg);
      ok = ok && r.ok;
      fmt::print("{:>4} {:>6} {:>12.3e} {:>12.3e} {:>12.8f} {:>12.8f} {:>12.3e}  {}\n", r.n, r.vertices,
                 r.max_return_error, r.aligned_average_error, r.ipr_numeric, r.ipr_closed, r.ipr_bound,
                 r.ok ? "ok" : "FAILED");
    }
    return ok ? kExitOk : kExitVerification;
  }
};

// ---------------------------------------------------------------------- ipr

struct IprCmd {
  GraphSource src;
  double gamma = 1.0;
  std::string start = "min-degree";
  std::size_t samples = 1000;
  double horizon = 100.0;
  std::string out = "ipr.csv";

  int run(const fs::path& dir) const {
    require(samples >= 1 && horizon > 0, "need samples >= 1 and horizon > 0");
    const auto g = src.load();
    const auto policy = parse_start(start);
    const auto v = policy.resolve(g);
    const auto series = ipr_series(g, gamma, v, samples, horizon);

    auto f = open_output(dir / out);
    write_comment(f, fmt::format("ctqw ipr {} gamma={} start={} samples={} horizon={}", src.describe(), gamma,
                                 policy.describe(), samples, horizon));
    f << "n,p,seed,t_eff,ipr\n";
    const auto p = g.origin().p ? fmt::format("{}", *g.origin().p) : std::string("-");
    const auto seed = g.origin().seed ? std::to_string(*g.origin().seed) : std::string("-");
    double mean = 0;
    for (const auto& s : series) {
      fmt::print(f, "{},{},{},{},{}\n", g.qubits(), p, seed, s.t_eff, s.ipr);
      mean += s.ipr;
    }
    mean /= double(series.size());
    fmt::print("start vertex {}: time-averaged IPR {:.6f} (uniform baseline {:.6f})\n", v, mean,
               1.0 / double(g.vertex_count()));
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplacian partitioning, circuit synthesis and Trotterized quantum walks on random graphs"};
  app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags take precedence");
  app.require_subcommand(1);

  std::string output_dir = default_output_dir();
  int jobs = 1;
  app.add_option("-o,--output-dir", output_dir, "Directory for output files (default: $CTQW_OUTPUT_DIR or .)");
  app.add_option("-j,--jobs", jobs, "Worker threads over independent runs")->check(CLI::PositiveNumber);

  PartitionCmd part;
  auto* sp = app.add_subcommand("partition", "Partition a Laplacian and verify the result");
  part.src.add_to(sp);
  sp->add_option("--out", part.out, "Partition dump (JSON)")->capture_default_str();

  SynthesizeCmd syn;
  auto* ss = app.add_subcommand("synthesize", "Emit the circuit of one Trotter step");
  syn.src.add_to(ss);
  ss->add_option("--gamma", syn.gamma, "Hopping rate")->capture_default_str();
  ss->add_option("--dt", syn.dt, "Trotter step")->capture_default_str();
  ss->add_option("--layout", syn.layout, "Multiplexor CNOT layout: recursive or gray")->capture_default_str();
  ss->add_flag("--decompose-diagonal", syn.decompose, "Lower diagonal phase gates to rotations");
  ss->add_option("--dense-limit", syn.dense_limit, "Largest n checked against the dense exponential")
      ->capture_default_str();
  ss->add_option("--out", syn.out, "Circuit file (JSON)")->capture_default_str();
  ss->add_option("--text", syn.text, "Optional text disassembly file");

  FidelitySweepCmd fid;
  auto* sf = app.add_subcommand("fidelity-sweep", "Fidelity of the Trotterized walk against exact evolution");
  sf->add_option("-n,--qubits", fid.n, "Qubit count")->capture_default_str();
  sf->add_option("-p,--p", fid.p, "Edge probabilities")->delimiter(',')->capture_default_str();
  sf->add_option("--dt", fid.dt, "Trotter steps")->delimiter(',')->capture_default_str();
  sf->add_option("--seeds", fid.seeds, "Explicit seed list")->delimiter(',');
  sf->add_option("--seed-count", fid.seed_count, "Seeds 1..K when --seeds is absent")->capture_default_str();
  sf->add_option("--gamma", fid.gamma, "Hopping rate")->capture_default_str();
  fid.grid.add_to(sf);
  sf->add_option("--start", fid.start, "Start vertex: min-degree, max-degree or an index")->capture_default_str();
  sf->add_option("--backend", fid.backend, "matrix-power or gates")->capture_default_str();
  sf->add_option("--out", fid.out, "Output CSV")->capture_default_str();

  CutoffCmd cut;
  auto* sc = app.add_subcommand("cutoff-scaling", "Cutoff times against qubit count with exponential fits");
  sc->add_option("-n,--qubits", cut.n, "Qubit counts")->delimiter(',')->capture_default_str();
  sc->add_option("-p,--p", cut.p, "Edge probabilities")->delimiter(',')->capture_default_str();
  sc->add_option("--dt", cut.dt, "Trotter steps")->delimiter(',')->capture_default_str();
  sc->add_option("--seeds", cut.seeds, "Explicit seed list")->delimiter(',');
  sc->add_option("--seed-count", cut.seed_count, "Seeds 1..K when --seeds is absent")->capture_default_str();
  sc->add_option("--gamma", cut.gamma, "Hopping rate")->capture_default_str();
  cut.grid.add_to(sc);
  sc->add_option("--threshold", cut.threshold, "Fidelity threshold")->capture_default_str();
  sc->add_option("--start", cut.start, "Start vertex: min-degree, max-degree or an index")->capture_default_str();
  sc->add_option("--out", cut.out, "Fit CSV")->capture_default_str();
  sc->add_option("--cutoff-out", cut.cutoff_out, "Per-(n, p, dt, seed) cutoff CSV")->capture_default_str();

  LocalizationCmd loc;
  auto* sl = app.add_subcommand("localization", "Time-averaged profiles from exact and circuit evolution");
  sl->add_option("-n,--qubits", loc.n, "Qubit count")->capture_default_str();
  sl->add_option("-p,--p", loc.p, "Edge probabilities")->delimiter(',')->capture_default_str();
  sl->add_option("--seeds", loc.seeds, "Seeds")->delimiter(',')->capture_default_str();
  sl->add_option("--gamma", loc.gamma, "Hopping rate")->capture_default_str();
  sl->add_option("--dt", loc.dt, "Trotter step of the circuit path")->capture_default_str();
  sl->add_option("--samples", loc.samples, "Samples in the time average")->capture_default_str();
  sl->add_option("--horizon", loc.horizon, "Averaging horizon")->capture_default_str();
  sl->add_option("--start", loc.start, "Start vertex: min-degree, max-degree or an index")->capture_default_str();
  sl->add_option("--contour-samples", loc.contour_samples, "Time samples in contour.csv")->capture_default_str();

  CompleteGraphCmd cg;
  auto* sk = app.add_subcommand("complete-graph-check", "Compare K_N walks with their closed forms");
  sk->add_option("--n-min", cg.n_min, "Smallest qubit count")->capture_default_str();
  sk->add_option("--n-max", cg.n_max, "Largest qubit count")->capture_default_str();
  sk->add_option("--samples", cg.cfg.samples, "Samples in the time averages")->capture_default_str();
  sk->add_option("--horizon", cg.cfg.horizon, "IPR averaging horizon")->capture_default_str();
  sk->add_option("--random-times", cg.cfg.random_times, "Random instants for the return probability")
      ->capture_default_str();
  sk->add_option("--seed", cg.cfg.seed, "Seed for the random instants")->capture_default_str();

  IprCmd ip;
  auto* si = app.add_subcommand("ipr", "Inverse participation ratio of the exact walk over time");
  ip.src.add_to(si);
  si->add_option("--gamma", ip.gamma, "Hopping rate")->capture_default_str();
  si->add_option("--start", ip.start, "Start vertex: min-degree, max-degree or an index")->capture_default_str();
  si->add_option("--samples", ip.samples, "Time samples")->capture_default_str();
  si->add_option("--horizon", ip.horizon, "Last sample time")->capture_default_str();
  si->add_option("--out", ip.out, "Output CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const fs::path dir = output_dir;
  try {
    if (*sp) return part.run(dir);
    if (*ss) return syn.run(dir);
    if (*sf) return fid.run(dir, jobs);
    if (*sc) return cut.run(dir, jobs);
    if (*sl) return loc.run(dir, jobs);
    if (*sk) return cg.run();
    if (*si) return ip.run(dir);
  } catch (const ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return kExitValidation;
}
