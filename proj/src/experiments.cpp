#include "ssrc/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <functional>
#include <thread>

#include "ssrc/cvlimit.hpp"
#include "ssrc/encodings.hpp"
#include "ssrc/error.hpp"
#include "ssrc/log.hpp"
#include "ssrc/synthesis.hpp"

namespace ssrc {

namespace {

using Row = std::vector<Cell>;

// Bounded pool; results come back in index order whatever the completion order.
template <typename R>
std::vector<R> parallel_map(int workers, std::size_t n, const std::function<R(std::size_t)>& fn) {
  std::vector<std::optional<R>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t extra = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < extra; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }
std::int64_t as_int(int v) { return static_cast<std::int64_t>(v); }

std::string hex_seed(std::uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(seed));
  return buf;
}

std::vector<double> as_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

const std::vector<std::string> kConvergenceTail{"N", "metric", "exact", "limit", "residual", "rate", "r_squared"};

std::vector<std::string> with_tail(std::vector<std::string> head, const std::vector<std::string>& extra = {}) {
  head.insert(head.end(), kConvergenceTail.begin(), kConvergenceTail.end());
  head.insert(head.end(), extra.begin(), extra.end());
  return head;
}

struct Point {
  double exact = 0.0;
  double limit = 0.0;
  double residual = 0.0;
  std::vector<Cell> extra;
};

// Rows for one parameter combination swept over N, with the power-law fit appended.
void append_sweep(Table& table, const Row& params, const std::vector<int>& N_list, const std::string& metric,
                  const std::vector<Point>& points) {
  std::vector<double> residuals;
  for (const Point& p : points) residuals.push_back(p.residual);
  const PowerLawFit fit = fit_power_law(as_doubles(N_list), residuals);
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    Row row = params;
    row.insert(row.end(), {as_int(N_list[i]), metric, points[i].exact, points[i].limit, points[i].residual, fit.rate,
                           fit.r_squared});
    row.insert(row.end(), points[i].extra.begin(), points[i].extra.end());
    table.rows.push_back(std::move(row));
  }
}

template <typename P>
void convergence(Table& table, const ExperimentConfig& cfg, const std::vector<P>& combos, const std::string& metric,
                 const std::function<Row(const P&)>& params, const std::function<Point(const P&, int)>& eval) {
  const std::vector<int>& Ns = cfg.grid.N;
  const std::size_t per = Ns.size();
  const std::vector<Point> points = parallel_map<Point>(cfg.workers, combos.size() * per, [&](std::size_t i) {
    return eval(combos[i / per], Ns[i % per]);
  });
  for (std::size_t c = 0; c < combos.size(); ++c) {
    const std::vector<Point> slice(points.begin() + static_cast<std::ptrdiff_t>(c * per),
                                   points.begin() + static_cast<std::ptrdiff_t>((c + 1) * per));
    append_sweep(table, params(combos[c]), Ns, metric, slice);
  }
}

struct AlphaNmax {
  cplx alpha;
  int n_max;
};
struct AlphaKNmax {
  cplx alpha;
  int k;
  int n_max;
};
struct Squeeze {
  double r;
  double phi;
  int n_max;
};
struct AlphaBeta {
  cplx alpha;
  cplx beta;
};

Table coherent(const ExperimentConfig& cfg) {
  Table t{experiment_columns("convergence-coherent"), {}};
  std::vector<AlphaNmax> combos;
  for (cplx a : cfg.grid.alpha)
    for (int m : cfg.grid.n_max) combos.push_back({a, m});
  convergence<AlphaNmax>(
      t, cfg, combos, "infidelity",
      [](const AlphaNmax& c) { return Row{c.alpha.real(), c.alpha.imag(), as_int(c.n_max)}; },
      [](const AlphaNmax& c, int N) {
        const WindowFidelity w = coherent_fidelity(c.alpha, N, c.n_max);
        return Point{w.fidelity, 1.0, w.infidelity, {}};
      });
  return t;
}

Table displacement(const ExperimentConfig& cfg) {
  Table t{experiment_columns("convergence-displacement"), {}};
  std::vector<AlphaKNmax> combos;
  for (cplx a : cfg.grid.alpha)
    for (int k : cfg.grid.k)
      for (int m : cfg.grid.n_max) combos.push_back({a, k, m});
  convergence<AlphaKNmax>(
      t, cfg, combos, "l2-distance",
      [](const AlphaKNmax& c) { return Row{c.alpha.real(), c.alpha.imag(), as_int(c.k), as_int(c.n_max)}; },
      [](const AlphaKNmax& c, int N) {
        const double r = displacement_residual(c.alpha, c.k, N, c.n_max);
        return Point{r, 0.0, r, {}};
      });
  return t;
}

Table squeezed(const ExperimentConfig& cfg) {
  Table t{experiment_columns("convergence-squeezed"), {}};
  std::vector<Squeeze> combos;
  for (double r : cfg.grid.r)
    for (double phi : cfg.grid.phi)
      for (int m : cfg.grid.n_max) combos.push_back({r, phi, m});
  convergence<Squeeze>(
      t, cfg, combos, "infidelity", [](const Squeeze& c) { return Row{c.r, c.phi, as_int(c.n_max)}; },
      [](const Squeeze& c, int N) {
        const WindowFidelity w = squeezed_fidelity(c.r, c.phi, N, c.n_max);
        return Point{w.fidelity, 1.0, w.infidelity, {}};
      });
  return t;
}

Table commutator(const ExperimentConfig& cfg) {
  Table t{experiment_columns("commutator"), {}};
  convergence<int>(
      t, cfg, cfg.grid.n_max, "commutator-residual", [](const int& m) { return Row{as_int(m)}; },
      [](const int& m, int N) {
        const double r = commutator_residual(N, m);
        return Point{r, 2.0 * m / N, r, {}};
      });
  return t;
}

Table phase_locking(const ExperimentConfig& cfg) {
  Table t{experiment_columns("phase-locking"), {}};
  const std::vector<double> Ns = as_doubles(cfg.grid.N);
  for (double theta : cfg.grid.theta) {
    const ConvergenceReport rep = phase_locking_curve(theta, Ns);
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      t.rows.push_back(Row{theta, as_int(cfg.grid.N[i]), std::string("overlap-modulus"), rep.exact[i], rep.limit[i],
                           rep.residual[i], rep.fit.rate, rep.fit.r_squared, rep.ratio[i]});
    }
  }
  return t;
}

Table overlap(const ExperimentConfig& cfg) {
  Table t{experiment_columns("overlap"), {}};
  std::vector<AlphaBeta> combos;
  for (cplx a : cfg.grid.alpha)
    for (cplx b : cfg.grid.beta) combos.push_back({a, b});
  convergence<AlphaBeta>(
      t, cfg, combos, "overlap-modulus",
      [](const AlphaBeta& c) { return Row{c.alpha.real(), c.alpha.imag(), c.beta.real(), c.beta.imag()}; },
      [](const AlphaBeta& c, int N) {
        const OverlapRecord o = overlap_asymptotics(c.alpha, c.beta, N);
        return Point{std::abs(o.exact), o.limit, o.residual, {o.route_gap}};
      });
  return t;
}

Table synthesis_bench(const ExperimentConfig& cfg) {
  struct Task {
    int modes;
    int N;
    double small_angle;
    int sample;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  const int samples = cfg.grid.samples.front();
  std::uint64_t target_index = 0;
  for (int K : cfg.grid.modes)
    for (int N : cfg.grid.N) {
      for (int s = 0; s < samples; ++s) {
        // The same targets are reused across the small_angle sweep.
        const std::uint64_t seed = derive_seed(cfg.seed, target_index++);
        for (double sa : cfg.grid.small_angle) tasks.push_back({K, N, sa, s, seed});
      }
    }
  const std::vector<Row> rows = parallel_map<Row>(cfg.workers, tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    const BasisPtr basis = make_basis(task.modes, task.N, cfg.dimension_cap);
    SplitMix64 rng(task.seed);
    SynthesisOptions options;
    options.small_angle = task.small_angle;
    options.seed = rng.next();
    SynthesisPlan plan = [&] {
      if (task.modes == 2) {
        options.allow_prerotation = true;
        return plan_two_mode(random_state(basis, rng), options);
      }
      return plan_multimode(random_target(basis, options.max_order, rng), options);
    }();
    const ExecutionResult run = execute_plan(plan, synthesis_initial_state(basis));
    return Row{as_int(task.modes), as_int(task.N), task.small_angle, as_int(task.sample), as_int(plan.steps.size()),
               static_cast<std::int64_t>(plan.total_repetitions()), run.fidelity};
  });
  return Table{experiment_columns("synthesis-bench"), rows};
}

Table synthesis_complexity(const ExperimentConfig& cfg) {
  Table t{experiment_columns("synthesis-complexity"), {}};
  std::uint64_t index = 0;
  for (double ft : cfg.grid.fidelity_target)
    for (double sa : cfg.grid.small_angle) {
      ComplexityOptions options;
      options.samples = cfg.grid.samples.front();
      options.small_angle = sa;
      options.seed = derive_seed(cfg.seed, index++);
      const ComplexityReport rep = synthesis_complexity_probe(cfg.grid.N, ft, options);
      for (const ComplexityRow& r : rep.rows) {
        t.rows.push_back(Row{ft, sa, as_int(r.N), as_int(r.samples), r.mean_steps, r.mean_repetitions, r.mean_fidelity,
                             r.min_fidelity, r.met_fraction, rep.slope_steps, rep.slope_repetitions});
      }
    }
  return t;
}

ExperimentOutput encoding_feasibility(const ExperimentConfig& cfg) {
  const ParameterGrid& g = cfg.grid;
  struct Task {
    cplx alpha;
    int N;
    std::string gate;
    int restarts;
    std::uint64_t seed;
  };
  std::vector<cplx> alphas = g.encoding == "coherent-like" ? g.alpha : std::vector<cplx>{cplx(0.0)};
  std::vector<Task> tasks;
  for (cplx a : alphas)
    for (int N : g.N)
      for (const std::string& gate : g.gates)
        for (int r : g.restarts) tasks.push_back({a, N, gate, r, derive_seed(cfg.seed, tasks.size())});

  struct Outcome {
    Row row;
    FeasibilityRecord record;
  };
  const std::vector<Outcome> outcomes = parallel_map<Outcome>(cfg.workers, tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    const Encoding enc = g.encoding == "coherent-like" ? coherent_like_encoding(task.alpha, task.N) : fock_encoding(task.N);
    const Eigen::MatrixXcd target = gates::by_name(task.gate);
    SearchOptions options;
    options.restarts = task.restarts;
    options.seed = task.seed;
    const GateSearchResult search = sg_gate_search(target, enc, options);
    double grid_floor = std::nan("");
    double certified = std::nan("");
    std::int64_t points = 0;
    if (g.grid_step > 0.0) {
      const GridFloor floor = sg_grid_floor(target, enc, g.grid_step);
      grid_floor = floor.polished_min;
      certified = std::max(0.0, floor.lipschitz_bound);
      points = static_cast<std::int64_t>(floor.points);
    }
    Outcome o;
    o.row = Row{enc.label,        task.alpha.real(), task.alpha.imag(), as_int(task.N), task.gate,
                as_int(task.restarts), hex_seed(task.seed), search.best_error, search.leakage,
                grid_floor,       certified,         points};
    o.record = FeasibilityRecord{enc.label, task.N, task.gate, search.best_error, certified, task.restarts, task.seed};
    return o;
  });
  ExperimentOutput out{Table{experiment_columns("encoding-feasibility"), {}}, Json{}};
  Json records = Json::array();
  for (const Outcome& o : outcomes) {
    out.table.rows.push_back(o.row);
    Json j = feasibility_to_json(o.record);
    if (!std::isfinite(o.record.certified_floor)) j["certified_floor"] = nullptr;
    records.push_back(std::move(j));
  }
  out.report = Json{{"experiment", cfg.experiment}, {"records", records}};
  return out;
}

ExperimentOutput cnot_feasibility(const ExperimentConfig& cfg) {
  struct Task {
    int N;
    int restarts;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int N : cfg.grid.N)
    for (int r : cfg.grid.restarts) tasks.push_back({N, r, derive_seed(cfg.seed, tasks.size())});
  struct Outcome {
    Row row;
    FeasibilityRecord record;
  };
  const std::vector<Outcome> outcomes = parallel_map<Outcome>(cfg.workers, tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    const Encoding enc = two_qubit_fock_encoding(task.N, cfg.dimension_cap);
    SearchOptions options;
    options.restarts = task.restarts;
    options.seed = task.seed;
    const CnotSearchResult r = cnot_search(enc, gates::cnot(), options);
    Outcome o;
    o.row = Row{enc.label,
                as_int(task.N),
                as_int(enc.basis->dimension()),
                as_int(task.restarts),
                hex_seed(task.seed),
                r.mesh.best_error,
                r.exponential.best_error,
                r.floor,
                r.mesh.leakage};
    o.record = FeasibilityRecord{enc.label, task.N, "cnot", r.floor, r.floor, task.restarts, task.seed};
    return o;
  });
  ExperimentOutput out{Table{experiment_columns("cnot-feasibility"), {}}, Json{}};
  Json records = Json::array();
  for (const Outcome& o : outcomes) {
    out.table.rows.push_back(o.row);
    records.push_back(feasibility_to_json(o.record));
  }
  out.report = Json{{"experiment", cfg.experiment}, {"records", records}};
  return out;
}

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double d = std::get<double>(c);
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", d);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string table_to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const Row& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

Json table_to_json(const Table& table) {
  Json rows = Json::array();
  for (const Row& row : table.rows) {
    Json r = Json::array();
    for (const Cell& c : row) {
      if (const auto* i = std::get_if<std::int64_t>(&c)) {
        r.push_back(*i);
      } else if (const auto* s = std::get_if<std::string>(&c)) {
        r.push_back(*s);
      } else {
        const double d = std::get<double>(c);
        if (std::isfinite(d)) {
          r.push_back(d);
        } else {
          r.push_back(nullptr);
        }
      }
    }
    rows.push_back(std::move(r));
  }
  return Json{{"columns", table.columns}, {"rows", rows}};
}

std::vector<std::string> experiment_columns(const std::string& e) {
  if (e == "convergence-coherent") return with_tail({"alpha_re", "alpha_im", "n_max"});
  if (e == "convergence-displacement") return with_tail({"alpha_re", "alpha_im", "k", "n_max"});
  if (e == "convergence-squeezed") return with_tail({"r", "phi", "n_max"});
  if (e == "commutator") return with_tail({"n_max"});
  if (e == "phase-locking") return with_tail({"theta"}, {"ratio"});
  if (e == "overlap") return with_tail({"alpha_re", "alpha_im", "beta_re", "beta_im"}, {"route_gap"});
  if (e == "synthesis-bench") return {"modes", "N", "small_angle", "sample", "steps", "repetitions", "fidelity"};
  if (e == "synthesis-complexity") {
    return {"fidelity_target", "small_angle",   "N",         "samples",     "mean_steps",       "mean_repetitions",
            "mean_fidelity",   "min_fidelity",  "met_fraction", "slope_steps", "slope_repetitions"};
  }
  if (e == "encoding-feasibility") {
    return {"encoding", "alpha_re", "alpha_im",   "N",               "gate",           "restarts",
            "seed",     "best_error", "leakage", "grid_floor", "certified_floor", "grid_points"};
  }
  if (e == "cnot-feasibility") {
    return {"encoding", "N", "dimension", "restarts", "seed", "mesh_error", "exponential_error", "floor", "leakage"};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown experiment '" + e + "'");
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  const std::vector<std::string> violations = validate_config(cfg);
  if (!violations.empty()) throw Error(ErrorCode::ConfigParse, violations.front());
  const std::string& e = cfg.experiment;
  log::info("running " + e);
  if (e == "convergence-coherent") return {coherent(cfg), std::nullopt};
  if (e == "convergence-displacement") return {displacement(cfg), std::nullopt};
  if (e == "convergence-squeezed") return {squeezed(cfg), std::nullopt};
  if (e == "commutator") return {commutator(cfg), std::nullopt};
  if (e == "phase-locking") return {phase_locking(cfg), std::nullopt};
  if (e == "overlap") return {overlap(cfg), std::nullopt};
  if (e == "synthesis-bench") return {synthesis_bench(cfg), std::nullopt};
  if (e == "synthesis-complexity") return {synthesis_complexity(cfg), std::nullopt};
  if (e == "encoding-feasibility") return encoding_feasibility(cfg);
  return cnot_feasibility(cfg);
}

RunArtifacts run_and_write(const ExperimentConfig& cfg) {
  const std::string started = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentOutput out = run_experiment(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_directory, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + cfg.output_directory + "': " + ec.message());
  const fs::path dir(cfg.output_directory);
  RunArtifacts art;
  art.wall_seconds = wall;
  art.data_path = (dir / (cfg.experiment + "." + cfg.format)).string();
  if (cfg.format == "csv") {
    write_text_file(art.data_path, table_to_csv(out.table));
  } else {
    Json data = table_to_json(out.table);
    data["experiment"] = cfg.experiment;
    write_text_file(art.data_path, data.dump(2) + "\n");
  }
  if (out.report) {
    art.report_path = (dir / (cfg.experiment + ".report.json")).string();
    write_text_file(art.report_path, out.report->dump(2) + "\n");
  }
  art.meta_path = (dir / (cfg.experiment + ".meta.json")).string();
  const Json meta{{"experiment", cfg.experiment},
                  {"library_version", SSRC_VERSION_STRING},
                  {"seed", cfg.seed},
                  {"data_file", fs::path(art.data_path).filename().string()},
                  {"columns", out.table.columns},
                  {"rows", out.table.rows.size()},
                  {"config", config_to_yaml(cfg)},
                  {"started_utc", started},
                  {"wall_time_seconds", wall}};
  write_text_file(art.meta_path, meta.dump(2) + "\n");
  return art;
}

}  // namespace ssrc
