#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ssrc/cvlimit.hpp"
#include "ssrc/encodings.hpp"
#include "ssrc/log.hpp"
#include "ssrc/majorana.hpp"
#include "ssrc/schwinger.hpp"
#include "ssrc/serialization.hpp"
#include "ssrc/synthesis.hpp"

using namespace ssrc;

namespace {

constexpr double kPi = std::numbers::pi;

Json fixture(const std::string& name) { return Json::parse(read_text_file(std::string(SSRC_FIXTURE_DIR) + "/" + name)); }

double rel(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

// Criterion 1.
void su2_algebra(Outcome& o) {
  double worst = 0.0;
  for (int N : {1, 2, 5, 20, 100}) {
    const BasisPtr b = make_basis(2, N);
    const SparseOperator jx = j_operator(b, Axis::X), jy = j_operator(b, Axis::Y), jz = j_operator(b, Axis::Z);
    const SparseOperator jp = j_operator(b, Axis::Plus), jm = j_operator(b, Axis::Minus);
    const cplx i(0.0, 1.0);
    const double j = N / 2.0;
    worst = std::max({worst, max_abs_difference(jx * jy - jy * jx, jz.scaled(i)),
                      max_abs_difference(jy * jz - jz * jy, jx.scaled(i)),
                      max_abs_difference(jz * jx - jx * jz, jy.scaled(i)),
                      max_abs_difference(jp * jm - jm * jp, jz.scaled(2.0)),
                      max_abs_difference(jx * jx + jy * jy + jz * jz, identity_operator(b).scaled(j * (j + 1)))});
  }
  o.detail << "max elementwise deviation " << worst;
  o.require(worst <= 1e-10, "deviation above 1e-10");
}

// Criterion 2.
void phase_locking(Outcome& o) {
  const ConvergenceReport rep = phase_locking_curve(0.2, {100});
  const double gap = std::abs(rep.exact[0] - rep.limit[0]);
  o.detail.precision(10);
  o.detail << "theta=0.2 N=100 exact " << rep.exact[0] << " limit " << rep.limit[0] << " gap " << gap;
  o.require(gap <= 5e-4, "gap above 5e-4");
  double previous = INFINITY;
  for (double theta : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    const double gap_ratio = std::abs(phase_locking_curve(theta, {4.0 / (theta * theta)}).ratio[0] - 1.0);
    o.require(gap_ratio < previous, "ratio not approaching 1");
    previous = gap_ratio;
  }
  o.detail << "; |ratio-1| at theta=0.025, N theta^2=4: " << previous;
}

// Criterion 3.
void coherent_limit(Outcome& o) {
  std::vector<double> Ns{100, 1000, 10000}, residuals;
  for (double N : Ns) {
    const WindowFidelity w = coherent_fidelity(1.0, static_cast<int>(N), 30);
    o.require(w.fidelity > 1.0 - 5.0 / N, "fidelity below 1-5/N at N=" + std::to_string(static_cast<int>(N)));
    residuals.push_back(w.infidelity);
  }
  const PowerLawFit fit = fit_power_law(Ns, residuals);
  o.detail << "rate " << fit.rate << " R^2 " << fit.r_squared << " infidelity(1e4) " << residuals.back();
  o.require(fit.rate >= 0.9, "rate below 0.9");
  o.require(fit.r_squared >= 0.98, "R^2 below 0.98");
}

// Criterion 4.
void displacement(Outcome& o) {
  double previous = INFINITY, worst = 0.0;
  for (const Json& row : fixture("displacement.json")) {
    const double r = displacement_residual(1.0, 2, row["N"].get<int>(), 40);
    worst = std::max(worst, rel(r, row["residual"].get<double>()));
    o.require(r < previous, "not decreasing");
    previous = r;
  }
  o.detail << "max relative deviation from fixture " << worst;
  o.require(worst <= 1e-8, "fixture mismatch");
}

// Criterion 5.
void squeezed(Outcome& o) {
  for (int N : {10, 100, 500}) {
    const SSRCState s = squeezed_from_rotation(0.5, 0.0, N);
    for (std::size_t n = 1; n < s.dimension(); n += 2)
      if (s.amplitude(n) != cplx(0.0)) {
        o.require(false, "odd amplitude nonzero");
        break;
      }
  }
  const Json fidelity_rows = fixture("squeezed.json")["fidelity"];
  for (const Json& row : fidelity_rows) {
    if (row["N"].get<int>() != 500) continue;
    const WindowFidelity w = squeezed_fidelity(0.5, 0.0, 500, 20);
    o.detail.precision(12);
    o.detail << "fidelity(N=500) " << w.fidelity << " rel dev " << rel(w.fidelity, row["fidelity"].get<double>());
    o.require(rel(w.fidelity, row["fidelity"].get<double>()) <= 1e-8, "fidelity fixture mismatch");
    o.require(w.fidelity > 0.999, "fidelity below 0.999");
  }
  double worst = 0.0;
  const Json normalization_rows = fixture("squeezed.json")["normalization"];
  for (const Json& row : normalization_rows) {
    const double r = row["r"].get<double>();
    const int N = row["N"].get<int>();
    if (N > 200) continue;
    const double log_a = row["log_A"].get<double>();
    worst = std::max({worst, std::abs(std::expm1(squeezed_log_normalization(r, N) - log_a)),
                      std::abs(std::expm1(squeezed_log_normalization_gram(r, N) - log_a))});
  }
  o.detail << "; max relative deviation of A " << worst;
  o.require(worst <= 1e-8, "normalization mismatch");
}

// Criterion 6.
void quadrature(Outcome& o) {
  double q_dev = 0.0, c_dev = 0.0, u_dev = 0.0;
  for (int N : {10, 100, 1000}) {
    const BasisPtr b = make_basis(2, N);
    q_dev = std::max(q_dev, max_abs_difference(quadrature_operator(b, 0.0), j_operator(b, Axis::X).scaled(std::sqrt(2.0 / N))));
    for (int m : {0, 1, 5, 10}) c_dev = std::max(c_dev, std::abs(commutator_residual(N, m) - 2.0 * m / N));
    const UncertaintyRecord u = uncertainty_check(basis_state(b, {0, N}));
    u_dev = std::max(u_dev, std::abs(u.product - u.half_abs_jz));
  }
  o.detail << "Q dev " << q_dev << " commutator dev " << c_dev << " uncertainty dev " << u_dev;
  o.require(q_dev <= 1e-12, "Q(N,0) mismatch");
  o.require(c_dev <= 1e-12, "commutator residual mismatch");
  o.require(u_dev <= 1e-10, "uncertainty not saturated");
}

// Criterion 7.
void synthesis(Outcome& o) {
  double min_fid = 1.0;
  bool monotone = true;
  for (int N : {2, 4, 8}) {
    const BasisPtr b = make_basis(2, N);
    SplitMix64 rng(derive_seed(kDefaultSeed, static_cast<std::uint64_t>(N)));
    for (int t = 0; t < 10; ++t) {
      const SSRCState target = random_state(b, rng);
      SynthesisOptions options;
      options.small_angle = 1e-3;
      options.correction_passes = 2;
      min_fid = std::min(min_fid, execute_plan(plan_two_mode(target, options), synthesis_initial_state(b)).fidelity);
      if (t < 3) {
        double previous = -1.0;
        for (double small : {1e-2, 5e-3, 2e-3, 1e-3}) {
          options.small_angle = small;
          const double f = execute_plan(plan_two_mode(target, options), synthesis_initial_state(b)).fidelity;
          if (f < previous - 1e-12) monotone = false;
          previous = f;
        }
      }
    }
  }
  o.detail << "min two-mode fidelity " << min_fid;
  o.require(min_fid >= 0.99, "two-mode fidelity below 0.99");
  o.require(monotone, "fidelity not monotone in small_angle");

  const BasisPtr b6 = make_basis(2, 6);
  SplitMix64 rng(1);
  const SSRCState s = random_state(b6, rng);
  const SynthesisPlan empty = plan_two_mode(synthesis_initial_state(b6));
  const ExecutionResult id = execute_plan(empty, s);
  const bool exact = empty.steps.empty() && (id.state.amplitudes().array() == s.amplitudes().array()).all();
  o.require(exact, "empty plan not identity");

  const BasisPtr b3 = make_basis(3, 3);
  SplitMix64 mrng(derive_seed(kDefaultSeed, 33));
  double min_multi = 1.0;
  for (int t = 0; t < 10; ++t) {
    SynthesisOptions options;
    options.small_angle = 1e-3;
    min_multi = std::min(min_multi,
                         execute_plan(plan_multimode(random_target(b3, 2, mrng), options), synthesis_initial_state(b3)).fidelity);
  }
  o.detail << "; min K=3 fidelity " << min_multi;
  o.require(min_multi >= 0.98, "multimode fidelity below 0.98");
}

// Criterion 8.
void no_go(Outcome& o) {
  const Encoding dual = fock_encoding(1);
  SplitMix64 rng(derive_seed(kDefaultSeed, 8));
  double worst_dual = 0.0;
  for (int i = 0; i < 20; ++i) {
    SearchOptions options;
    options.seed = derive_seed(kDefaultSeed, 800 + static_cast<std::uint64_t>(i));
    worst_dual = std::max(worst_dual, sg_gate_search(gates::ry(rng.uniform(0.0, 4 * kPi)), dual, options).best_error);
  }
  o.detail << "dual-rail worst " << worst_dual;
  o.require(worst_dual <= 1e-6, "dual-rail search above 1e-6");

  for (const Json& row : fixture("sg_floors.json")) {
    if (row["gate"].get<std::string>() != "hadamard") continue;
    const int N = row["N"].get<int>();
    const double tau = row["polished_min"].get<double>();
    o.require(tau > 0.05, "floor not above 0.05 at N=" + std::to_string(N));
    double best = 1.0;
    for (int restarts : {8, 16}) {
      SearchOptions options;
      options.restarts = restarts;
      best = std::min(best, sg_gate_search(gates::hadamard(), fock_encoding(N), options).best_error);
    }
    o.detail << "; N=" << N << " tau " << tau << " search " << best;
    o.require(best >= tau - 1e-4, "search beat floor at N=" + std::to_string(N));
  }

  const double tau_cnot = fixture("cnot_floor.json")["floor"].get<double>();
  SearchOptions options;
  options.restarts = 16;
  const CnotSearchResult cnot = cnot_search(two_qubit_fock_encoding(1), gates::cnot(), options);
  o.detail << "; cnot oracle floor " << tau_cnot << " search " << cnot.floor;
  o.require(tau_cnot > 0.05 && cnot.floor > 0.05, "cnot floor not above 0.05");
  o.require(cnot.floor >= tau_cnot - 1e-4, "cnot search beat oracle floor");
}

// Criterion 9.
void determinism(Outcome& o, const std::string& cli, const std::string& scratch) {
  namespace fs = std::filesystem;
  fs::remove_all(scratch);
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(SSRC_CONFIG_DIR))
    if (e.path().extension() == ".yaml") configs.push_back(e.path());
  std::sort(configs.begin(), configs.end());
  int compared = 0;
  for (const fs::path& cfg : configs) {
    const std::string name = cfg.stem().string();
    std::vector<std::string> contents;
    for (const char* run : {"first", "second"}) {
      const fs::path out = fs::path(scratch) / run / name;
      const std::string cmd = "\"" + cli + "\" run --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        o.require(false, name + " run failed");
        break;
      }
      std::string data;
      for (const char* ext : {".csv", ".json"}) {
        const fs::path p = out / (name + ext);
        if (fs::exists(p)) data = read_text_file(p.string());
      }
      const fs::path report = out / (name + ".report.json");
      if (fs::exists(report)) data += read_text_file(report.string());
      contents.push_back(data);
    }
    if (contents.size() == 2) {
      o.require(!contents[0].empty() && contents[0] == contents[1], name + " differs");
      ++compared;
    }
  }
  o.detail << compared << " of " << configs.size() << " configs byte-identical across two runs";
}

// Criterion 10.
void majorana(Outcome& o) {
  double worst = 0.0;
  for (int N : {2, 4, 8, 16}) {
    const BasisPtr b = make_basis(2, N);
    SplitMix64 rng(derive_seed(kDefaultSeed, 1000 + static_cast<std::uint64_t>(N)));
    for (int t = 0; t < 50; ++t) {
      const SSRCState s = random_state(b, rng);
      worst = std::max(worst, 1.0 - fidelity(majorana_to_state(state_to_majorana(s), b), s));
    }
  }
  o.detail << "max round-trip infidelity " << worst;
  o.require(worst <= 1e-8, "round trip infidelity above 1e-8");

  double worst_move = 0.0;
  SplitMix64 rng(derive_seed(kDefaultSeed, 10));
  for (int N : {2, 4, 8}) {
    const BasisPtr b = make_basis(2, N);
    for (int t = 0; t < 10; ++t) {
      const SSRCState s = random_state(b, rng);
      const double theta = rng.uniform(0.0, kPi), phi = rng.uniform(0.0, 2 * kPi);
      const auto moved = transform_points(state_to_majorana(s).points, single_particle_rotation(theta, phi));
      const auto after = state_to_majorana(rotation(b, theta, phi).apply(s)).points;
      worst_move = std::max(worst_move, match_points(moved, after).max_distance);
    }
  }
  o.detail << "; max rotated point distance " << worst_move;
  o.require(worst_move <= 1e-6, "rotation covariance above 1e-6");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <ssrc-cli> <scratch-dir> [--known-red <n>]...\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const std::string scratch = argv[2];
  std::set<int> known_red;
  for (int i = 3; i + 1 < argc; i += 2)
    if (std::string(argv[i]) == "--known-red") known_red.insert(std::atoi(argv[i + 1]));
  log::set_level(log::Level::Error);

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "su(2) algebra", 10, su2_algebra},
      {2, "phase locking", 1, phase_locking},
      {3, "coherent-state limit", 30, coherent_limit},
      {4, "displacement comparison", 60, displacement},
      {5, "squeezed limit", 30, squeezed},
      {6, "quadrature emergence", 10, quadrature},
      {7, "synthesis", 300, synthesis},
      {8, "no-go certification", 600, no_go},
      {9, "determinism", 120, [&](Outcome& o) { determinism(o, cli, scratch); }},
      {10, "Majorana round trip", 30, majorana},
  };

  int unexpected = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(seconds < c.budget_seconds, "over runtime budget");
    const bool red_known = known_red.count(c.id) > 0;
    std::printf("%s criterion %d (%s): %s; %.2f s of %.0f s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.str().c_str(), seconds, c.budget_seconds, !o.pass && red_known ? " (known red)" : "");
    std::fflush(stdout);
    if (!o.pass && !red_known) ++unexpected;
    if (o.pass && red_known) std::printf("note: criterion %d is listed as known red but passed\n", c.id);
  }
  return unexpected == 0 ? 0 : 1;
}
