#include "ssrc/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "ssrc/error.hpp"
#include "ssrc/log.hpp"

namespace ssrc {

namespace {

using DenseMatrix = Eigen::MatrixXcd;

struct Pattern {
  std::size_t index;  // basis index of the reached state
  int order;
  std::vector<int> moved;
  double matrix_element;
};

class Planner {
 public:
  Planner(BasisPtr basis, const SynthesisOptions& options) : basis_(std::move(basis)), options_(options) {
    K_ = basis_->num_modes();
    N_ = basis_->total_photons();
    source_ = K_ - 1;
    dim_ = static_cast<Eigen::Index>(basis_->dimension());
    for (std::size_t s = 1; s < basis_->dimension(); ++s) {
      Pattern p;
      p.index = s;
      p.order = N_ - basis_->occupation_at(s, source_);
      p.moved = basis_->occupation(s);
      p.moved[static_cast<std::size_t>(source_)] = 0;
      p.matrix_element = synthesis_matrix_element(N_, p.moved, source_);
      patterns_.push_back(std::move(p));
    }
    std::stable_sort(patterns_.begin(), patterns_.end(),
                     [](const Pattern& a, const Pattern& b) { return a.order < b.order; });
  }

  const std::vector<Pattern>& patterns() const { return patterns_; }

  // Direct amplitude matching of a target expressed relative to the initial state.
  std::vector<SynthesisStep> match(const CVector& t, int max_order, int pass, int stage) const {
    std::vector<SynthesisStep> steps;
    const cplx c0 = t[0];
    const double scale = t.cwiseAbs().maxCoeff();
    const double tiny = 1e-15 * std::max(std::abs(c0), 1e-300);

    // Two-level targets {initial, pattern} with 2*order > N: the step generator closes on
    // that pair, so the rotation angle can be matched exactly.
    std::vector<std::size_t> support;
    for (Eigen::Index s = 1; s < dim_; ++s)
      if (std::abs(t[s]) > 1e-14 * scale) support.push_back(static_cast<std::size_t>(s));
    if (support.size() == 1) {
      const Pattern& p = pattern_for(support[0]);
      if (2 * p.order > N_ && p.order <= max_order) {
        const cplx ratio = t[static_cast<Eigen::Index>(p.index)] / c0;
        const cplx r = std::polar(std::atan(std::abs(ratio)) / p.matrix_element, std::arg(ratio));
        steps.push_back(make_step(p, r, pass, stage));
        return steps;
      }
    }

    for (const Pattern& p : patterns_) {
      if (p.order > max_order) break;
      const cplx amplitude = t[static_cast<Eigen::Index>(p.index)];
      if (std::abs(amplitude) <= tiny) continue;
      const cplx r = amplitude / c0 / p.matrix_element;
      steps.push_back(make_step(p, r, pass, stage));
    }
    return steps;
  }

  // Unitary of the steps, in order (first step acts first).
  DenseMatrix unitary(const std::vector<SynthesisStep>& steps) {
    DenseMatrix u = DenseMatrix::Identity(dim_, dim_);
    for (const SynthesisStep& step : steps) {
      SpectralGenerator gen(step_generator(step));
      u = gen.unitary(static_cast<double>(step.repetitions)).matrix() * u;
    }
    return u;
  }

  // H with exp(i H) = exp(alpha X - conj(alpha) X^dag); scaled by repetitions at apply time.
  SparseOperator step_generator(const SynthesisStep& step) {
    const SparseMatrix& x = monomial(step.pattern);
    SparseMatrix a = x * step.alpha - SparseMatrix(x.adjoint()) * std::conj(step.alpha);
    SparseMatrix h = a * cplx(0.0, -1.0);
    return SparseOperator(basis_, std::move(h), true);
  }

  Eigen::Index dimension() const { return dim_; }
  int photons() const { return N_; }

 private:
  const Pattern& pattern_for(std::size_t index) const {
    for (const Pattern& p : patterns_)
      if (p.index == index) return p;
    throw Error(ErrorCode::Internal, "missing synthesis pattern");
  }

  SynthesisStep make_step(const Pattern& p, cplx r, int pass, int stage) const {
    SynthesisStep step;
    step.order = p.order;
    step.pattern = p.moved;
    step.source_mode = source_;
    const double need = std::abs(r) / options_.small_angle;
    std::int64_t m = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(need)));
    while (std::abs(r) / static_cast<double>(m) > options_.small_angle) ++m;
    step.repetitions = m;
    step.alpha = r / static_cast<double>(m);
    step.pass = pass;
    step.stage = stage;
    return step;
  }

  const SparseMatrix& monomial(const std::vector<int>& moved) {
    auto it = monomials_.find(moved);
    if (it != monomials_.end()) return it->second;
    SparseMatrix x(dim_, dim_);
    x.setIdentity();
    for (int j = 0; j < K_; ++j) {
      if (j == source_) continue;
      const int count = moved[static_cast<std::size_t>(j)];
      if (count == 0) continue;
      const SparseOperator raise = j_operator(basis_, Axis::Plus, {j, source_});
      for (int c = 0; c < count; ++c) x = SparseMatrix(raise.matrix() * x);
    }
    return monomials_.emplace(moved, std::move(x)).first->second;
  }

  BasisPtr basis_;
  SynthesisOptions options_;
  int K_ = 0;
  int N_ = 0;
  int source_ = 0;
  Eigen::Index dim_ = 0;
  std::vector<Pattern> patterns_;
  std::map<std::vector<int>, SparseMatrix> monomials_;
};

double overlap_fidelity(const CVector& target, const DenseMatrix& w) {
  return std::norm(target.dot(w.col(0)));
}

void validate_options(const SynthesisOptions& options) {
  if (!(options.small_angle > 0.0) || !std::isfinite(options.small_angle)) {
    throw Error(ErrorCode::InvalidArgument, "small_angle must be positive");
  }
  if (options.correction_passes < 0) throw Error(ErrorCode::InvalidArgument, "correction_passes must be >= 0");
  if (!(options.stage_angle > 0.0)) throw Error(ErrorCode::InvalidArgument, "stage_angle must be positive");
  if (options.max_order < 1) throw Error(ErrorCode::InvalidArgument, "max_order must be >= 1");
}

// Correction pass: walks the geodesic from the initial state to `frame_target` in stages.
// Returns the steps in execution order and the accumulated unitary.
std::pair<std::vector<SynthesisStep>, DenseMatrix> staged_pass(Planner& planner, const CVector& frame_target, int pass,
                                                               double stage_angle) {
  const Eigen::Index dim = planner.dimension();
  const cplx t0 = frame_target[0];
  const cplx phase = std::abs(t0) > 0.0 ? t0 / std::abs(t0) : cplx(1.0);
  const CVector t = frame_target / phase;
  const double theta = std::acos(std::min(1.0, std::abs(t[0])));
  CVector u = t;
  u[0] -= t[0];
  const double un = u.norm();
  if (un > 0.0) u /= un;
  const int stages = std::max(1, static_cast<int>(std::ceil(theta / stage_angle)));

  DenseMatrix w = DenseMatrix::Identity(dim, dim);
  std::vector<std::vector<SynthesisStep>> per_stage;
  for (int s = 1; s <= stages; ++s) {
    const double angle = theta * static_cast<double>(s) / static_cast<double>(stages);
    CVector ts = std::sin(angle) * u;
    ts[0] += std::cos(angle);
    const CVector local = w.adjoint() * ts;
    std::vector<SynthesisStep> steps = planner.match(local, planner.photons(), pass, s);
    w = w * planner.unitary(steps);
    per_stage.push_back(std::move(steps));
  }
  // w = U_1 U_2 ... U_S acting on the initial state: stage S executes first.
  std::vector<SynthesisStep> ordered;
  for (auto it = per_stage.rbegin(); it != per_stage.rend(); ++it) ordered.insert(ordered.end(), it->begin(), it->end());
  return {std::move(ordered), std::move(w)};
}

SynthesisPlan run_planner(const SSRCState& target, const SynthesisOptions& options, int direct_max_order,
                          bool multimode) {
  validate_options(options);
  const BasisPtr& basis = target.basis_ptr();
  Planner planner(basis, options);
  SynthesisPlan plan{basis, {}, target};
  plan.small_angle = options.small_angle;

  CVector goal = target.amplitudes();
  SparseOperator pre = identity_operator(basis);
  if (std::abs(goal[0]) < options.c0_floor) {
    if (!options.allow_prerotation || multimode) {
      std::ostringstream msg;
      msg << "|c0| = " << std::abs(goal[0]) << " below floor " << options.c0_floor;
      throw Error(ErrorCode::ZeroLeadingCoefficient, msg.str());
    }
    SplitMix64 rng(options.seed);
    double best = -1.0;
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double theta = rng.uniform(0.2, std::numbers::pi - 0.2);
      const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      SparseOperator r = rotation(basis, theta, phi);
      const CVector rotated = r.adjoint().apply(goal);
      if (std::abs(rotated[0]) > best) {
        best = std::abs(rotated[0]);
        plan.prerotated = true;
        plan.prerotation_theta = theta;
        plan.prerotation_phi = phi;
      }
    }
    if (best < options.c0_floor) throw Error(ErrorCode::ZeroLeadingCoefficient, "pre-rotation failed to expose c0");
    pre = rotation(basis, plan.prerotation_theta, plan.prerotation_phi);
    goal = pre.adjoint().apply(goal);
  }

  if (multimode) {
    for (const Pattern& p : planner.patterns()) {
      if (p.order > direct_max_order && std::abs(goal[static_cast<Eigen::Index>(p.index)]) > 1e-14) {
        std::ostringstream msg;
        msg << "target has support at excitation order " << p.order << " beyond max_order " << direct_max_order;
        throw Error(ErrorCode::TargetOrderExceedsMax, msg.str());
      }
    }
  }

  std::vector<SynthesisStep> steps = planner.match(goal, direct_max_order, 0, 0);
  DenseMatrix w = planner.unitary(steps);
  double fid = overlap_fidelity(goal, w);
  plan.passes = 1;

  for (int pass = 1; pass <= options.correction_passes; ++pass) {
    if (fid >= options.stop_fidelity) break;
    const CVector frame = w.adjoint() * goal;
    if (std::abs(frame[0]) == 0.0 && frame.norm() == 0.0) break;
    auto [extra, t] = staged_pass(planner, frame, pass, options.stage_angle);
    DenseMatrix candidate = w * t;
    const double candidate_fid = overlap_fidelity(goal, candidate);
    if (candidate_fid < fid) break;
    extra.insert(extra.end(), steps.begin(), steps.end());
    steps = std::move(extra);
    w = std::move(candidate);
    fid = candidate_fid;
    plan.passes = pass + 1;
  }

  plan.steps = std::move(steps);
  plan.predicted_fidelity = fid;
  return plan;
}

}  // namespace

std::int64_t SynthesisPlan::total_repetitions() const {
  std::int64_t total = 0;
  for (const SynthesisStep& s : steps) total += s.repetitions;
  return total;
}

SSRCState random_target(const BasisPtr& basis, int max_order, SplitMix64& rng) {
  const int K = basis->num_modes();
  const int N = basis->total_photons();
  CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
  for (std::size_t i = 0; i < basis->dimension(); ++i) {
    if (N - basis->occupation_at(i, K - 1) > max_order) continue;
    const double re = rng.normal();
    const double im = rng.normal();
    v[static_cast<Eigen::Index>(i)] = cplx(re, im);
  }
  return SSRCState(basis, std::move(v));
}

SSRCState synthesis_initial_state(const BasisPtr& basis) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
  v[0] = 1.0;
  return SSRCState(basis, std::move(v));
}

double synthesis_matrix_element(int total_photons, const std::vector<int>& pattern, int source_mode) {
  // prod_j sqrt(n_j!) * sqrt(N! / (N - e)!)
  double log_value = 0.0;
  int moved = 0;
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    if (static_cast<int>(j) == source_mode) continue;
    log_value += 0.5 * std::lgamma(pattern[j] + 1.0);
    moved += pattern[j];
  }
  if (moved > total_photons) throw Error(ErrorCode::InvalidArgument, "pattern moves more photons than available");
  log_value += 0.5 * (std::lgamma(total_photons + 1.0) - std::lgamma(total_photons - moved + 1.0));
  return std::exp(log_value);
}

SynthesisPlan plan_two_mode(const SSRCState& target, const SynthesisOptions& options) {
  if (target.basis().num_modes() != 2) throw Error(ErrorCode::InvalidArgument, "plan_two_mode requires K = 2");
  return run_planner(target, options, target.basis().total_photons(), false);
}

SynthesisPlan plan_multimode(const SSRCState& target, const SynthesisOptions& options) {
  return run_planner(target, options, options.max_order, true);
}

ExecutionResult execute_plan(const SynthesisPlan& plan, const SSRCState& initial) {
  require_same_basis(*plan.basis, initial.basis(), "execute_plan");
  SynthesisOptions options;
  options.small_angle = plan.small_angle;
  Planner planner(plan.basis, options);
  CVector v = initial.amplitudes();
  for (const SynthesisStep& step : plan.steps) {
    SpectralGenerator gen(planner.step_generator(step));
    v = gen.apply(static_cast<double>(step.repetitions), v);
  }
  if (plan.prerotated) v = rotation(plan.basis, plan.prerotation_theta, plan.prerotation_phi).apply(v);
  SSRCState out = SSRCState::renormalized(plan.basis, std::move(v), "execute_plan");
  const double f = fidelity(plan.target, out);
  return {std::move(out), f};
}

ComplexityReport synthesis_complexity_probe(const std::vector<int>& N_list, double fidelity_target,
                                            const ComplexityOptions& options) {
  if (options.samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  ComplexityReport report;
  report.fidelity_target = fidelity_target;
  std::vector<double> xs, ys_steps, ys_reps;
  for (int N : N_list) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "complexity probe needs N >= 1");
    const BasisPtr basis = make_basis(2, N);
    ComplexityRow row;
    row.N = N;
    row.samples = options.samples;
    row.min_fidelity = 1.0;
    int met = 0;
    for (int sample = 0; sample < options.samples; ++sample) {
      SplitMix64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(N) * 1000003ULL + static_cast<std::uint64_t>(sample)));
      const SSRCState target = random_state(basis, rng);
      SynthesisOptions so;
      so.small_angle = options.small_angle;
      so.correction_passes = options.max_passes;
      so.stage_angle = options.stage_angle;
      so.stop_fidelity = fidelity_target;
      so.allow_prerotation = true;
      so.seed = rng.next();
      const SynthesisPlan plan = plan_two_mode(target, so);
      const ExecutionResult result = execute_plan(plan, synthesis_initial_state(basis));
      row.mean_steps += static_cast<double>(plan.steps.size());
      row.mean_repetitions += static_cast<double>(plan.total_repetitions());
      row.mean_fidelity += result.fidelity;
      row.min_fidelity = std::min(row.min_fidelity, result.fidelity);
      if (result.fidelity >= fidelity_target) ++met;
    }
    const double n = static_cast<double>(options.samples);
    row.mean_steps /= n;
    row.mean_repetitions /= n;
    row.mean_fidelity /= n;
    row.met_fraction = static_cast<double>(met) / n;
    report.rows.push_back(row);
    if (row.mean_steps > 0.0 && row.mean_repetitions > 0.0) {
      xs.push_back(std::log(static_cast<double>(N)));
      ys_steps.push_back(std::log(row.mean_steps));
      ys_reps.push_back(std::log(row.mean_repetitions));
    }
  }
  auto slope = [&](const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
  };
  report.slope_steps = slope(ys_steps);
  report.slope_repetitions = slope(ys_reps);
  return report;
}

}  // namespace ssrc
