#include "ssrc/serialization.hpp"

#include <fstream>
#include <sstream>

#include "ssrc/error.hpp"

namespace ssrc {

namespace {

BasisPtr basis_from_json(const Json& j, std::size_t cap) {
  if (!j.is_object() || !j.contains("K") || !j.contains("N") || !j.contains("entries")) {
    throw Error(ErrorCode::InvalidArgument, "JSON record needs K, N and entries");
  }
  return make_basis(j.at("K").get<int>(), j.at("N").get<int>(), cap);
}

std::size_t checked_index(const Json& v, std::size_t dimension) {
  const auto i = v.get<std::int64_t>();
  if (i < 0 || static_cast<std::uint64_t>(i) >= dimension) throw Error(ErrorCode::InvalidArgument, "JSON index out of range");
  return static_cast<std::size_t>(i);
}

}  // namespace

Json state_to_json(const SSRCState& state) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const cplx a = state.amplitude(i);
    if (a != cplx(0.0)) entries.push_back(Json::array({i, a.real(), a.imag()}));
  }
  return Json{{"K", state.basis().num_modes()}, {"N", state.basis().total_photons()}, {"entries", entries}};
}

SSRCState state_from_json(const Json& j, std::size_t dimension_cap) {
  const BasisPtr basis = basis_from_json(j, dimension_cap);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
  for (const Json& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw Error(ErrorCode::InvalidArgument, "state entry must be [index, re, im]");
    v[static_cast<Eigen::Index>(checked_index(e[0], basis->dimension()))] = cplx(e[1].get<double>(), e[2].get<double>());
  }
  if (std::abs(v.norm() - 1.0) > 1e-12) return SSRCState(basis, std::move(v));
  return SSRCState::from_normalized(basis, std::move(v));
}

Json operator_to_json(const SparseOperator& op) {
  Json entries = Json::array();
  for (const auto& e : op.entries()) entries.push_back(Json::array({e.row, e.col, e.value.real(), e.value.imag()}));
  return Json{{"K", op.basis().num_modes()},
              {"N", op.basis().total_photons()},
              {"hermitian", op.hermitian()},
              {"entries", entries}};
}

SparseOperator operator_from_json(const Json& j, std::size_t dimension_cap) {
  const BasisPtr basis = basis_from_json(j, dimension_cap);
  const auto dim = basis->dimension();
  std::vector<Eigen::Triplet<cplx, std::ptrdiff_t>> triplets;
  for (const Json& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 4) throw Error(ErrorCode::InvalidArgument, "operator entry must be [row, col, re, im]");
    triplets.emplace_back(static_cast<std::ptrdiff_t>(checked_index(e[0], dim)), static_cast<std::ptrdiff_t>(checked_index(e[1], dim)),
                          cplx(e[2].get<double>(), e[3].get<double>()));
  }
  SparseMatrix m(static_cast<std::ptrdiff_t>(dim), static_cast<std::ptrdiff_t>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseOperator(basis, std::move(m), j.value("hermitian", false));
}

Json plan_to_json(const SynthesisPlan& plan) {
  Json steps = Json::array();
  for (const SynthesisStep& s : plan.steps) {
    steps.push_back(Json{{"order", s.order},
                         {"pattern", s.pattern},
                         {"source_mode", s.source_mode},
                         {"alpha", Json::array({s.alpha.real(), s.alpha.imag()})},
                         {"repetitions", s.repetitions},
                         {"pass", s.pass},
                         {"stage", s.stage}});
  }
  return Json{{"K", plan.basis->num_modes()},
              {"N", plan.basis->total_photons()},
              {"small_angle", plan.small_angle},
              {"prerotated", plan.prerotated},
              {"prerotation", Json::array({plan.prerotation_theta, plan.prerotation_phi})},
              {"predicted_fidelity", plan.predicted_fidelity},
              {"passes", plan.passes},
              {"total_repetitions", plan.total_repetitions()},
              {"target", state_to_json(plan.target)},
              {"steps", steps}};
}

Json feasibility_to_json(const FeasibilityRecord& r) {
  return Json{{"encoding", r.encoding},     {"N", r.N},
              {"gate", r.gate},             {"best_error", r.best_error},
              {"certified_floor", r.certified_floor}, {"restarts", r.restarts},
              {"seed", r.seed}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace ssrc
