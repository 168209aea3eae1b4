#pragma once

#include <string>

#include "json.hpp"

#include "ssrc/encodings.hpp"
#include "ssrc/hilbert.hpp"
#include "ssrc/schwinger.hpp"
#include "ssrc/synthesis.hpp"

namespace ssrc {

using Json = nlohmann::json;

// {"K", "N", "entries": [[index, re, im], ...]}; nonzero entries only.
Json state_to_json(const SSRCState& state);
SSRCState state_from_json(const Json& j, std::size_t dimension_cap = kDefaultDimensionCap);

// {"K", "N", "hermitian", "entries": [[row, col, re, im], ...]}
Json operator_to_json(const SparseOperator& op);
SparseOperator operator_from_json(const Json& j, std::size_t dimension_cap = kDefaultDimensionCap);

Json plan_to_json(const SynthesisPlan& plan);

struct FeasibilityRecord {
  std::string encoding;
  int N = 0;
  std::string gate;
  double best_error = 0.0;
  double certified_floor = 0.0;
  int restarts = 0;
  std::uint64_t seed = 0;
};

Json feasibility_to_json(const FeasibilityRecord& record);

// Writes `text` to `path`, throwing Io on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace ssrc
