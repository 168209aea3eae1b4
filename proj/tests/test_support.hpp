#pragma once

#include <fstream>
#include <string>

#include "ssrc/serialization.hpp"

namespace ssrc::testing {

inline Json load_fixture(const std::string& name) {
  std::ifstream in(std::string(SSRC_FIXTURE_DIR) + "/" + name);
  return Json::parse(in);
}

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

}  // namespace ssrc::testing
