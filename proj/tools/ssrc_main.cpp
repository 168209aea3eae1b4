#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ssrc/ssrc.h"

namespace {

int exit_code(ssrc_status status) {
  switch (status) {
    case SSRC_OK:
      return 0;
    case SSRC_ERR_CONFIG_PARSE:
      return 2;
    case SSRC_ERR_IO:
      return 3;
    case SSRC_ERR_DIMENSION_OVERFLOW:
      return 4;
    default:
      return 1;
  }
}

std::optional<std::uint64_t> parse_u64(const std::string& text) {
  if (text.empty() || text.front() == '-') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  const char* digits = text.c_str() + (hex ? 2 : 0);
  const unsigned long long v = std::strtoull(digits, &end, hex ? 16 : 10);
  if (errno != 0 || end == digits || *end != '\0' || text.find_first_of("+- \t") != std::string::npos) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

int validate(const std::string& path) {
  char* diagnostics = nullptr;
  const ssrc_status status = ssrc_config_validate(path.c_str(), &diagnostics);
  if (diagnostics) {
    std::cout << diagnostics;
    ssrc_string_free(diagnostics);
  }
  if (status == SSRC_OK) {
    std::cout << path << ": ok\n";
  } else {
    std::cerr << "ssrc: " << ssrc_last_error() << "\n";
  }
  return exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-photon-number bosonic simulator and experiment runner"};
  app.set_version_flag("--version", std::string(ssrc_version()));
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string seed_text;
  bool validate_only = false;
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to standard error");

  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config, "YAML experiment config")->required();
  run->add_option("--out", out, "Output directory (overrides output.directory)");
  run->add_option("--seed", seed_text, "Seed override, decimal or 0x-prefixed hex");
  run->add_flag("--validate", validate_only, "Only validate the config");

  CLI::App* check = app.add_subcommand("validate", "List every problem in a config file");
  check->add_option("--config", config, "YAML experiment config")->required();

  CLI11_PARSE(app, argc, argv);
  ssrc_set_log_level(verbose ? SSRC_LOG_INFO : SSRC_LOG_WARN);

  if (check->parsed() || validate_only) return validate(config);

  std::optional<std::uint64_t> seed;
  if (!seed_text.empty()) {
    seed = parse_u64(seed_text);
    if (!seed) {
      std::cerr << "ssrc: --seed must be an unsigned 64-bit integer\n";
      return 2;
    }
  }
  char* summary = nullptr;
  const ssrc_status status =
      ssrc_config_run(config.c_str(), out.empty() ? nullptr : out.c_str(), seed ? &*seed : nullptr, &summary);
  if (status != SSRC_OK) {
    std::cerr << "ssrc: " << ssrc_last_error() << "\n";
    return exit_code(status);
  }
  std::cout << summary;
  ssrc_string_free(summary);
  return 0;
}
