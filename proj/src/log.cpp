#include "ssrc/log.hpp"

#include <atomic>
#include <memory>
#include <mutex>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace ssrc::log {
namespace {

std::atomic<std::size_t> g_warnings{0};

spdlog::logger& logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(once, [] {
    instance = std::make_shared<spdlog::logger>("ssrc", std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
    instance->set_pattern("[ssrc] [%l] %v");
    instance->set_level(spdlog::level::warn);
  });
  return *instance;
}

}  // namespace

void set_level(Level level) {
  switch (level) {
    case Level::Debug: logger().set_level(spdlog::level::debug); break;
    case Level::Info: logger().set_level(spdlog::level::info); break;
    case Level::Warn: logger().set_level(spdlog::level::warn); break;
    case Level::Error: logger().set_level(spdlog::level::err); break;
    case Level::Off: logger().set_level(spdlog::level::off); break;
  }
}

void debug(const std::string& message) { logger().debug(message); }
void info(const std::string& message) { logger().info(message); }

void warn(const std::string& message) {
  ++g_warnings;
  logger().warn(message);
}

std::size_t warning_count() { return g_warnings.load(); }

}  // namespace ssrc::log
