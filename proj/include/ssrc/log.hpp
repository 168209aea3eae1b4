#pragma once

#include <cstddef>
#include <string>

namespace ssrc::log {

enum class Level { Debug, Info, Warn, Error, Off };

void set_level(Level level);
void debug(const std::string& message);
void info(const std::string& message);
void warn(const std::string& message);

// Number of warnings emitted since process start (also counts suppressed ones).
std::size_t warning_count();

}  // namespace ssrc::log
