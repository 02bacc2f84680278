#pragma once

#include <string_view>

namespace csg {

enum class LogLevel { quiet = 0, warn = 1, info = 2 };

/// Process-wide verbosity for diagnostics written to stderr.
void set_log_level(LogLevel level);
LogLevel log_level();

void log_warn(std::string_view msg);
void log_info(std::string_view msg);

}  // namespace csg
