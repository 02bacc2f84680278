#include "csg2l/numkit/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace csg {
namespace {

std::atomic<int> g_level{static_cast<int>(LogLevel::warn)};
std::mutex g_mutex;

void emit(const char* tag, std::string_view msg) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << tag << msg << '\n';
}

}  // namespace

void set_log_level(LogLevel level) { g_level = static_cast<int>(level); }
LogLevel log_level() { return static_cast<LogLevel>(g_level.load()); }

void log_warn(std::string_view msg) {
  if (g_level >= static_cast<int>(LogLevel::warn)) emit("warning: ", msg);
}

void log_info(std::string_view msg) {
  if (g_level >= static_cast<int>(LogLevel::info)) emit("", msg);
}

}  // namespace csg
