#include "radembed/log.h"

#include <iostream>
#include <mutex>

namespace radembed {
namespace {

std::mutex g_mu;
LogLevel g_level = LogLevel::kWarning;
std::function<void(LogLevel, const std::string&)> g_sink;

void emit(LogLevel level, const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_mu);
  if (static_cast<int>(level) > static_cast<int>(g_level)) return;
  if (g_sink) {
    g_sink(level, msg);
    return;
  }
  std::cerr << (level == LogLevel::kWarning ? "[warning] " : "[info] ") << msg << '\n';
}

}  // namespace

void set_log_level(LogLevel level) {
  std::lock_guard<std::mutex> lock(g_mu);
  g_level = level;
}

LogLevel log_level() {
  std::lock_guard<std::mutex> lock(g_mu);
  return g_level;
}

void set_log_sink(std::function<void(LogLevel, const std::string&)> sink) {
  std::lock_guard<std::mutex> lock(g_mu);
  g_sink = std::move(sink);
}

void log_warning(const std::string& msg) { emit(LogLevel::kWarning, msg); }
void log_info(const std::string& msg) { emit(LogLevel::kInfo, msg); }

}  // namespace radembed
