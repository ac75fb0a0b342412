#pragma once

#include <functional>
#include <string>

namespace radembed {

enum class LogLevel { kQuiet = 0, kWarning = 1, kInfo = 2, kDebug = 3 };

void set_log_level(LogLevel level);
LogLevel log_level();

// Replaces the stderr sink; pass an empty function to restore it.
void set_log_sink(std::function<void(LogLevel, const std::string&)> sink);

void log_warning(const std::string& msg);
void log_info(const std::string& msg);

}  // namespace radembed
