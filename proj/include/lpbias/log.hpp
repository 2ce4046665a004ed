#pragma once

#include <functional>
#include <string>

namespace lpbias {

enum class LogLevel { Info = 0, Warning = 1, Error = 2 };

using LogSink = std::function<void(LogLevel, const std::string&)>;

/// Replaces the process-wide sink. The default sink discards messages.
void set_log_sink(LogSink sink);
void log_message(LogLevel level, const std::string& message);

inline void log_info(const std::string& m) { log_message(LogLevel::Info, m); }
inline void log_warning(const std::string& m) { log_message(LogLevel::Warning, m); }

}  // namespace lpbias
