#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace sistk {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Level comes from SIS_KIT_LOG (error|info|debug), default info.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SIS_KIT_LOG");
    if (env && std::strcmp(env, "error") == 0) return LogLevel::Error;
    if (env && std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    return LogLevel::Info;
  }();
  return level;
}

inline void log_at(LogLevel level, const char* tag, const std::string& msg) {
  if (level <= log_level()) std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

inline void log_error(const std::string& msg) {
  log_at(LogLevel::Error, "error", msg);
}
inline void log_info(const std::string& msg) {
  log_at(LogLevel::Info, "info", msg);
}
inline void log_debug(const std::string& msg) {
  log_at(LogLevel::Debug, "debug", msg);
}

}  // namespace sistk
