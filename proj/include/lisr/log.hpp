#pragma once

#include <iostream>
#include <mutex>
#include <string_view>

namespace lisr {

enum class LogLevel { Quiet = 0, Warn = 1, Info = 2 };

inline LogLevel& log_level()
{
    static LogLevel level = LogLevel::Warn;
    return level;
}

inline void log_message(LogLevel level, std::string_view msg)
{
    static std::mutex mu;
    if (static_cast<int>(level) > static_cast<int>(log_level())) {
        return;
    }
    std::lock_guard lock(mu);
    std::cerr << (level == LogLevel::Warn ? "[lisr warn] " : "[lisr] ") << msg << '\n';
}

inline void log_warn(std::string_view msg) { log_message(LogLevel::Warn, msg); }
inline void log_info(std::string_view msg) { log_message(LogLevel::Info, msg); }

} // namespace lisr
