#include "markov_sa/log.hpp"

#include <cstdarg>
#include <cstdlib>
#include <cstring>

namespace markov_sa::log {

static Level parse_env() {
    const char* v = std::getenv("MARKOV_SA_LOG");
    if (v == nullptr) return Level::Warn;
    if (std::strcmp(v, "debug") == 0) return Level::Debug;
    if (std::strcmp(v, "info") == 0) return Level::Info;
    if (std::strcmp(v, "warn") == 0) return Level::Warn;
    if (std::strcmp(v, "error") == 0) return Level::Error;
    return Level::Warn;
}

Level threshold() {
    static const Level cached = parse_env();
    return cached;
}

bool enabled(Level level) { return static_cast<int>(level) >= static_cast<int>(threshold()); }

void write(Level level, const char* fmt, ...) {
    if (!enabled(level)) return;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::fprintf(stderr, "[markov_sa %s] ", names[static_cast<int>(level)]);
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

}  // namespace markov_sa::log
