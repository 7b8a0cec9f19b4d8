#pragma once

#include <cstdio>

namespace markov_sa::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3 };

// Threshold comes from the MARKOV_SA_LOG environment variable
// (debug|info|warn|error); default is warn. Messages go to stderr so they
// never perturb data written to stdout or to output files.
Level threshold();

bool enabled(Level level);

void write(Level level, const char* fmt, ...);

#define MSA_LOG_DEBUG(...) ::markov_sa::log::write(::markov_sa::log::Level::Debug, __VA_ARGS__)
#define MSA_LOG_INFO(...) ::markov_sa::log::write(::markov_sa::log::Level::Info, __VA_ARGS__)
#define MSA_LOG_WARN(...) ::markov_sa::log::write(::markov_sa::log::Level::Warn, __VA_ARGS__)
#define MSA_LOG_ERROR(...) ::markov_sa::log::write(::markov_sa::log::Level::Error, __VA_ARGS__)

}  // namespace markov_sa::log
