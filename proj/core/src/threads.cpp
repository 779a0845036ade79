#include "sspec/threads.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace sspec {

namespace {

std::atomic<int> requested{0};

int fromEnvironment() {
  const char* env = std::getenv("SSPEC_JOBS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    const int n = std::stoi(env);
    return n > 0 ? n : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

void setThreadCount(int n) { requested.store(n > 0 ? n : 0); }

int threadCount() {
  if (const int n = requested.load(); n > 0) return n;
  if (const int n = fromEnvironment(); n > 0) return n;
  return omp_get_max_threads();
}

}  // namespace sspec
