#include "stein_pairs/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

namespace stein_pairs {

namespace {

std::atomic<int> override_threads{0};

int env_threads() {
  const char* raw = std::getenv("STEIN_PAIRS_THREADS");
  const int hw = std::max(1, omp_get_num_procs());
  if (raw == nullptr || *raw == '\0') return hw;
  try {
    const int cap = std::stoi(raw);
    return cap >= 1 ? std::min(cap, hw) : hw;
  } catch (...) {
    return hw;
  }
}

}  // namespace

int worker_threads() {
  const int forced = override_threads.load();
  if (forced > 0) return forced;
  static const int from_env = env_threads();
  return from_env;
}

void set_worker_threads(int threads) { override_threads.store(std::max(0, threads)); }

}  // namespace stein_pairs
