#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace stein_pairs {

enum class Execution { serial, parallel };

// Number of worker threads the parallel kernels will use. Honors the
// STEIN_PAIRS_THREADS environment variable as an upper cap.
int worker_threads();

// Overrides the worker count for the remainder of the process (0 restores the
// environment-derived default).
void set_worker_threads(int threads);

// Runs body(i) for i in [0, count). Exceptions thrown by any iteration are
// captured and the first one (lowest index) is rethrown after the loop, so the
// reported failure does not depend on thread scheduling.
template <class Body>
void for_each_index(Execution exec, std::size_t count, Body&& body) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::size_t first_index = count;
  std::mutex guard;
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(worker_threads())
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace stein_pairs
