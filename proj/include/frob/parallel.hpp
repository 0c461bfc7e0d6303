#pragma once

// Index-parallel loops with a serial reference path. Work items must be
// independent; results are written by index, so both policies produce
// bit-identical output. The exception of the lowest failing index wins.

#include <cstddef>
#include <exception>
#include <string>

namespace frob {

enum class ExecPolicy { serial, openmp };

inline std::string to_string(ExecPolicy p) { return p == ExecPolicy::serial ? "serial" : "openmp"; }

template <class F>
void parallel_for(std::size_t count, ExecPolicy policy, F&& body) {
  if (policy == ExecPolicy::serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::size_t first_index = count;
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(frob_parallel_for)
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace frob
