#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace pecfdtd {

/// Static-schedule parallel loop over [0, n). Every iteration must write only
/// its own outputs, which makes results independent of the thread count. The
/// exception thrown by the lowest failing index is rethrown on the caller.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  std::exception_ptr error;
  std::ptrdiff_t error_index = -1;
  std::mutex mu;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(mu);
      if (error_index < 0 || i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace pecfdtd
