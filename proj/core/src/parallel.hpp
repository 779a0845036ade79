#pragma once

#include <cstddef>

#include "sspec/threads.hpp"

namespace sspec::detail {

// Static schedule, each index written to its own slot by the caller.
template <class Body>
void parallelFor(std::ptrdiff_t count, Body&& body) {
#pragma omp parallel for schedule(static) num_threads(threadCount())
  for (std::ptrdiff_t k = 0; k < count; ++k) body(k);
}

}  // namespace sspec::detail
