#pragma once

#include <cstddef>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eqsrc::par {

enum class Mode { serial, openmp };

// Default execution mode: OpenMP when compiled in and not disabled via
// EQSRC_THREADS=1. Grid fills have no shared mutable state, so results are
// identical (bitwise) in both modes; the serial path is kept as the
// reference implementation for tests and benchmarks.
inline Mode default_mode() {
#ifdef _OPENMP
  if (const char* t = std::getenv("EQSRC_THREADS")) {
    if (t[0] == '1' && t[1] == '\0') return Mode::serial;
  }
  return Mode::openmp;
#else
  return Mode::serial;
#endif
}

template <class Body>
void parallel_for(std::size_t n, const Body& body, Mode mode = default_mode()) {
  if (mode == Mode::openmp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace eqsrc::par
