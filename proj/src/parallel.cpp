#include "cutrom/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cutrom {

namespace {
int g_workers = 0;
}

void set_worker_count(int n) { g_workers = n < 0 ? 0 : n; }
int worker_count() { return g_workers; }

void parallel_for(int n, const std::function<void(int)>& body) {
#ifdef _OPENMP
  if (g_workers != 1) {
    if (g_workers > 1) {
#pragma omp parallel for schedule(static) num_threads(g_workers)
      for (int i = 0; i < n; ++i) body(i);
    } else {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) body(i);
    }
    return;
  }
#endif
  for (int i = 0; i < n; ++i) body(i);
}

void serial_for(int n, const std::function<void(int)>& body) {
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace cutrom
