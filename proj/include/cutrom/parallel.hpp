#pragma once
#include <functional>

namespace cutrom {

// global worker count: 0 = use OpenMP default, 1 = serial, n = n threads
void set_worker_count(int n);
int worker_count();

// parallel loop over [0, n); bodies must write to disjoint slots so results
// are identical to the serial order
void parallel_for(int n, const std::function<void(int)>& body);

// serial reference path, kept for testing the parallel kernels against
void serial_for(int n, const std::function<void(int)>& body);

}  // namespace cutrom
