// SPDX-License-Identifier: Apache-2.0
#include "core/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>

namespace kgw {

namespace {

std::atomic<int> g_override{0};

int env_threads() {
  for (const char* name : {"KGW_NUM_THREADS", "OMP_NUM_THREADS"}) {
    if (const char* v = std::getenv(name)) {
      const int n = std::atoi(v);
      if (n > 0) return n;
    }
  }
  return omp_get_max_threads();
}

}  // namespace

int num_threads() {
  const int o = g_override.load();
  return o > 0 ? o : env_threads();
}

void set_num_threads(int n) { g_override.store(n > 0 ? n : 0); }

void parallel_for(int n, const std::function<void(int)>& body) {
  const int nt = num_threads();
  if (nt <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lk(mu);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

void parallel_for_static(int n, const std::function<void(int, int)>& body) {
  const int nt = num_threads();
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) body(i, 0);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int i = 0; i < n; ++i) {
    try {
      body(i, omp_get_thread_num());
    } catch (...) {
      std::lock_guard<std::mutex> lk(mu);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace kgw
