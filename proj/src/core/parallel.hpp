// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace kgw {

// Thread count: KGW_NUM_THREADS (or OMP_NUM_THREADS) unless overridden.
int num_threads();
void set_num_threads(int n);  // n <= 0 restores the environment default

void parallel_for(int n, const std::function<void(int)>& body);
// static schedule; body receives the thread id
void parallel_for_static(int n, const std::function<void(int, int)>& body);

}  // namespace kgw
