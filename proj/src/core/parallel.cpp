// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/parallel.hpp"

#include <omp.h>

namespace plantsam::parallel {

int max_threads() { return omp_get_max_threads(); }

int resolve_workers(int requested) { return requested > 0 ? requested : max_threads(); }

void set_default_workers(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace plantsam::parallel
