// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace plantsam::parallel {

/// Number of OpenMP threads available to a parallel region.
int max_threads();

/// Maps a requested worker count to a usable one; 0 or negative means "all".
int resolve_workers(int requested);

/// Sets the default team size for later parallel regions; n <= 0 keeps it.
void set_default_workers(int n);

}  // namespace plantsam::parallel
