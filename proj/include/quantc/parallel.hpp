// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace quantc {

/// Worker count resolution: explicit value if > 0, else the QUANTC_WORKERS
/// environment variable, else hardware concurrency.
int resolve_workers(int requested);

/// Runs fn(i) for i in [0, n) across `workers` threads. Indices are
/// partitioned statically, each result slot is written by exactly one call,
/// so outcomes are independent of the worker count. Exceptions are captured
/// and the first one (by index) rethrown after all threads join.
void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn);

}  // namespace quantc
