// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

namespace epipano::parallel {

/// Worker threads used by parallelizable operations (field construction,
/// mask building, rendering). Defaults to the hardware concurrency. Every
/// operation in this library produces output that is bitwise independent of
/// this setting; it only changes wall time.
void set_threads(int n);
int threads();

/// Runs fn(begin, end) over a partition of [0, count) across the configured
/// worker threads. Chunk boundaries depend only on count and the thread
/// count; callers must write to disjoint or commutatively updated output.
void for_range(int64_t count, const std::function<void(int64_t, int64_t)>& fn);

}  // namespace epipano::parallel
