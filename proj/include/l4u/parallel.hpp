#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace l4u {

/// Caps the worker count used by `parallel_for` (0 restores the default,
/// which is the hardware concurrency).
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks; callers
/// write results into per-index slots, so outcomes never depend on the
/// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) sum in index order. Deterministic for a given input order.
double pairwise_sum(std::span<const double> v);

}  // namespace l4u
