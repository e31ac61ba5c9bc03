#pragma once

// Index-parallel loops. Every parallel kernel in the library goes through
// for_each_index so that a serial reference run is one flag away.

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace qcalc {

enum class Execution { serial, parallel };

/// Thread cap: QCALC_THREADS if set and positive, else the OpenMP default.
int max_threads();

/// Runs fn(i) for i in [0, count). With Execution::parallel iterations are
/// scheduled dynamically across threads; the first exception (lowest index)
/// is rethrown after all iterations finish.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                    Execution exec = Execution::parallel);

/// Maps [0, count) to a vector of results, index-ordered regardless of schedule.
template <class T, class F>
std::vector<T> map_indices(std::size_t count, F&& fn, Execution exec = Execution::parallel) {
  std::vector<T> out(count);
  for_each_index(count, [&](std::size_t i) { out[i] = fn(i); }, exec);
  return out;
}

}  // namespace qcalc
