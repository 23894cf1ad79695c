#pragma once

#include <vector>

namespace imrec {

/// Number of worker threads used for row-parallel loops (>= 1).
void set_num_threads(int threads);
int num_threads();

namespace detail {

// Row loops split over threads. Reductions go through per-row partials
// summed in row order, so results do not depend on the thread count.
template <typename F>
void for_rows(int rows, F&& body) {
#pragma omp parallel for schedule(static) num_threads(num_threads()) if (num_threads() > 1)
  for (int i = 0; i < rows; ++i) body(i);
}

template <typename F>
double sum_rows(int rows, F&& row_partial) {
  std::vector<double> partial(static_cast<std::size_t>(rows));
  for_rows(rows, [&](int i) { partial[static_cast<std::size_t>(i)] = row_partial(i); });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace detail
}  // namespace imrec
