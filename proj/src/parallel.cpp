#include "imrec/parallel.hpp"

#include <atomic>

#include "imrec/error.hpp"

namespace imrec {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int threads) {
  if (threads < 1) throw ParameterError("set_num_threads: need at least one thread");
  g_threads.store(threads);
}

int num_threads() { return g_threads.load(); }

}  // namespace imrec
