#include "phlab/parallel.hpp"

#include <atomic>

namespace phlab {

namespace {
std::atomic<int> g_cap{0};
}

void set_thread_cap(int threads) { g_cap.store(threads < 0 ? 0 : threads); }

int thread_cap() {
  int c = g_cap.load();
  if (c > 0) return c;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace phlab
