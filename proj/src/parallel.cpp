#include "dblext/parallel.hpp"

#include <atomic>

namespace dblext {

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_worker_threads(unsigned n) { g_workers.store(std::max(1u, n)); }

unsigned worker_threads() { return g_workers.load(); }

}  // namespace dblext
