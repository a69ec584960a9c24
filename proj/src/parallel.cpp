#include "npci/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace npci {
namespace {

std::atomic<int> g_threads{0};

int env_threads() {
  const char* s = std::getenv("NPCI_NUM_THREADS");
  if (s == nullptr) return 0;
  const int n = std::atoi(s);
  return n > 0 ? n : 0;
}

}  // namespace

int num_threads() {
  if (int n = g_threads.load(); n > 0) return n;
  if (int n = env_threads(); n > 0) return n;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_num_threads(int n) { g_threads.store(n > 0 ? n : 0); }

}  // namespace npci
