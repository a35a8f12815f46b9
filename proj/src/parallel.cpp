#include "hyperem/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hyperem {

std::size_t worker_count() {
  if (const char* env = std::getenv("HYPEREM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace hyperem
