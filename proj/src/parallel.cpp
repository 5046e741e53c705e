#include "perfolab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace perfolab {

std::size_t thread_count() {
  if (const char* env = std::getenv("PERFOLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace perfolab
