#include "gcflab/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace gcflab {

unsigned worker_count() {
  if (const char* env = std::getenv("SOLITON_THREADS")) {
    unsigned n = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, n);
    if (ec == std::errc() && ptr == end && n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace gcflab
