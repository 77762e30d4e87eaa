#include "cpr/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace cpr {

std::size_t thread_count() {
  if (const char* env = std::getenv("CPR_THREADS")) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
    if (ec == std::errc() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace cpr
