#include "harq/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace harq {

int default_workers() {
  if (const char* env = std::getenv("HARQ_WORKERS"); env != nullptr && *env != '\0') {
    const std::string_view text(env);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value <= 0) {
      throw std::invalid_argument("HARQ_WORKERS must be a positive integer, got '" +
                                  std::string(text) + "'");
    }
    return value;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace harq
