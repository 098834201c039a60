#include "commsol/error.hpp"

#include <cstdlib>

namespace commsol {

std::size_t work_cap(std::size_t fallback) {
  const char *env = std::getenv("COMMSOL_MAX_WORK");
  if (env == nullptr || *env == '\0') {
    return fallback;
  }
  char *end = nullptr;
  unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || value == 0) {
    return fallback;
  }
  return static_cast<std::size_t>(value);
}

} // namespace commsol
