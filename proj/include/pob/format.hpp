#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace pob {

// Shortest decimal representation that round-trips the double. Used for CSV
// cells and variant names so text outputs are deterministic.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace pob
