#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dlmperf {

// Bad input: an invariant of a config, workload, or grid does not hold.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("cost count exceeds 64-bit range");
  }
  return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("cost count exceeds 64-bit range");
  }
  return r;
}

template <typename... Ts>
std::uint64_t product(std::uint64_t first, Ts... rest) {
  std::uint64_t r = first;
  ((r = checked_mul(r, static_cast<std::uint64_t>(rest))), ...);
  return r;
}

}  // namespace detail
}  // namespace dlmperf
