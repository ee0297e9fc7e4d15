#ifndef DRAINET_COMMON_HPP
#define DRAINET_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace drainet {

using i64 = long long;
using u64 = std::uint64_t;

// Integer lattice site, first coordinate space, second time.
struct Cell {
  i64 x = 0;
  i64 t = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct RadiusExceeded : std::runtime_error {
  explicit RadiusExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NotOpen : std::runtime_error {
  explicit NotOpen(const std::string& what) : std::runtime_error(what) {}
};

struct SelectorExhausted : std::runtime_error {
  explicit SelectorExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyPath : std::invalid_argument {
  explicit EmptyPath(const std::string& what) : std::invalid_argument(what) {}
};

struct EmptySet : std::invalid_argument {
  explicit EmptySet(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidStep : std::invalid_argument {
  explicit InvalidStep(const std::string& what) : std::invalid_argument(what) {}
};

struct InsufficientUncensored : std::runtime_error {
  explicit InsufficientUncensored(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace drainet

#endif
