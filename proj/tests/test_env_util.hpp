#ifndef DRAINET_TEST_ENV_UTIL_HPP
#define DRAINET_TEST_ENV_UTIL_HPP

#include <initializer_list>
#include <map>
#include <utility>

#include "drainet/environment.hpp"

namespace drainet::testing {

// Explicit environment for worked examples: unspecified cells are closed
// and have theta = +1.
class TableEnvironment {
 public:
  explicit TableEnvironment(i64 r_max = 50) : r_max_(r_max) {}

  TableEnvironment& open_cells(i64 t, std::initializer_list<i64> xs) {
    for (i64 x : xs) open_[{x, t}] = true;
    return *this;
  }

  TableEnvironment& close_cells(i64 t, std::initializer_list<i64> xs) {
    for (i64 x : xs) open_[{x, t}] = false;
    return *this;
  }

  TableEnvironment& set_theta(i64 x, i64 t, int theta) {
    theta_[{x, t}] = theta;
    return *this;
  }

  bool open(i64 x, i64 t) const {
    auto it = open_.find({x, t});
    return it != open_.end() && it->second;
  }

  int theta(i64 x, i64 t) const {
    auto it = theta_.find({x, t});
    return it == theta_.end() ? 1 : it->second;
  }

  i64 r_max() const { return r_max_; }

 private:
  std::map<std::pair<i64, i64>, bool> open_;
  std::map<std::pair<i64, i64>, int> theta_;
  i64 r_max_;
};

static_assert(EnvironmentModel<TableEnvironment>);

}  // namespace drainet::testing

#endif
