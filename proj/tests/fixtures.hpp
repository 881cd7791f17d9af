#pragma once

#include <vector>

#include "unseen/model.hpp"

namespace unseen::testing {

// Eight occupied bins out of 100 labeled bins, N = 1000.
inline CountVector skewed_counts() {
  std::vector<Count> v = {691, 232, 24, 17, 14, 10, 6, 6};
  v.resize(100, 0);
  return CountVector(v);
}

// Eight equal occupied bins out of 100 labeled bins, N = 1000.
inline CountVector flat_counts() {
  std::vector<Count> v(8, 125);
  v.resize(100, 0);
  return CountVector(v);
}

}  // namespace unseen::testing
