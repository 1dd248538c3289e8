#pragma once

#include <vector>

#include "swad/matrix.hpp"

namespace swad {

// Samples with binary labels: 0 = normal, 1 = abnormal.
struct LabeledSet {
  Matrix x;
  std::vector<int> y;

  std::size_t size() const noexcept { return x.rows(); }
};

}  // namespace swad
