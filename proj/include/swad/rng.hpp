#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "swad/matrix.hpp"

namespace swad {

// Counter-based generator: output n is a stateless mix of (key, n), so a
// stream is fully described by its key and position. Child streams are
// derived from the key and a label only, which keeps e.g. weight
// initialization independent of how many shuffles happened before it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;
  // Uniform in [0, 1) with 53 random bits.
  double next_double() noexcept;
  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) noexcept;

  // Independent child stream named by `label`. Does not advance this stream.
  Rng split(std::string_view label) const;
  Rng split(std::uint64_t index) const;

 private:
  Rng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// i.i.d. uniform entries in [lo, hi). Throws ValueError if lo >= hi.
Matrix rng_uniform(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi);

// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n);

// Rows of `m` in a random order, plus the permutation used: result row i is
// m.row(perm[i]).
std::pair<Matrix, std::vector<std::size_t>> shuffle_rows(Rng& rng, const Matrix& m);

}  // namespace swad
