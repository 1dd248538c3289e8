#include "swad/rng.hpp"

#include <limits>

#include "swad/error.hpp"

namespace swad {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), key_(mix64(seed ^ 0x5741'4400'0000'0000ULL)) {}

std::uint64_t Rng::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double Rng::next_double() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_below(std::uint64_t n) noexcept {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Rng Rng::split(std::string_view label) const {
  return Rng(seed_, mix64(key_ ^ hash_label(label)));
}

Rng Rng::split(std::uint64_t index) const {
  return Rng(seed_, mix64(key_ + mix64(index + kGamma)));
}

Matrix rng_uniform(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  if (!(lo < hi)) {
    throw ValueError("rng_uniform: require lo < hi, got lo=" + std::to_string(lo) +
                     " hi=" + std::to_string(hi));
  }
  Matrix m(rows, cols);
  const double width = hi - lo;
  for (double& v : m.data()) {
    v = lo + width * rng.next_double();
    if (v >= hi) v = lo;  // guard against rounding up to hi
  }
  return m;
}

std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::pair<Matrix, std::vector<std::size_t>> shuffle_rows(Rng& rng, const Matrix& m) {
  auto perm = random_permutation(rng, m.rows());
  return {gather_rows(m, perm), std::move(perm)};
}

}  // namespace swad
