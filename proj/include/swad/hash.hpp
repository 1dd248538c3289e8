#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "swad/matrix.hpp"

namespace swad {

// Incremental SHA-256 (OpenSSL EVP underneath).
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::span<const std::byte> bytes);
  void update(const Matrix& m);  // little-endian doubles, row-major
  void update(std::span<const int> values);  // little-endian int32
  std::string hex_digest();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string sha256_hex(std::span<const std::byte> bytes);

// Bytes of `values` as little-endian IEEE-754 doubles.
std::vector<std::byte> to_le_bytes(std::span<const double> values);

}  // namespace swad
