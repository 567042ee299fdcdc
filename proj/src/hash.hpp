#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "types.hpp"

namespace bcoc {

/// Incremental SHA-256 over OpenSSL's EVP interface.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::span<const std::uint8_t> data);
  Sha256& update(std::string_view data);
  Sha256& updateU64(std::uint64_t value);  // big-endian
  Digest finish();

 private:
  void* ctx_;
};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

}  // namespace bcoc
