#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace choi {

// Streaming SHA-256 (FIPS 180-4). Used to fingerprint report tables so two
// runs with the same seed can be compared byte-for-byte.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  // Finalizes and returns the digest as lowercase hex. The object must not be
  // updated afterwards.
  std::string hex_digest();

  static std::string of(std::string_view s);

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint64_t bit_count_ = 0;
  std::uint8_t buffer_[64];
  std::size_t buffer_len_ = 0;
  bool finalized_ = false;
};

}  // namespace choi
