#include "sealev/hashing.hpp"

#include <sodium.h>

#include <stdexcept>

namespace sealev {

namespace {
const char* kHexDigits = "0123456789abcdef";

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}
}  // namespace

std::string to_hex(const unsigned char* data, std::size_t size) {
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(kHexDigits[data[i] >> 4]);
    out.push_back(kHexDigits[data[i] & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
    out.push_back(static_cast<unsigned char>((hi << 4) | lo));
  }
  return out;
}

std::string sha256_hex(const unsigned char* data, std::size_t size) {
  ensure_sodium();
  unsigned char digest[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(digest, data, size);
  return to_hex(digest, sizeof(digest));
}

std::string sha256_hex(std::string_view data) {
  return sha256_hex(reinterpret_cast<const unsigned char*>(data.data()), data.size());
}

std::string sha256_hex(const Bytes& data) { return sha256_hex(data.data(), data.size()); }

}  // namespace sealev
