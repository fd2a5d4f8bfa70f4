#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sealev {

using Bytes = std::vector<unsigned char>;

// SHA-256, hex encoded. Used for bundle fingerprints, artifact commitments,
// and the release hash index.
std::string sha256_hex(const unsigned char* data, std::size_t size);
std::string sha256_hex(std::string_view data);
std::string sha256_hex(const Bytes& data);

std::string to_hex(const unsigned char* data, std::size_t size);
Bytes from_hex(std::string_view hex);

}  // namespace sealev
