#include "blockflow/hash.hpp"

#include <openssl/sha.h>

namespace blockflow {

Digest sha256(const uint8_t* data, size_t len) {
  Digest out;
  SHA256(data, len, out.data());
  return out;
}

Digest sha256(const std::vector<uint8_t>& data) {
  return sha256(data.data(), data.size());
}

Digest sha256(const std::string& data) {
  return sha256(reinterpret_cast<const uint8_t*>(data.data()), data.size());
}

static const char* kHex = "0123456789abcdef";

std::string to_hex(const Digest& d) {
  std::string s;
  s.reserve(64);
  for (uint8_t b : d) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xf]);
  }
  return s;
}

std::string to_hex(const std::vector<uint8_t>& v) {
  std::string s;
  s.reserve(v.size() * 2);
  for (uint8_t b : v) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xf]);
  }
  return s;
}

}  // namespace blockflow
