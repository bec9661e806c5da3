#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace blockflow {

using Digest = std::array<uint8_t, 32>;

Digest sha256(const uint8_t* data, size_t len);
Digest sha256(const std::vector<uint8_t>& data);
Digest sha256(const std::string& data);

std::string to_hex(const Digest& d);
std::string to_hex(const std::vector<uint8_t>& v);

}  // namespace blockflow
