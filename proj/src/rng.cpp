#include "blockflow/rng.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "blockflow/hash.hpp"

namespace blockflow {

double Rng::uniform01() {
  uint64_t u = eng_() >> 11;  // top 53 bits
  if (u == 0) u = 1;
  return static_cast<double>(u) * 0x1.0p-53;
}

uint64_t Rng::bounded(uint64_t n) {
  if (n == 0) throw std::invalid_argument("bounded: n must be positive");
  if (n == 1) return 0;
  // Reject the tail that would bias the modulus.
  uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  uint64_t v;
  do {
    v = eng_();
  } while (v > limit);
  return v % n;
}

double Rng::laplace(double lambda) {
  double u = uniform01() - 0.5;
  double mag = std::abs(u);
  if (mag >= 0.5) mag = std::nextafter(0.5, 0.0);
  double val = -lambda * std::log(1.0 - 2.0 * mag);
  return u < 0 ? -val : val;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

size_t Rng::choice(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("choice: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("choice: negative weight");
    total += w;
  }
  if (total <= 0) throw std::invalid_argument("choice: zero total weight");
  double x = uniform01() * total;
  double acc = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (x < acc) return i;
  }
  return weights.size() - 1;
}

std::vector<uint8_t> Rng::bytes(size_t n) {
  std::vector<uint8_t> out(n);
  size_t i = 0;
  while (i < n) {
    uint64_t v = eng_();
    for (int b = 0; b < 8 && i < n; ++b, ++i) {
      out[i] = static_cast<uint8_t>(v >> (8 * b));
    }
  }
  return out;
}

uint64_t split_seed(uint64_t master, const std::string& tag, uint64_t c1,
                    uint64_t c2) {
  std::vector<uint8_t> buf;
  buf.reserve(24 + tag.size());
  auto push_u64 = [&buf](uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
  };
  push_u64(master);
  buf.insert(buf.end(), tag.begin(), tag.end());
  push_u64(c1);
  push_u64(c2);
  Digest d = sha256(buf);
  uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= static_cast<uint64_t>(d[i]) << (8 * i);
  return out;
}

}  // namespace blockflow
