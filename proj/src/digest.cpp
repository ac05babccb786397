// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "digest.hpp"

#include <cstring>

namespace pasa {

namespace {

uint32_t crc_table_entry(uint32_t i) {
  uint32_t c = i;
  for (int k = 0; k < 8; ++k) {
    c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
  }
  return c;
}

const uint32_t* crc_table() {
  static uint32_t table[256];
  static bool initialized = [] {
    for (uint32_t i = 0; i < 256; ++i) table[i] = crc_table_entry(i);
    return true;
  }();
  (void)initialized;
  return table;
}

}  // namespace

uint32_t crc32(std::string_view data) {
  const uint32_t* table = crc_table();
  uint32_t c = 0xffffffffu;
  for (unsigned char byte : data) {
    c = table[(c ^ byte) & 0xffu] ^ (c >> 8);
  }
  return c ^ 0xffffffffu;
}

namespace {

// SHA-256 per FIPS 180-4.
struct Sha256State {
  uint32_t h[8] = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                   0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
  uint8_t buffer[64] = {};
  size_t buffered = 0;
  uint64_t total_bits = 0;
};

constexpr uint32_t kSha256K[64] = {
    0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu, 0x59f111f1u,
    0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u, 0x243185beu, 0x550c7dc3u,
    0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u, 0xc19bf174u, 0xe49b69c1u, 0xefbe4786u,
    0x0fc19dc6u, 0x240ca1ccu, 0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau,
    0x983e5152u, 0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
    0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu, 0x53380d13u,
    0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u, 0xa2bfe8a1u, 0xa81a664bu,
    0xc24b8b70u, 0xc76c51a3u, 0xd192e819u, 0xd6990624u, 0xf40e3585u, 0x106aa070u,
    0x19a4c116u, 0x1e376c08u, 0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au,
    0x5b9cca4fu, 0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
    0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u};

inline uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void sha256_block(Sha256State& s, const uint8_t* block) {
  uint32_t w[64];
  for (int i = 0; i < 16; ++i) {
    w[i] = (uint32_t(block[i * 4]) << 24) | (uint32_t(block[i * 4 + 1]) << 16) |
           (uint32_t(block[i * 4 + 2]) << 8) | uint32_t(block[i * 4 + 3]);
  }
  for (int i = 16; i < 64; ++i) {
    uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
    uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
    w[i] = w[i - 16] + s0 + w[i - 7] + s1;
  }
  uint32_t a = s.h[0], b = s.h[1], c = s.h[2], d = s.h[3];
  uint32_t e = s.h[4], f = s.h[5], g = s.h[6], h = s.h[7];
  for (int i = 0; i < 64; ++i) {
    uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
    uint32_t ch = (e & f) ^ (~e & g);
    uint32_t temp1 = h + s1 + ch + kSha256K[i] + w[i];
    uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
    uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
    uint32_t temp2 = s0 + maj;
    h = g;
    g = f;
    f = e;
    e = d + temp1;
    d = c;
    c = b;
    b = a;
    a = temp1 + temp2;
  }
  s.h[0] += a;
  s.h[1] += b;
  s.h[2] += c;
  s.h[3] += d;
  s.h[4] += e;
  s.h[5] += f;
  s.h[6] += g;
  s.h[7] += h;
}

void sha256_update(Sha256State& s, const uint8_t* data, size_t len) {
  s.total_bits += uint64_t(len) * 8;
  while (len > 0) {
    size_t take = 64 - s.buffered;
    if (take > len) take = len;
    std::memcpy(s.buffer + s.buffered, data, take);
    s.buffered += take;
    data += take;
    len -= take;
    if (s.buffered == 64) {
      sha256_block(s, s.buffer);
      s.buffered = 0;
    }
  }
}

std::array<uint8_t, 32> sha256_final(Sha256State& s) {
  uint64_t bits = s.total_bits;
  uint8_t pad = 0x80;
  sha256_update(s, &pad, 1);
  s.total_bits -= 8;
  uint8_t zero = 0;
  while (s.buffered != 56) {
    sha256_update(s, &zero, 1);
    s.total_bits -= 8;
  }
  uint8_t len_be[8];
  for (int i = 0; i < 8; ++i) len_be[i] = uint8_t(bits >> (56 - i * 8));
  sha256_update(s, len_be, 8);
  std::array<uint8_t, 32> out;
  for (int i = 0; i < 8; ++i) {
    out[i * 4] = uint8_t(s.h[i] >> 24);
    out[i * 4 + 1] = uint8_t(s.h[i] >> 16);
    out[i * 4 + 2] = uint8_t(s.h[i] >> 8);
    out[i * 4 + 3] = uint8_t(s.h[i]);
  }
  return out;
}

}  // namespace

std::array<uint8_t, 32> sha256(std::string_view data) {
  Sha256State s;
  sha256_update(s, reinterpret_cast<const uint8_t*>(data.data()), data.size());
  return sha256_final(s);
}

std::array<uint8_t, 32> hmac_sha256(std::string_view key, std::string_view data) {
  uint8_t k[64] = {};
  if (key.size() > 64) {
    auto kh = sha256(key);
    std::memcpy(k, kh.data(), kh.size());
  } else {
    std::memcpy(k, key.data(), key.size());
  }
  std::string inner;
  inner.resize(64);
  for (int i = 0; i < 64; ++i) inner[i] = char(k[i] ^ 0x36);
  inner.append(data);
  auto inner_hash = sha256(inner);

  std::string outer;
  outer.resize(64);
  for (int i = 0; i < 64; ++i) outer[i] = char(k[i] ^ 0x5c);
  outer.append(reinterpret_cast<const char*>(inner_hash.data()), inner_hash.size());
  return sha256(outer);
}

std::string to_hex(const uint8_t* data, size_t len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (size_t i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  auto h = sha256(data);
  return to_hex(h.data(), h.size());
}

std::string hmac_sha256_hex(std::string_view key, std::string_view data) {
  auto h = hmac_sha256(key, data);
  return to_hex(h.data(), h.size());
}

}  // namespace pasa
