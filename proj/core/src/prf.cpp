#include "blindcast/prf.hpp"

#include <cstdio>

namespace blindcast {

namespace {

__extension__ typedef unsigned __int128 uint128;

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
  const uint128 product = static_cast<uint128>(a) * b;
  lo = static_cast<std::uint64_t>(product);
  hi = static_cast<std::uint64_t>(product >> 64);
}

int hex_digit(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

}  // namespace

PhiloxCounter philox4x64_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint64_t lo0, hi0, lo1, hi1;
    mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
    mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

MasterKey MasterKey::from_hex(std::string_view hex) {
  if (hex.size() != 64) {
    throw ValidationError("master key must be 64 hex characters, got " + std::to_string(hex.size()));
  }
  MasterKey key;
  for (std::size_t w = 0; w < 4; ++w) {
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < 16; ++i) {
      const int digit = hex_digit(hex[w * 16 + i]);
      if (digit < 0) throw ValidationError("master key contains a non-hex character");
      word = (word << 4) | static_cast<std::uint64_t>(digit);
    }
    key.words[w] = word;
  }
  return key;
}

std::string MasterKey::hex() const {
  std::string out(64, '0');
  for (std::size_t w = 0; w < 4; ++w) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(words[w]));
    out.replace(w * 16, 16, buf);
  }
  return out;
}

std::string MasterKey::fingerprint() const { return hex().substr(0, 16); }

MasterKey default_master_key() {
  // "blindcast default master key v1" + NUL
  return MasterKey::from_hex("626c696e64636173742064656661756c74206d6173746572206b6579207631" "00");
}

std::uint64_t stream_key(const MasterKey& key, StreamTag tag, NodeId v) {
  const PhiloxCounter ctr{v, static_cast<std::uint64_t>(tag), key.words[2], key.words[3]};
  return philox4x64_10(ctr, {key.words[0], key.words[1]})[0];
}

std::uint64_t prf_uniform(const MasterKey& key, StreamTag tag, NodeId v, std::uint64_t index) {
  return stream_output(stream_key(key, tag, v), index);
}

MasterKey derive_key(const MasterKey& parent, std::uint64_t index) {
  const std::uint64_t stream = stream_key(parent, StreamTag::key_derive, index);
  MasterKey child;
  for (std::uint64_t w = 0; w < 4; ++w) child.words[w] = stream_output(stream, w);
  return child;
}

}  // namespace blindcast
