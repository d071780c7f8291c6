#pragma once

// Keyed counter-based pseudorandom function.
//
// A 256-bit master key selects one member of the family.  Every output is
// addressed by (stream tag, node id, index) and can be evaluated without
// touching any other index.  Two levels:
//
//   stream key  = Philox4x64-10(counter = {v, tag, key[2], key[3]},
//                               key = {key[0], key[1]})[0]
//   output(j)   = splitmix64_finalize(stream key + (j + 1) * golden gamma)
//
// Philox is a bijection of the counter for a fixed key, so distinct
// (tag, v) pairs get distinct stream keys; the second level is the stateless
// form of a SplitMix64 stream, cheap enough for the simulator hot loop.

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "blindcast/types.hpp"

namespace blindcast {

using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

PhiloxCounter philox4x64_10(PhiloxCounter counter, PhiloxKey key);

struct MasterKey {
  std::array<std::uint64_t, 4> words{};

  // 64 hex characters, word 0 first, each word big-endian.
  static MasterKey from_hex(std::string_view hex);
  std::string hex() const;
  // First 16 hex characters; enough to tell keys apart in CSV output.
  std::string fingerprint() const;

  friend auto operator<=>(const MasterKey&, const MasterKey&) = default;
};

// Default key used when no --seed-hex is supplied: ASCII "blindcast default
// master key v1" zero-padded to 32 bytes.
MasterKey default_master_key();

enum class StreamTag : std::uint64_t {
  sync = 0,         // synchronizer bits S(v)_j
  ts_select = 1,    // base selection bits s_{v,x} of the transmission schedule
  ts_phase = 2,     // phase values p_{v,x}
  key_derive = 3,   // child keys for searches and sweeps
  instance = 4,     // per-trial instance generator seeds
};

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_output(std::uint64_t stream, std::uint64_t index) {
  return splitmix64_finalize(stream + (index + 1) * kGoldenGamma);
}

std::uint64_t stream_key(const MasterKey& key, StreamTag tag, NodeId v);

// Stateless keyed PRF; output is uniform on [0, 2^64).
std::uint64_t prf_uniform(const MasterKey& key, StreamTag tag, NodeId v, std::uint64_t index);

// Top 53 bits as a double in [0, 1).
constexpr double to_unit(std::uint64_t u) {
  return static_cast<double>(u >> 11) * 0x1.0p-53;
}

// Child key number `index` of `parent`.
MasterKey derive_key(const MasterKey& parent, std::uint64_t index);

}  // namespace blindcast
