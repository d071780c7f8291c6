#pragma once

// Reference protocols: the prime-period schedule (node v transmits every p_v
// steps, p_v the v-th prime) and an always-transmit collision sanity check.

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "blindcast/schedule.hpp"

namespace blindcast {

inline constexpr std::uint64_t kDefaultPrimeCap = 10'000'000;

// Sieve-backed table of the first primes.  Extension is serialized; lookups
// of already-sieved indices read an immutable snapshot without locking.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t cap = kDefaultPrimeCap) : cap_(cap) {}
  PrimeTable(const PrimeTable&) = delete;
  PrimeTable& operator=(const PrimeTable&) = delete;

  // The i-th smallest prime, i >= 1.  Throws LimitError above the cap.
  std::uint64_t nth(std::uint64_t i);
  std::uint64_t cap() const { return cap_; }

 private:
  void extend_to(std::uint64_t count);

  std::uint64_t cap_;
  std::mutex grow_;
  std::vector<std::unique_ptr<const std::vector<std::uint64_t>>> generations_;
  std::atomic<const std::vector<std::uint64_t>*> current_{nullptr};
};

// Process-wide table with the default cap.
PrimeTable& default_prime_table();

std::uint64_t nth_prime(std::uint64_t i);

// 1 iff rel_j > 0 and rel_j is a multiple of p_v.
bool prime_bit(NodeId v, Step rel_j);

class PrimeSchedule final : public Schedule {
 public:
  explicit PrimeSchedule(PrimeTable& table = default_prime_table()) : table_(&table) {}
  std::unique_ptr<NodeProgram> bind(NodeId v, Step wake) const override;

 private:
  PrimeTable* table_;
};

class AlwaysTransmitSchedule final : public Schedule {
 public:
  std::unique_ptr<NodeProgram> bind(NodeId v, Step wake) const override;
};

}  // namespace blindcast
