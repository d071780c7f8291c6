#include "blindcast/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace blindcast {

namespace {

// Upper bound on the count-th prime (Rosser), valid for count >= 6.
std::uint64_t prime_upper_bound(std::uint64_t count) {
  if (count < 6) return 15;
  const double n = static_cast<double>(count);
  return static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 1;
}

std::vector<std::uint64_t> sieve_primes(std::uint64_t count) {
  const std::uint64_t limit = prime_upper_bound(count);
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  primes.reserve(count);
  for (std::uint64_t i = 2; i <= limit && primes.size() < count; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t m = i * i; m <= limit; m += i) composite[m] = true;
  }
  return primes;
}

class PrimeProgram final : public NodeProgram {
 public:
  PrimeProgram(std::uint64_t period, Step wake) : period_(static_cast<Step>(period)), wake_(wake) {}

  bool transmits(Step global_j) const override {
    const Step rel = global_j - wake_;
    return rel > 0 && rel % period_ == 0;
  }

 private:
  Step period_;
  Step wake_;
};

class AlwaysProgram final : public NodeProgram {
 public:
  explicit AlwaysProgram(Step wake) : wake_(wake) {}
  bool transmits(Step global_j) const override { return global_j >= wake_; }

 private:
  Step wake_;
};

}  // namespace

std::uint64_t PrimeTable::nth(std::uint64_t i) {
  if (i < 1) throw ValidationError("prime index must be at least 1");
  if (i > cap_) {
    throw LimitError("prime index " + std::to_string(i) + " exceeds the cap of " + std::to_string(cap_));
  }
  const auto* table = current_.load(std::memory_order_acquire);
  if (table == nullptr || table->size() < i) {
    extend_to(i);
    table = current_.load(std::memory_order_acquire);
  }
  return (*table)[i - 1];
}

void PrimeTable::extend_to(std::uint64_t count) {
  std::lock_guard lock(grow_);
  const auto* table = current_.load(std::memory_order_relaxed);
  if (table != nullptr && table->size() >= count) return;
  // Grow geometrically so repeated requests do not re-sieve every time.
  std::uint64_t want = table == nullptr ? 1024 : table->size() * 2;
  want = std::min(cap_, std::max(want, count));
  generations_.push_back(std::make_unique<const std::vector<std::uint64_t>>(sieve_primes(want)));
  current_.store(generations_.back().get(), std::memory_order_release);
}

PrimeTable& default_prime_table() {
  static PrimeTable table;
  return table;
}

std::uint64_t nth_prime(std::uint64_t i) { return default_prime_table().nth(i); }

bool prime_bit(NodeId v, Step rel_j) {
  if (rel_j <= 0) return false;
  return rel_j % static_cast<Step>(nth_prime(v)) == 0;
}

std::unique_ptr<NodeProgram> PrimeSchedule::bind(NodeId v, Step wake) const {
  return std::make_unique<PrimeProgram>(table_->nth(v), wake);
}

std::unique_ptr<NodeProgram> AlwaysTransmitSchedule::bind(NodeId, Step wake) const {
  return std::make_unique<AlwaysProgram>(wake);
}

}  // namespace blindcast
