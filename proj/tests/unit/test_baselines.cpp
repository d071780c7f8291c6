#include "doctest.h"

#include <thread>
#include <vector>

#include "blindcast/baselines.hpp"
#include "blindcast/channel.hpp"

using namespace blindcast;

namespace {

// Trial-division oracle.
std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; out.size() < count; ++n) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

}  // namespace

TEST_CASE("nth prime") {
  CHECK(nth_prime(1) == 2);
  CHECK(nth_prime(5) == 11);
  CHECK(nth_prime(100) == 541);
  const auto oracle = first_primes(3000);
  for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(nth_prime(i + 1) == oracle[i]);
  CHECK_THROWS_AS(nth_prime(0), ValidationError);
}

TEST_CASE("prime table cap") {
  PrimeTable small(50);
  CHECK(small.nth(50) == 229);
  CHECK_THROWS_AS(small.nth(51), LimitError);
}

TEST_CASE("prime table under concurrent readers") {
  PrimeTable table;
  const auto oracle = first_primes(20000);
  std::vector<std::thread> threads;
  std::vector<int> wrong(4, 0);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < oracle.size(); i += 4) {
        wrong[static_cast<std::size_t>(t)] += table.nth(i + 1) != oracle[i];
      }
    });
  }
  for (auto& th : threads) th.join();
  for (int w : wrong) CHECK(w == 0);
}

TEST_CASE("prime bit") {
  CHECK(prime_bit(1, 2));
  CHECK_FALSE(prime_bit(1, 1));
  CHECK_FALSE(prime_bit(1, 0));
  CHECK(prime_bit(2, 6));
  CHECK_FALSE(prime_bit(2, 4));
}

TEST_CASE("prime baseline on the channel") {
  const PrimeSchedule prime;
  const auto budget = delay_budget({}, Mode::wakeup, 1, 1);
  const auto pair = simulate_mac(make_instance({{1, 0}, {2, 0}}), prime, budget, 100, false);
  CHECK(pair.hit_step == 2);
  for (NodeId v : {1ull, 5ull, 100ull, 1000ull}) {
    const auto single = simulate_mac(make_instance({{v, 0}}), prime, budget, 10000, false);
    CHECK(single.hit_step == static_cast<Step>(nth_prime(v)));
  }
}

TEST_CASE("always-transmit never succeeds with two or more nodes") {
  const AlwaysTransmitSchedule always;
  const auto budget = delay_budget({}, Mode::wakeup, 1, 1);
  CHECK(simulate_mac(make_instance({{8, 3}}), always, budget, 10, false).hit_step == 3);
  for (std::int64_t k = 2; k <= 6; ++k) {
    const auto x = random_instance(k, 100, {}, static_cast<std::uint64_t>(k));
    CHECK_FALSE(simulate_mac(x, always, budget, 1000, false).hit_step);
  }
}
