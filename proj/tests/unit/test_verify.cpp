#include "doctest.h"

#include <bit>
#include <cmath>

#include "blindcast/verify.hpp"

using namespace blindcast;

namespace {

// Sum over all 2^n outcomes.
double brute_exactly_one(const std::vector<double>& p) {
  const std::size_t n = p.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    if (std::popcount(mask) != 1) continue;
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) prob *= (mask >> i & 1) ? p[i] : 1.0 - p[i];
    total += prob;
  }
  return total;
}

class SilentSchedule final : public Schedule {
  struct Mute final : NodeProgram {
    bool transmits(Step) const override { return false; }
  };

 public:
  std::unique_ptr<NodeProgram> bind(NodeId, Step) const override { return std::make_unique<Mute>(); }
};

const ScheduleSeed kSeed{MasterKey::from_hex("0123456789abcdef0123456789abcdef0123456789abcdef0123456789abcdef"), {}};

}  // namespace

TEST_CASE("exactly-one probability") {
  CHECK(exactly_one_probability(std::vector<double>{}) == 0.0);
  CHECK(exactly_one_probability(std::vector<double>{0.5}) == 0.5);
  CHECK(exactly_one_probability(std::vector<double>{0.5, 0.5}) == 0.5);
  CHECK(exactly_one_probability(std::vector<double>{1.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(exactly_one_probability(std::vector<double>{1.5}), ValidationError);

  std::uint64_t state = 17;
  for (int t = 0; t < 300; ++t) {
    std::vector<double> p(1 + t % 10);
    for (auto& x : p) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      x = static_cast<double>(state >> 11) * 0x1p-53;
    }
    CHECK(exactly_one_probability(p) == doctest::Approx(brute_exactly_one(p)).epsilon(1e-12));
  }
}

TEST_CASE("collision-hit bound") {
  CHECK(colhit_bound(std::vector<double>{}) == 0.0);
  CHECK(colhit_bound(std::vector<double>{0.5}) == doctest::Approx(0.25));
  CHECK(colhit_bound(std::vector<double>{0.25, 0.25}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(colhit_bound(std::vector<double>{0.6}), ValidationError);

  for (int n = 1; n <= 8; ++n) {
    for (int a = 0; a <= 10; ++a) {
      std::vector<double> p(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = 0.05 * ((a + 3 * i) % 11);
      CHECK(brute_exactly_one(p) >= colhit_bound(p) - 1e-12);
    }
  }
}

TEST_CASE("exhaustive verification at r_max 1") {
  const auto report = exhaustive_verify(kSeed, Mode::wakeup, 1, 4, 1.0, kDefaultCorpusCap, 1);
  CHECK(report.rows.size() == 2);
  CHECK(report.all_pass());
  CHECK(report.key_fingerprint == kSeed.key.fingerprint());
  CHECK(report.max_ratio <= 1.0);
}

TEST_CASE("a silent schedule fails every instance") {
  const auto corpus = enumerate_instances(3, 2, Mode::wakeup, {});
  const auto report = verify_corpus(corpus, SilentSchedule{}, Mode::wakeup, {}, 1.0, 2);
  CHECK(report.passed == 0);
  CHECK(report.failures.size() == corpus.instances.size());
  for (const auto& row : report.rows) CHECK_FALSE(row.hit_step);
  CHECK(report.max_ratio == 0.0);
}

TEST_CASE("reports are deterministic across job counts") {
  for (auto mode : {Mode::wakeup, Mode::broadcast}) {
    const auto corpus = enumerate_instances(3, 3, mode, {});
    const auto a = report_to_json(verify_corpus(corpus, kSeed, mode, 1.0, 1), corpus);
    const auto b = report_to_json(verify_corpus(corpus, kSeed, mode, 1.0, 4), corpus);
    CHECK(a.dump() == b.dump());
  }
}

TEST_CASE("kappa is monotone") {
  const auto corpus = enumerate_instances(4, 4, Mode::wakeup, {});
  std::size_t last = 0;
  for (double kappa : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0}) {
    const auto report = verify_corpus(corpus, kSeed, Mode::wakeup, kappa, 1);
    CHECK(report.passed >= last);
    last = report.passed;
  }
  CHECK_THROWS_AS(verify_corpus(corpus, kSeed, Mode::wakeup, 0.0, 1), ValidationError);
}

TEST_CASE("seed search with one candidate matches a direct run") {
  const auto corpus = enumerate_instances(3, 2, Mode::wakeup, {});
  const auto search_key = default_master_key();
  const auto found = seed_search(corpus, Mode::wakeup, 1, 0.1, search_key, {}, 1);
  CHECK(found.best_key == derive_key(search_key, 0));
  REQUIRE(found.pass_counts.size() == 1);
  const auto direct = verify_corpus(corpus, ScheduleSeed{found.best_key, {}}, Mode::wakeup, 0.1, 1);
  CHECK(found.pass_counts[0] == direct.passed);
  CHECK(found.all_pass == direct.all_pass());
  CHECK(found.corpus_size == corpus.instances.size());
  CHECK_THROWS_AS(seed_search(corpus, Mode::wakeup, 0, 1.0, search_key), ValidationError);
}

TEST_CASE("seed search keeps the best candidate") {
  const auto corpus = enumerate_instances(3, 2, Mode::wakeup, {});
  const auto found = seed_search(corpus, Mode::wakeup, 5, 0.02, default_master_key(), {}, 1);
  std::size_t best = 0;
  for (std::size_t i = 0; i < found.pass_counts.size(); ++i) {
    if (found.pass_counts[i] > found.pass_counts[best]) best = i;
  }
  CHECK(found.best_index == best);
  CHECK(found.best_key == derive_key(default_master_key(), best));
  if (!found.all_pass) CHECK(found.pass_counts.size() == 5);
}

TEST_CASE("broadcast windows are invariant under phase-period shifts") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto inst = random_instance(1 + static_cast<std::int64_t>(s % 5), 1000, {WakePattern::uniform_stagger, 50}, s);
    const ScheduleSeed seed{derive_key(kSeed.key, s), {}};
    for (Step x : {Step{1}, Step{4}, Step{5}, Step{17}, Step{300}}) {
      for (std::int64_t m = 1; m <= 3; ++m) CHECK(shift_invariance_check(seed, inst, x, m));
    }
  }
  const auto inst = make_instance({{3, 0}});
  CHECK(broadcast_window(kSeed, inst, 3).size() == 3);
  CHECK_THROWS_AS(shift_invariance_check(kSeed, inst, 0, 1), ValidationError);
  CHECK_THROWS_AS(shift_invariance_check(kSeed, inst, 4, 0), ValidationError);
}

TEST_CASE("unit shifts are not invariant in general (reported)") {
  int differ = 0;
  const int total = 60;
  for (std::uint64_t s = 0; s < total; ++s) {
    const auto inst = random_instance(3, 1000, {WakePattern::uniform_stagger, 20}, s);
    differ += !shifted_window_matches(ScheduleSeed{derive_key(kSeed.key, s), {}}, inst, 200, 1);
  }
  MESSAGE("unit shift changed the window in " << differ << " of " << total << " instances");
}

TEST_CASE("a curtailed pass carries over to the full instance") {
  const ScheduleParams params;
  int carried = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto raw = random_instance(4, 40, {WakePattern::uniform_stagger, 400}, s);
    const auto cut = curtail(raw, Mode::wakeup, params);
    const ScheduleSeed seed{derive_key(kSeed.key, s), params};
    const auto cut_report = verify_corpus(InstanceCorpus{{cut}, ListProvenance{"cut"}}, seed, Mode::wakeup, 1.0, 1);
    if (!cut_report.all_pass()) continue;
    const auto raw_report = verify_corpus(InstanceCorpus{{raw}, ListProvenance{"raw"}}, seed, Mode::wakeup, 1.0, 1);
    CHECK(raw_report.all_pass());
    CHECK(raw_report.rows[0].hit_step == cut_report.rows[0].hit_step);
    ++carried;
  }
  CHECK(carried > 100);
}

TEST_CASE("report JSON") {
  const auto corpus = enumerate_instances(1, 0, Mode::wakeup, {});
  const auto j = report_to_json(verify_corpus(corpus, kSeed, Mode::wakeup, 1.0, 1), corpus);
  CHECK(j.contains("provenance"));
  CHECK(j["provenance"]["kind"] == "exhaustive");
  const auto s = search_to_json(seed_search(corpus, Mode::wakeup, 2, 1.0, kSeed.key), Mode::wakeup, 1.0);
  CHECK(s.contains("all_pass"));
}
