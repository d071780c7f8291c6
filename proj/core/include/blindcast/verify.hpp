#pragma once

// Verification harness: exact collision-hit oracle, exhaustive checking of
// small instance corpora, seed search, and the phase-shift invariance check.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "blindcast/channel.hpp"
#include "blindcast/instance.hpp"
#include "blindcast/schedule.hpp"

namespace blindcast {

// Pr[exactly one of independent Bernoulli(p_i) is 1]
//   = sum_i p_i * prod_{j != i} (1 - p_j).   Each p_i in [0, 1].
double exactly_one_probability(std::span<const double> probs);

// f * 4^-f with f = sum p_i.  Each p_i in [0, 1/2].
double colhit_bound(std::span<const double> probs);

struct VerifyRow {
  std::size_t index = 0;
  std::optional<Step> hit_step;
  Step budget = 0;
  bool pass = false;
};

struct VerifyReport {
  CorpusProvenance provenance;
  Mode mode = Mode::wakeup;
  double kappa = 1.0;
  ScheduleParams params;
  std::string key_fingerprint;
  std::vector<VerifyRow> rows;
  std::size_t passed = 0;
  double max_ratio = 0.0;              // max (hit - min wake) / budget over hits
  std::vector<std::size_t> failures;   // corpus indices

  bool all_pass() const { return passed == rows.size(); }
};

// Pass iff the instance is hit at some step <= min wake + kappa * budget.
VerifyReport verify_corpus(const InstanceCorpus& corpus, const Schedule& schedule, Mode mode,
                           const ScheduleParams& params, double kappa, unsigned jobs = 0);
VerifyReport verify_corpus(const InstanceCorpus& corpus, const ScheduleSeed& seed, Mode mode, double kappa,
                           unsigned jobs = 0);

VerifyReport exhaustive_verify(const ScheduleSeed& seed, Mode mode, int r_max, Step wake_max, double kappa,
                               std::size_t corpus_cap = kDefaultCorpusCap, unsigned jobs = 0);

struct SeedSearchResult {
  MasterKey best_key;
  std::size_t best_index = 0;
  bool all_pass = false;
  std::vector<std::size_t> pass_counts;  // one per evaluated candidate
  std::size_t corpus_size = 0;
};

// Candidate i is derive_key(search_key, i).  Stops at the first candidate
// hitting every instance; otherwise returns the one with most passes.
SeedSearchResult seed_search(const InstanceCorpus& corpus, Mode mode, std::size_t candidate_count, double kappa,
                             const MasterKey& search_key, const ScheduleParams& params = {}, unsigned jobs = 0);

// Joint transmission-schedule bits of every node over global steps
// [min wake, min wake + x), row-major by step then node order.
std::vector<bool> broadcast_window(const ScheduleSeed& seed, const Instance& inst, Step x);

// Compares broadcast_window before and after moving every wake (and the
// clock) by `delta`.
bool shifted_window_matches(const ScheduleSeed& seed, const Instance& inst, Step x, Step delta);

// shifted_window_matches with delta = multiplier * z(x).
bool shift_invariance_check(const ScheduleSeed& seed, const Instance& inst, Step x, std::int64_t multiplier);

nlohmann::ordered_json provenance_to_json(const CorpusProvenance& provenance);
nlohmann::ordered_json report_to_json(const VerifyReport& report, const InstanceCorpus& corpus);
nlohmann::ordered_json search_to_json(const SeedSearchResult& result, Mode mode, double kappa);

}  // namespace blindcast
