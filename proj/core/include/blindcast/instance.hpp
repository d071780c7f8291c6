#pragma once

// (r,k)-instances: a set of node ids with their spontaneous wake-up steps.
// r = max(1, floor(sum of lambda(v))), k = number of nodes.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "blindcast/schedule.hpp"
#include "blindcast/types.hpp"

namespace blindcast {

struct NodeWake {
  NodeId id = 0;
  Step wake = 0;

  friend auto operator<=>(const NodeWake&, const NodeWake&) = default;
};

// floor(sum_v log2(v + 1)), computed exactly from the integer product.
std::int64_t floor_log_weight(std::span<const NodeId> ids);

class Instance {
 public:
  Instance() = default;

  const std::vector<NodeWake>& nodes() const { return nodes_; }
  std::int64_t k() const { return static_cast<std::int64_t>(nodes_.size()); }
  std::int64_t r() const { return r_; }
  Step min_wake() const { return min_wake_; }
  Step max_wake() const;

  // Same node set sorted by id; used for equality and dedup.
  std::vector<NodeWake> canonical() const;

  friend bool operator==(const Instance& a, const Instance& b) { return a.canonical() == b.canonical(); }

 private:
  friend Instance make_instance(std::vector<NodeWake> nodes);

  std::vector<NodeWake> nodes_;
  std::int64_t r_ = 1;
  Step min_wake_ = 0;
};

// Validates: nonempty, ids in [1, kMaxNodeId], ids distinct, wakes >= 0.
Instance make_instance(std::vector<NodeWake> nodes);

// Same nodes with every wake moved by `delta` (result must stay >= 0).
Instance shift_wakes(const Instance& inst, Step delta);

struct AwakeSet {
  std::vector<NodeWake> nodes;
  std::int64_t r = 0;  // 0 when empty, else max(1, floor weight)
  std::int64_t k = 0;
};

// Nodes with wake <= j.
AwakeSet awake_set(const Instance& inst, Step j);

// Truncates at the earliest step t (relative to min wake) with
// t > budget(r_t, k_t) and keeps the nodes awake by t.  g is used in wakeup
// mode, h in broadcast mode.
Instance curtail(const Instance& inst, Mode mode, const ScheduleParams& params);

enum class WakePattern { simultaneous, uniform_stagger, adversarial_chain };

std::string_view to_string(WakePattern pattern);
WakePattern parse_wake_pattern(std::string_view text);

struct WakePatternSpec {
  WakePattern kind = WakePattern::simultaneous;
  Step width = 0;  // W for uniform_stagger: wakes uniform in {0..W}
};

// k distinct ids uniform from {1..L}; wakes per pattern.  adversarial_chain
// wakes the i-th sampled node one step after the (i-1)-th, i.e. at step i,
// the first moment the previous node may already have transmitted.
Instance random_instance(std::int64_t k, std::uint64_t L, WakePatternSpec pattern, std::uint64_t rng_seed);

struct ExhaustiveProvenance {
  int r_max = 0;
  Step wake_max = 0;
  Mode mode = Mode::wakeup;
};

struct RandomProvenance {
  std::int64_t k = 0;
  std::uint64_t L = 0;
  WakePatternSpec pattern;
  std::uint64_t rng_seed = 0;
};

struct ListProvenance {
  std::string source;  // e.g. a file name
};

using CorpusProvenance = std::variant<ExhaustiveProvenance, RandomProvenance, ListProvenance>;

struct InstanceCorpus {
  std::vector<Instance> instances;
  CorpusProvenance provenance;
};

inline constexpr std::size_t kDefaultCorpusCap = 5'000'000;

// Every curtailed instance with r <= r_max, relative wakes in {0..wake_max}
// and at least one node waking at its first step.  Wakeup corpora start at
// step 0.  Broadcast corpora repeat each instance at every global offset in
// {0..z(h(r,k)) - 1}.  Ordering is deterministic, duplicates are dropped.
// Throws LimitError when the corpus would exceed `cap` instances.
InstanceCorpus enumerate_instances(int r_max, Step wake_max, Mode mode, const ScheduleParams& params,
                                   std::size_t cap = kDefaultCorpusCap);

// {"nodes":[{"id":3,"wake":0},...]}
nlohmann::ordered_json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
nlohmann::ordered_json corpus_to_json(const InstanceCorpus& corpus);
InstanceCorpus corpus_from_json(const nlohmann::json& j, std::string source = "file");

}  // namespace blindcast
