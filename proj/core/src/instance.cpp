#include "blindcast/instance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <set>
#include <unordered_set>

#include "splitmix.hpp"

namespace blindcast {

namespace {

__extension__ typedef unsigned __int128 uint128;

using detail::SplitMix64;

void validate_nodes(const std::vector<NodeWake>& nodes) {
  if (nodes.empty()) throw ValidationError("instance must contain at least one node");
  std::unordered_set<NodeId> seen;
  seen.reserve(nodes.size() * 2);
  for (const auto& n : nodes) {
    if (n.id == 0) throw ValidationError("node id 0 is not a valid id");
    if (n.id > kMaxNodeId) throw ValidationError("node id " + std::to_string(n.id) + " exceeds the id limit");
    if (n.wake < 0) throw ValidationError("wake step must be nonnegative");
    if (!seen.insert(n.id).second) throw ValidationError("duplicate node id " + std::to_string(n.id));
  }
}

std::int64_t clamped_weight(const std::vector<NodeWake>& nodes) {
  std::vector<NodeId> ids;
  ids.reserve(nodes.size());
  for (const auto& n : nodes) ids.push_back(n.id);
  return std::max<std::int64_t>(1, floor_log_weight(ids));
}

}  // namespace

std::int64_t floor_log_weight(std::span<const NodeId> ids) {
  // Little-endian multiword product of (id + 1).
  std::vector<std::uint64_t> product{1};
  for (NodeId id : ids) {
    const std::uint64_t factor = id + 1;
    uint128 carry = 0;
    for (auto& limb : product) {
      const uint128 t = static_cast<uint128>(limb) * factor + carry;
      limb = static_cast<std::uint64_t>(t);
      carry = t >> 64;
    }
    if (carry != 0) product.push_back(static_cast<std::uint64_t>(carry));
  }
  const auto top_bits = static_cast<std::int64_t>(std::bit_width(product.back()));
  return static_cast<std::int64_t>(product.size() - 1) * 64 + top_bits - 1;
}

Instance make_instance(std::vector<NodeWake> nodes) {
  validate_nodes(nodes);
  Instance inst;
  inst.r_ = clamped_weight(nodes);
  inst.min_wake_ = std::min_element(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) {
                     return a.wake < b.wake;
                   })->wake;
  inst.nodes_ = std::move(nodes);
  return inst;
}

Step Instance::max_wake() const {
  Step out = 0;
  for (const auto& n : nodes_) out = std::max(out, n.wake);
  return out;
}

std::vector<NodeWake> Instance::canonical() const {
  auto out = nodes_;
  std::sort(out.begin(), out.end());
  return out;
}

Instance shift_wakes(const Instance& inst, Step delta) {
  auto nodes = inst.nodes();
  for (auto& n : nodes) n.wake += delta;
  return make_instance(std::move(nodes));
}

AwakeSet awake_set(const Instance& inst, Step j) {
  AwakeSet out;
  for (const auto& n : inst.nodes()) {
    if (n.wake <= j) out.nodes.push_back(n);
  }
  out.k = static_cast<std::int64_t>(out.nodes.size());
  out.r = out.nodes.empty() ? 0 : clamped_weight(out.nodes);
  return out;
}

Instance curtail(const Instance& inst, Mode mode, const ScheduleParams& params) {
  auto order = inst.nodes();
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.wake < b.wake; });
  const Step base = inst.min_wake();

  std::vector<NodeId> ids;
  std::size_t i = 0;
  while (i < order.size()) {
    // Absorb every node sharing this wake step; K_t is constant until the
    // next distinct wake.
    const Step level = order[i].wake - base;
    while (i < order.size() && order[i].wake - base == level) ids.push_back(order[i++].id);
    const std::int64_t r = std::max<std::int64_t>(1, floor_log_weight(ids));
    const Step budget = delay_budget(params, mode, r, static_cast<std::int64_t>(ids.size())).value;
    const Step crossing = std::max(level, budget + 1);
    if (i == order.size() || crossing < order[i].wake - base) {
      return make_instance(std::vector<NodeWake>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i)));
    }
  }
  return inst;  // unreachable: the last level always crosses
}

std::string_view to_string(WakePattern pattern) {
  switch (pattern) {
    case WakePattern::simultaneous: return "simultaneous";
    case WakePattern::uniform_stagger: return "stagger";
    case WakePattern::adversarial_chain: return "chain";
  }
  return "?";
}

WakePattern parse_wake_pattern(std::string_view text) {
  if (text == "simultaneous") return WakePattern::simultaneous;
  if (text == "stagger" || text == "uniform-stagger") return WakePattern::uniform_stagger;
  if (text == "chain" || text == "adversarial-chain") return WakePattern::adversarial_chain;
  throw ValidationError("unknown wake pattern '" + std::string(text) + "'");
}

Instance random_instance(std::int64_t k, std::uint64_t L, WakePatternSpec pattern, std::uint64_t rng_seed) {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (L < 1 || L > kMaxNodeId) throw ValidationError("L out of range");
  if (static_cast<std::uint64_t>(k) > L) throw ValidationError("k must not exceed L");
  if (pattern.width < 0) throw ValidationError("stagger width must be nonnegative");

  SplitMix64 rng(rng_seed);
  const auto ku = static_cast<std::uint64_t>(k);

  // Floyd's sampling of k distinct values from {1..L}.
  std::vector<NodeId> ids;
  ids.reserve(ku);
  std::unordered_set<NodeId> chosen;
  chosen.reserve(ku * 2);
  for (std::uint64_t j = L - ku + 1; j <= L; ++j) {
    const NodeId t = 1 + rng.below(j);
    const NodeId pick = chosen.count(t) ? j : t;
    chosen.insert(pick);
    ids.push_back(pick);
  }
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1], ids[rng.below(i)]);
  }

  std::vector<NodeWake> nodes;
  nodes.reserve(ku);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Step wake = 0;
    switch (pattern.kind) {
      case WakePattern::simultaneous: break;
      case WakePattern::uniform_stagger:
        wake = static_cast<Step>(rng.below(static_cast<std::uint64_t>(pattern.width) + 1));
        break;
      case WakePattern::adversarial_chain: wake = static_cast<Step>(i); break;
    }
    nodes.push_back({ids[i], wake});
  }
  return make_instance(std::move(nodes));
}

InstanceCorpus enumerate_instances(int r_max, Step wake_max, Mode mode, const ScheduleParams& params,
                                   std::size_t cap) {
  if (r_max < 1) throw ValidationError("r_max must be at least 1");
  if (r_max > 40) throw LimitError("r_max above 40 is not enumerable");
  if (wake_max < 0) throw ValidationError("wake_max must be nonnegative");

  // Id sets with prod(id + 1) < 2^(r_max + 1), i.e. floor weight <= r_max.
  const std::uint64_t bound = std::uint64_t{1} << (r_max + 1);
  std::vector<std::vector<NodeId>> id_sets;
  std::vector<NodeId> current;
  std::function<void(NodeId, std::uint64_t)> extend = [&](NodeId first, std::uint64_t product) {
    for (NodeId id = first; product * (id + 1) < bound; ++id) {
      current.push_back(id);
      id_sets.push_back(current);
      extend(id + 1, product * (id + 1));
      current.pop_back();
    }
  };
  extend(1, 1);
  std::sort(id_sets.begin(), id_sets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });

  // Raw candidates per set: (W+1)^k - W^k wake vectors with a zero entry.
  const auto levels = static_cast<double>(wake_max) + 1.0;
  double raw = 0.0;
  for (const auto& ids : id_sets) {
    const auto kk = static_cast<double>(ids.size());
    raw += std::pow(levels, kk) - std::pow(levels - 1.0, kk);
  }
  if (raw > static_cast<double>(cap)) {
    throw LimitError("corpus for r_max=" + std::to_string(r_max) + ", wake_max=" + std::to_string(wake_max) +
                     " has ~" + std::to_string(static_cast<std::uint64_t>(raw)) +
                     " candidates, above the cap of " + std::to_string(cap));
  }

  InstanceCorpus corpus;
  corpus.provenance = ExhaustiveProvenance{r_max, wake_max, mode};
  std::set<std::vector<NodeWake>> seen;

  for (const auto& ids : id_sets) {
    std::vector<Step> wakes(ids.size(), 0);
    for (;;) {
      if (std::find(wakes.begin(), wakes.end(), Step{0}) != wakes.end()) {
        std::vector<NodeWake> nodes;
        for (std::size_t i = 0; i < ids.size(); ++i) nodes.push_back({ids[i], wakes[i]});
        Instance cut = curtail(make_instance(std::move(nodes)), mode, params);
        if (seen.insert(cut.canonical()).second) {
          if (mode == Mode::wakeup) {
            corpus.instances.push_back(std::move(cut));
          } else {
            const Step budget = delay_budget(params, mode, cut.r(), cut.k()).value;
            const auto offsets = static_cast<Step>(z_phase(static_cast<std::uint64_t>(budget)));
            for (Step o = 0; o < offsets; ++o) corpus.instances.push_back(shift_wakes(cut, o));
          }
        }
      }
      // Odometer over {0..wake_max}^k, last position fastest.
      std::size_t pos = wakes.size();
      while (pos > 0 && wakes[pos - 1] == wake_max) wakes[--pos] = 0;
      if (pos == 0) break;
      ++wakes[pos - 1];
    }
  }
  return corpus;
}

nlohmann::ordered_json instance_to_json(const Instance& inst) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& n : inst.nodes()) {
    nlohmann::ordered_json node;
    node["id"] = n.id;
    node["wake"] = n.wake;
    nodes.push_back(std::move(node));
  }
  nlohmann::ordered_json out;
  out["nodes"] = std::move(nodes);
  return out;
}

Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array()) {
    throw ValidationError("instance JSON must be an object with a \"nodes\" array");
  }
  std::vector<NodeWake> nodes;
  for (const auto& node : j.at("nodes")) {
    if (!node.is_object() || !node.contains("id") || !node.contains("wake")) {
      throw ValidationError("each node needs \"id\" and \"wake\"");
    }
    const auto& id = node.at("id");
    const auto& wake = node.at("wake");
    if (!id.is_number_integer() || !wake.is_number_integer()) {
      throw ValidationError("node \"id\" and \"wake\" must be integers");
    }
    if (id.is_number_unsigned() ? false : id.get<std::int64_t>() < 1) {
      throw ValidationError("node id must be at least 1");
    }
    nodes.push_back({id.get<NodeId>(), wake.get<Step>()});
  }
  return make_instance(std::move(nodes));
}

nlohmann::ordered_json corpus_to_json(const InstanceCorpus& corpus) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& inst : corpus.instances) out.push_back(instance_to_json(inst));
  return out;
}

InstanceCorpus corpus_from_json(const nlohmann::json& j, std::string source) {
  if (!j.is_array()) throw ValidationError("corpus JSON must be an array of instances");
  InstanceCorpus corpus;
  corpus.provenance = ListProvenance{std::move(source)};
  for (const auto& item : j) corpus.instances.push_back(instance_from_json(item));
  return corpus;
}

}  // namespace blindcast
