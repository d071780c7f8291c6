#pragma once

// Multi-hop directed radio networks.  A dormant node wakes at step j+1 iff
// exactly one of its in-neighbours transmitted in step j.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "blindcast/instance.hpp"
#include "blindcast/schedule.hpp"

namespace blindcast {

struct NetworkLimits {
  std::size_t max_nodes = 100'000;
  std::size_t max_edges = 1'000'000;
};

class Network {
 public:
  // Edges are (u, v) id pairs meaning u's transmissions reach v.  Rejects
  // duplicate or unknown ids, self-loops, and (when `require_strongly_connected`)
  // graphs in which some node cannot reach another.
  static Network build(std::vector<NodeId> ids, const std::vector<std::pair<NodeId, NodeId>>& edges,
                       const NetworkLimits& limits = {}, bool require_strongly_connected = true);

  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<NodeId>& ids() const { return ids_; }
  NodeId max_id() const;

  // Index of `id`; throws ValidationError if absent.
  std::size_t index_of(NodeId id) const;
  bool contains(NodeId id) const { return index_.count(id) != 0; }

  // Out-neighbour indices, ascending by id.
  const std::vector<std::size_t>& out(std::size_t u) const { return out_[u]; }
  bool has_edge(std::size_t u, std::size_t v) const;

  std::vector<std::pair<NodeId, NodeId>> edges() const;

  // Largest shortest-path distance over ordered pairs (BFS from every node).
  std::int64_t eccentricity() const;

 private:
  std::vector<NodeId> ids_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::size_t edge_count_ = 0;
};

// {"ids":[...],"edges":[[u,v],...]}
nlohmann::ordered_json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& j, const NetworkLimits& limits = {});

// Generators.  `ids` supplies node labels in order; sizes must match.
// Layered chain: D layers of width l, each layer a bidirected clique, every
// node of layer i reaching every node of layer i+1, plus one edge from the
// first node of the last layer back to the first node of layer 0.
Network layered_clique_chain(std::int64_t layers, std::int64_t width, const std::vector<NodeId>& ids);
Network directed_cycle(const std::vector<NodeId>& ids);
Network complete_graph(const std::vector<NodeId>& ids);
// Random spanning cycle plus `extra_edges` distinct random edges.
Network random_strong_digraph(const std::vector<NodeId>& ids, std::size_t extra_edges, std::uint64_t rng_seed);

// n distinct ids drawn uniformly from {1..L}.
std::vector<NodeId> random_ids(std::int64_t n, std::uint64_t L, std::uint64_t rng_seed);

struct NetworkResult {
  std::vector<std::optional<Step>> wake_time;  // by network index
  std::optional<Step> completion_step;         // max wake time once all awake
};

// `initial` lists spontaneous wake-ups.  Steps 0..horizon-1 are simulated;
// a reception in the last step still records the resulting wake time.
NetworkResult simulate_network(const Network& net, const std::vector<NodeWake>& initial, const Schedule& schedule,
                               Step horizon);
NetworkResult simulate_network(const Network& net, const std::vector<NodeWake>& initial, const ScheduleSeed& seed,
                               Mode mode, Step horizon);

struct LayerDecomposition {
  std::vector<NodeId> path;                // p_0 .. p_d
  std::vector<std::vector<NodeId>> layers; // layers[i] = L_i, ids ascending
};

// Shortest source->target path by BFS visiting neighbours in ascending id
// order; L_i holds every node whose furthest out-edge into the path ends at
// p_i.  Nodes with no edge into the path are in no layer.
LayerDecomposition layer_decompose(const Network& net, NodeId source, NodeId target);

struct LeadingTrace {
  // Steps in [0, completion) during which layer i was the furthest layer
  // holding an awake node.
  std::vector<Step> durations;
  // Steps in [0, completion) with no awake layered node.
  Step unled_steps = 0;
  Step completion = 0;
};

// Requires a completed result.  sum(durations) + unled_steps == completion.
LeadingTrace leading_layer_trace(const Network& net, const NetworkResult& result, const LayerDecomposition& layers);

struct LayerBudget {
  std::int64_t size = 0;  // l_i
  std::int64_t r = 0;     // 0 for empty layers
  Step budget = 0;        // 0 for empty layers
};

std::vector<LayerBudget> layer_budgets(const LayerDecomposition& layers, const ScheduleParams& params, Mode mode);

}  // namespace blindcast
