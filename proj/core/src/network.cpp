#include "blindcast/network.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <memory>
#include <queue>
#include <set>

#include "splitmix.hpp"

namespace blindcast {

namespace {

constexpr Step kNever = std::numeric_limits<Step>::max();

std::vector<std::int64_t> bfs_distances(const std::vector<std::vector<std::size_t>>& adj, std::size_t from) {
  std::vector<std::int64_t> dist(adj.size(), -1);
  std::deque<std::size_t> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace

Network Network::build(std::vector<NodeId> ids, const std::vector<std::pair<NodeId, NodeId>>& edges,
                       const NetworkLimits& limits, bool require_strongly_connected) {
  if (ids.empty()) throw ValidationError("network must have at least one node");
  if (ids.size() > limits.max_nodes) {
    throw LimitError("network has " + std::to_string(ids.size()) + " nodes, above the cap of " +
                     std::to_string(limits.max_nodes));
  }
  if (edges.size() > limits.max_edges) {
    throw LimitError("network has " + std::to_string(edges.size()) + " edges, above the cap of " +
                     std::to_string(limits.max_edges));
  }

  Network net;
  net.ids_ = std::move(ids);
  net.index_.reserve(net.ids_.size() * 2);
  for (std::size_t i = 0; i < net.ids_.size(); ++i) {
    const NodeId id = net.ids_[i];
    if (id == 0 || id > kMaxNodeId) throw ValidationError("invalid node id " + std::to_string(id));
    if (!net.index_.emplace(id, i).second) throw ValidationError("duplicate node id " + std::to_string(id));
  }

  net.out_.assign(net.ids_.size(), {});
  for (const auto& [u, v] : edges) {
    if (u == v) throw ValidationError("self-loop on node " + std::to_string(u));
    net.out_[net.index_of(u)].push_back(net.index_of(v));
  }
  for (auto& adj : net.out_) {
    std::sort(adj.begin(), adj.end(), [&](auto a, auto b) { return net.ids_[a] < net.ids_[b]; });
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    net.edge_count_ += adj.size();
  }

  if (require_strongly_connected) {
    std::vector<std::vector<std::size_t>> in(net.out_.size());
    for (std::size_t u = 0; u < net.out_.size(); ++u) {
      for (auto v : net.out_[u]) in[v].push_back(u);
    }
    const auto forward = bfs_distances(net.out_, 0);
    const auto backward = bfs_distances(in, 0);
    for (std::size_t i = 0; i < net.ids_.size(); ++i) {
      if (forward[i] < 0 || backward[i] < 0) {
        throw ValidationError("network is not strongly connected (node " + std::to_string(net.ids_[i]) +
                              " is cut off from node " + std::to_string(net.ids_[0]) + ")");
      }
    }
  }
  return net;
}

NodeId Network::max_id() const { return *std::max_element(ids_.begin(), ids_.end()); }

std::size_t Network::index_of(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("node id " + std::to_string(id) + " is not in the network");
  return it->second;
}

bool Network::has_edge(std::size_t u, std::size_t v) const {
  const auto& adj = out_[u];
  return std::binary_search(adj.begin(), adj.end(), v, [&](auto a, auto b) { return ids_[a] < ids_[b]; });
}

std::vector<std::pair<NodeId, NodeId>> Network::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (std::size_t u = 0; u < out_.size(); ++u) {
    for (auto v : out_[u]) out.emplace_back(ids_[u], ids_[v]);
  }
  return out;
}

std::int64_t Network::eccentricity() const {
  std::int64_t best = 0;
  for (std::size_t u = 0; u < out_.size(); ++u) {
    for (auto d : bfs_distances(out_, u)) best = std::max(best, d);
  }
  return best;
}

nlohmann::ordered_json network_to_json(const Network& net) {
  nlohmann::ordered_json out;
  out["ids"] = net.ids();
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& [u, v] : net.edges()) edges.push_back({u, v});
  out["edges"] = std::move(edges);
  return out;
}

Network network_from_json(const nlohmann::json& j, const NetworkLimits& limits) {
  if (!j.is_object() || !j.contains("ids") || !j.contains("edges") || !j.at("ids").is_array() ||
      !j.at("edges").is_array()) {
    throw ValidationError("graph JSON must be an object with \"ids\" and \"edges\" arrays");
  }
  std::vector<NodeId> ids;
  for (const auto& id : j.at("ids")) {
    if (!id.is_number_unsigned()) throw ValidationError("graph ids must be positive integers");
    ids.push_back(id.get<NodeId>());
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      throw ValidationError("each edge must be a [u, v] pair of ids");
    }
    edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
  }
  return Network::build(std::move(ids), edges, limits);
}

Network layered_clique_chain(std::int64_t layers, std::int64_t width, const std::vector<NodeId>& ids) {
  if (layers < 1 || width < 1) throw ValidationError("layered chain needs layers >= 1 and width >= 1");
  if (static_cast<std::int64_t>(ids.size()) != layers * width) {
    throw ValidationError("layered chain needs exactly layers * width ids");
  }
  auto at = [&](std::int64_t layer, std::int64_t slot) { return ids[static_cast<std::size_t>(layer * width + slot)]; };
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::int64_t layer = 0; layer < layers; ++layer) {
    for (std::int64_t a = 0; a < width; ++a) {
      for (std::int64_t b = 0; b < width; ++b) {
        if (a != b) edges.emplace_back(at(layer, a), at(layer, b));
      }
      if (layer + 1 < layers) {
        for (std::int64_t b = 0; b < width; ++b) edges.emplace_back(at(layer, a), at(layer + 1, b));
      }
    }
  }
  if (layers > 1) edges.emplace_back(at(layers - 1, 0), at(0, 0));
  NetworkLimits limits;
  limits.max_edges = std::max(limits.max_edges, edges.size());
  return Network::build(ids, edges, limits);
}

Network directed_cycle(const std::vector<NodeId>& ids) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (ids.size() > 1) {
    for (std::size_t i = 0; i < ids.size(); ++i) edges.emplace_back(ids[i], ids[(i + 1) % ids.size()]);
  }
  return Network::build(ids, edges);
}

Network complete_graph(const std::vector<NodeId>& ids) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (auto u : ids) {
    for (auto v : ids) {
      if (u != v) edges.emplace_back(u, v);
    }
  }
  return Network::build(ids, edges);
}

Network random_strong_digraph(const std::vector<NodeId>& ids, std::size_t extra_edges, std::uint64_t rng_seed) {
  detail::SplitMix64 rng(rng_seed);
  auto order = ids;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::set<std::pair<NodeId, NodeId>> edges;
  if (order.size() > 1) {
    for (std::size_t i = 0; i < order.size(); ++i) edges.emplace(order[i], order[(i + 1) % order.size()]);
  }
  const std::size_t n = ids.size();
  const std::size_t possible = n * (n - 1);
  const std::size_t target = std::min(possible, edges.size() + extra_edges);
  while (edges.size() < target) {
    const auto u = ids[rng.below(n)];
    const auto v = ids[rng.below(n)];
    if (u != v) edges.emplace(u, v);
  }
  return Network::build(ids, {edges.begin(), edges.end()});
}

std::vector<NodeId> random_ids(std::int64_t n, std::uint64_t L, std::uint64_t rng_seed) {
  const auto inst = random_instance(n, L, {}, rng_seed);
  std::vector<NodeId> ids;
  ids.reserve(inst.nodes().size());
  for (const auto& node : inst.nodes()) ids.push_back(node.id);
  return ids;
}

NetworkResult simulate_network(const Network& net, const std::vector<NodeWake>& initial, const Schedule& schedule,
                               Step horizon) {
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  if (initial.empty()) throw ValidationError("at least one node must wake spontaneously");
  make_instance(initial);  // id and wake validation

  const std::size_t n = net.size();
  std::vector<Step> wake(n, kNever);
  using Pending = std::pair<Step, std::size_t>;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending;
  for (const auto& node : initial) {
    const auto i = net.index_of(node.id);
    wake[i] = node.wake;
    pending.emplace(node.wake, i);
  }

  std::vector<std::unique_ptr<NodeProgram>> program(n);
  std::vector<std::size_t> awake;
  awake.reserve(n);
  std::vector<std::uint32_t> heard(n, 0);
  std::vector<std::size_t> touched;

  for (Step j = 0; j < horizon && awake.size() < n; ++j) {
    while (!pending.empty() && pending.top().first <= j) {
      const auto [w, i] = pending.top();
      pending.pop();
      if (program[i] || w != wake[i]) continue;  // stale entry
      program[i] = schedule.bind(net.ids()[i], w);
      awake.push_back(i);
    }
    if (awake.size() == n) break;

    touched.clear();
    for (auto u : awake) {
      if (!program[u]->transmits(j)) continue;
      for (auto v : net.out(u)) {
        if (program[v]) continue;
        if (heard[v]++ == 0) touched.push_back(v);
      }
    }
    for (auto v : touched) {
      if (heard[v] == 1 && j + 1 < wake[v]) {
        wake[v] = j + 1;
        pending.emplace(j + 1, v);
      }
      heard[v] = 0;
    }
  }

  NetworkResult result;
  result.wake_time.resize(n);
  bool complete = true;
  Step last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (wake[i] <= horizon) {
      result.wake_time[i] = wake[i];
      last = std::max(last, wake[i]);
    } else {
      complete = false;
    }
  }
  if (complete) result.completion_step = last;
  return result;
}

NetworkResult simulate_network(const Network& net, const std::vector<NodeWake>& initial, const ScheduleSeed& seed,
                               Mode mode, Step horizon) {
  return simulate_network(net, initial, *make_schedule(seed, mode), horizon);
}

LayerDecomposition layer_decompose(const Network& net, NodeId source, NodeId target) {
  const auto s = net.index_of(source);
  const auto t = net.index_of(target);

  std::vector<std::int64_t> parent(net.size(), -1);
  std::vector<bool> seen(net.size(), false);
  std::deque<std::size_t> queue{s};
  seen[s] = true;
  while (!queue.empty() && !seen[t]) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : net.out(u)) {
      if (seen[v]) continue;
      seen[v] = true;
      parent[v] = static_cast<std::int64_t>(u);
      queue.push_back(v);
    }
  }
  if (!seen[t]) {
    throw ValidationError("target " + std::to_string(target) + " is unreachable from " + std::to_string(source));
  }

  std::vector<std::size_t> path_idx{t};
  while (path_idx.back() != s) path_idx.push_back(static_cast<std::size_t>(parent[path_idx.back()]));
  std::reverse(path_idx.begin(), path_idx.end());

  std::vector<std::int64_t> position(net.size(), -1);
  LayerDecomposition out;
  for (std::size_t p = 0; p < path_idx.size(); ++p) {
    position[path_idx[p]] = static_cast<std::int64_t>(p);
    out.path.push_back(net.ids()[path_idx[p]]);
  }
  out.layers.assign(path_idx.size(), {});
  for (std::size_t v = 0; v < net.size(); ++v) {
    std::int64_t furthest = -1;
    for (auto w : net.out(v)) furthest = std::max(furthest, position[w]);
    if (furthest >= 0) out.layers[static_cast<std::size_t>(furthest)].push_back(net.ids()[v]);
  }
  for (auto& layer : out.layers) std::sort(layer.begin(), layer.end());
  return out;
}

LeadingTrace leading_layer_trace(const Network& net, const NetworkResult& result, const LayerDecomposition& layers) {
  if (!result.completion_step) throw ValidationError("leading-layer trace needs a completed run");
  LeadingTrace trace;
  trace.completion = *result.completion_step;
  trace.durations.assign(layers.layers.size(), 0);

  std::vector<std::pair<Step, std::size_t>> events;
  for (std::size_t i = 0; i < layers.layers.size(); ++i) {
    for (auto id : layers.layers[i]) events.emplace_back(*result.wake_time.at(net.index_of(id)), i);
  }
  std::sort(events.begin(), events.end());

  std::int64_t leading = -1;
  Step start = 0;
  auto close = [&](Step end) {
    if (end <= start) return;
    if (leading < 0) {
      trace.unled_steps += end - start;
    } else {
      trace.durations[static_cast<std::size_t>(leading)] += end - start;
    }
  };
  for (const auto& [w, layer] : events) {
    if (w >= trace.completion) break;
    if (static_cast<std::int64_t>(layer) > leading) {
      close(w);
      leading = static_cast<std::int64_t>(layer);
      start = std::max(start, w);
    }
  }
  close(trace.completion);
  return trace;
}

std::vector<LayerBudget> layer_budgets(const LayerDecomposition& layers, const ScheduleParams& params, Mode mode) {
  std::vector<LayerBudget> out;
  out.reserve(layers.layers.size());
  for (const auto& layer : layers.layers) {
    LayerBudget b;
    b.size = static_cast<std::int64_t>(layer.size());
    if (!layer.empty()) {
      b.r = std::max<std::int64_t>(1, floor_log_weight(layer));
      b.budget = delay_budget(params, mode, b.r, b.size).value;
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace blindcast
