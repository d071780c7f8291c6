#include "doctest.h"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "blindcast/baselines.hpp"
#include "blindcast/channel.hpp"
#include "blindcast/network.hpp"

using namespace blindcast;

namespace {

std::vector<NodeId> iota_ids(std::size_t n) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{1});
  return ids;
}

std::int64_t bfs_distance(const Network& net, std::size_t s, std::size_t t) {
  std::vector<std::int64_t> dist(net.size(), -1);
  std::deque<std::size_t> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    for (auto v : net.out(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist[t];
}

}  // namespace

TEST_CASE("graph validation") {
  CHECK_NOTHROW(Network::build({1, 2}, {{1, 2}, {2, 1}}));
  CHECK_THROWS_AS(Network::build({1, 2}, {{1, 2}}), ValidationError);
  CHECK_NOTHROW(Network::build({1, 2}, {{1, 2}}, {}, false));
  CHECK_THROWS_AS(Network::build({1, 1}, {}), ValidationError);
  CHECK_THROWS_AS(Network::build({1, 2}, {{1, 1}, {1, 2}, {2, 1}}), ValidationError);
  CHECK_THROWS_AS(Network::build({1, 2}, {{1, 3}, {2, 1}}), ValidationError);
  CHECK_THROWS_AS(Network::build({}, {}), ValidationError);
  CHECK_THROWS_AS(Network::build({1, 2, 3}, {{1, 2}, {2, 3}, {3, 1}}, NetworkLimits{2, 10}), LimitError);
  CHECK_THROWS_AS(Network::build({1, 2, 3}, {{1, 2}, {2, 3}, {3, 1}}, NetworkLimits{10, 2}), LimitError);
}

TEST_CASE("generators") {
  const auto chain = layered_clique_chain(3, 2, iota_ids(6));
  CHECK(chain.size() == 6);
  // 3 cliques of 2 (2 arcs each) + 2 complete bipartite links (4 each) + back edge.
  CHECK(chain.edge_count() == 3 * 2 + 2 * 4 + 1);
  CHECK(chain.has_edge(chain.index_of(5), chain.index_of(1)));
  CHECK_FALSE(chain.has_edge(chain.index_of(3), chain.index_of(1)));

  const auto cycle = directed_cycle(iota_ids(5));
  CHECK(cycle.edge_count() == 5);
  CHECK(cycle.eccentricity() == 4);

  const auto clique = complete_graph(iota_ids(4));
  CHECK(clique.edge_count() == 12);
  CHECK(clique.eccentricity() == 1);

  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = random_strong_digraph(random_ids(30, 1000, s), 40, s);
    CHECK(g.edge_count() == 70);
  }
  CHECK_THROWS_AS(layered_clique_chain(2, 2, iota_ids(3)), ValidationError);
}

TEST_CASE("random ids") {
  const auto ids = random_ids(50, 60, 3);
  CHECK(std::set<NodeId>(ids.begin(), ids.end()).size() == 50);
  for (auto id : ids) CHECK((id >= 1 && id <= 60));
  CHECK(random_ids(50, 60, 3) == ids);
}

TEST_CASE("graph JSON round trip") {
  const auto g = random_strong_digraph(random_ids(12, 100, 9), 10, 9);
  const auto j = network_to_json(g);
  CHECK(j.begin().key() == "ids");
  const auto back = network_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.ids() == g.ids());
  CHECK(back.edges() == g.edges());
  CHECK_THROWS_AS(network_from_json(nlohmann::json::parse(R"({"ids":[1,2],"edges":[[1,2]]})")), ValidationError);
  CHECK_THROWS_AS(network_from_json(nlohmann::json::parse(R"({"ids":[1,2]})")), ValidationError);
  CHECK_THROWS_AS(network_from_json(nlohmann::json::parse(R"({"ids":[1,-2],"edges":[]})")), ValidationError);
}

TEST_CASE("single node completes at its wake") {
  const auto net = Network::build({7}, {});
  const auto result = simulate_network(net, {{7, 0}}, ScheduleSeed{default_master_key(), {}}, Mode::broadcast, 10);
  CHECK(result.completion_step == 0);
}

TEST_CASE("hand-simulated cycle") {
  const auto net = directed_cycle({1, 2, 3});
  const AlwaysTransmitSchedule always;
  const auto a = simulate_network(net, {{1, 0}}, always, 10);
  CHECK(a.wake_time == std::vector<std::optional<Step>>{0, 1, 2});
  CHECK(a.completion_step == 2);

  // Node 1 (period 2) wakes 2 at step 3; node 2 (period 3) wakes 3 at step 7.
  const PrimeSchedule prime;
  const auto p = simulate_network(net, {{1, 0}}, prime, 20);
  CHECK(p.wake_time == std::vector<std::optional<Step>>{0, 3, 7});
  CHECK(p.completion_step == 7);

  const auto cut = simulate_network(net, {{1, 0}}, prime, 6);
  CHECK(cut.wake_time[2] == std::nullopt);
  CHECK_FALSE(cut.completion_step);
}

TEST_CASE("collisions block reception") {
  // 1 and 2 both reach 3; with both always transmitting, 3 never hears.
  const auto net = Network::build({1, 2, 3}, {{1, 2}, {2, 1}, {1, 3}, {2, 3}, {3, 1}});
  const AlwaysTransmitSchedule always;
  const auto r = simulate_network(net, {{1, 0}, {2, 0}}, always, 50);
  CHECK(r.wake_time[2] == std::nullopt);
  const auto late = simulate_network(net, {{1, 0}, {2, 5}}, always, 50);
  CHECK(late.wake_time[1] == 1);
  CHECK(late.wake_time[2] == 1);
}

TEST_CASE("complete graph with a dormant listener matches the channel") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto x = random_instance(1 + static_cast<std::int64_t>(s % 6), 500, {WakePattern::uniform_stagger, 30}, s);
    const ScheduleSeed seed{derive_key(default_master_key(), s), {}};
    auto ids = std::vector<NodeId>{};
    for (const auto& n : x.nodes()) ids.push_back(n.id);
    ids.push_back(501);
    const auto net = complete_graph(ids);
    for (auto mode : {Mode::wakeup, Mode::broadcast}) {
      const auto mac = simulate_mac(x, seed, mode, 20000);
      const auto multi = simulate_network(net, x.nodes(), seed, mode, 20001);
      REQUIRE(mac.hit_step);
      CHECK(multi.completion_step == *mac.hit_step + 1);
    }
  }
}

TEST_CASE("layer decomposition examples") {
  const auto cycle = directed_cycle({1, 2, 3, 4});
  const auto d = layer_decompose(cycle, 1, 3);
  CHECK(d.path == std::vector<NodeId>{1, 2, 3});
  CHECK(d.layers == std::vector<std::vector<NodeId>>{{4}, {1}, {2}});

  const auto chain = layered_clique_chain(2, 2, {1, 2, 3, 4});
  const auto c = layer_decompose(chain, 1, 4);
  CHECK(c.path == std::vector<NodeId>{1, 4});
  CHECK(c.layers == std::vector<std::vector<NodeId>>{{}, {1, 2, 3}});

  const auto self = layer_decompose(cycle, 2, 2);
  CHECK(self.path == std::vector<NodeId>{2});
  CHECK(self.layers == std::vector<std::vector<NodeId>>{{1}});

  CHECK_THROWS_AS(layer_decompose(cycle, 1, 9), ValidationError);
}

TEST_CASE("layers are disjoint and cover every node with an edge into the path") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto ids = random_ids(25, 400, s);
    const auto net = random_strong_digraph(ids, 20 + s % 30, s);
    const auto d = layer_decompose(net, ids[0], ids[1 + s % 24]);
    CHECK(static_cast<std::int64_t>(d.path.size()) - 1 ==
          bfs_distance(net, net.index_of(ids[0]), net.index_of(ids[1 + s % 24])));
    std::set<NodeId> on_path(d.path.begin(), d.path.end());
    std::multiset<NodeId> layered;
    for (const auto& l : d.layers) layered.insert(l.begin(), l.end());
    for (auto id : ids) {
      const auto u = net.index_of(id);
      const bool reaches = std::any_of(net.out(u).begin(), net.out(u).end(),
                                       [&](auto v) { return on_path.count(net.ids()[v]) != 0; });
      CHECK(layered.count(id) == (reaches ? 1u : 0u));
    }
    for (std::size_t i = 1; i < d.path.size(); ++i) {
      CHECK(net.has_edge(net.index_of(d.path[i - 1]), net.index_of(d.path[i])));
    }
  }
}

TEST_CASE("leading-layer trace on a cycle") {
  const auto net = directed_cycle(iota_ids(6));
  const AlwaysTransmitSchedule always;
  const auto r = simulate_network(net, {{1, 0}}, always, 100);
  const auto d = layer_decompose(net, 1, 6);
  const auto t = leading_layer_trace(net, r, d);
  CHECK(t.completion == 5);
  CHECK(t.durations == std::vector<Step>{0, 1, 1, 1, 1, 1});
  CHECK(t.unled_steps == 0);
  const auto cut = simulate_network(net, {{1, 0}}, always, 3);
  CHECK_THROWS_AS(leading_layer_trace(net, cut, d), ValidationError);
}

TEST_CASE("on a path each hop's delay is one layer's duration") {
  // p_i is the only member of L_{i+1}, so L_{i+1} leads from wake(p_i) to wake(p_{i+1}).
  const auto ids = std::vector<NodeId>{4, 9, 2, 7, 5};
  const auto net = directed_cycle(ids);
  const PrimeSchedule prime;
  const auto r = simulate_network(net, {{4, 0}}, prime, 1000);
  REQUIRE(r.completion_step);
  const auto d = layer_decompose(net, 4, 5);
  REQUIRE(d.path == ids);
  const auto t = leading_layer_trace(net, r, d);
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    CHECK(t.durations[i + 1] == *r.wake_time[i + 1] - *r.wake_time[i]);
  }
  CHECK(t.durations[0] == 0);
}

TEST_CASE("leading-layer durations tile the completion time") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto ids = random_ids(24, 1u << 12, s);
    const auto net = layered_clique_chain(6, 4, ids);
    const ScheduleSeed seed{derive_key(default_master_key(), 900 + s), {}};
    const auto r = simulate_network(net, {{ids[0], 0}}, seed, Mode::broadcast, 1'000'000);
    REQUIRE(r.completion_step);
    const auto d = layer_decompose(net, ids[0], ids.back());
    const auto t = leading_layer_trace(net, r, d);
    CHECK(std::accumulate(t.durations.begin(), t.durations.end(), Step{0}) + t.unled_steps == *r.completion_step);
  }
}

TEST_CASE("per-layer budgets") {
  LayerDecomposition d;
  d.path = {1, 2, 3};
  d.layers = {{}, {1, 2}, {7}};
  const auto b = layer_budgets(d, {}, Mode::broadcast);
  REQUIRE(b.size() == 3);
  CHECK(b[0].size == 0);
  CHECK(b[0].budget == 0);
  CHECK(b[1].size == 2);
  CHECK(b[1].r == floor_log_weight(std::vector<NodeId>{1, 2}));
  CHECK(b[1].budget == delay_budget({}, Mode::broadcast, b[1].r, 2).value);
  CHECK(b[2].r == 3);
  CHECK(b[2].budget == delay_budget({}, Mode::broadcast, 3, 1).value);
}
