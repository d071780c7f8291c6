#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blindcast/baselines.hpp"
#include "blindcast/channel.hpp"
#include "blindcast/network.hpp"
#include "blindcast/sweep.hpp"
#include "blindcast/verify.hpp"

namespace blindcast {
namespace {

struct Shared {
  int c = ScheduleParams{}.c;
  int d = ScheduleParams{}.d;
  double kappa = 1.0;
  std::size_t corpus_cap = kDefaultCorpusCap;
  std::uint64_t prime_cap = kDefaultPrimeCap;
  std::size_t max_nodes = NetworkLimits{}.max_nodes;
  std::size_t max_edges = NetworkLimits{}.max_edges;
  unsigned jobs = 0;
  std::string seed_hex;

  ScheduleParams params() const { return {c, d}; }
  NetworkLimits limits() const { return {max_nodes, max_edges}; }
  MasterKey key() const { return seed_hex.empty() ? default_master_key() : MasterKey::from_hex(seed_hex); }
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw ValidationError("cannot write " + path);
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void emit_json(const nlohmann::ordered_json& j, const std::string& path, std::ostream& out) {
  Output o(path, out);
  *o << j.dump(2) << '\n';
}

WakePatternSpec pattern_spec(const std::string& name, Step width) {
  WakePatternSpec spec{parse_wake_pattern(name), 0};
  if (spec.kind == WakePattern::uniform_stagger) spec.width = width;
  return spec;
}

InstanceCorpus load_or_enumerate(const std::string& corpus_path, int r_max, Step wake_max, Mode mode,
                                 const Shared& shared) {
  if (!corpus_path.empty()) return corpus_from_json(read_json(corpus_path), corpus_path);
  if (r_max < 1) throw ValidationError("give --corpus or --r-max >= 1");
  return enumerate_instances(r_max, wake_max, mode, shared.params(), shared.corpus_cap);
}

// gen-instance -------------------------------------------------------------

struct GenInstance {
  std::int64_t k = 1;
  std::uint64_t L = 1;
  std::string pattern = "simultaneous";
  Step width = 0;
  std::uint64_t rng_seed = 0;
  bool enumerate = false;
  int r_max = 0;
  Step wake_max = 0;
  std::string mode = "wakeup";
  std::string out;
};

void run_gen_instance(const GenInstance& o, const Shared& shared, std::ostream& out) {
  if (o.enumerate) {
    emit_json(corpus_to_json(enumerate_instances(o.r_max, o.wake_max, parse_mode(o.mode), shared.params(),
                                                 shared.corpus_cap)),
              o.out, out);
    return;
  }
  emit_json(instance_to_json(random_instance(o.k, o.L, pattern_spec(o.pattern, o.width), o.rng_seed)), o.out, out);
}

// gen-graph ----------------------------------------------------------------

struct GenGraph {
  std::string kind = "layered";
  std::int64_t layers = 1;
  std::int64_t width = 1;
  std::int64_t n = 1;
  std::uint64_t L = 0;
  std::size_t extra_edges = 0;
  std::uint64_t rng_seed = 0;
  std::string out;
};

void run_gen_graph(const GenGraph& o, const Shared& shared, std::ostream& out) {
  const std::int64_t n = o.kind == "layered" ? o.layers * o.width : o.n;
  if (n < 1) throw ValidationError("graph needs at least one node");
  if (static_cast<std::size_t>(n) > shared.max_nodes) {
    throw LimitError("graph of " + std::to_string(n) + " nodes exceeds the cap of " + std::to_string(shared.max_nodes));
  }
  std::vector<NodeId> ids;
  if (o.L == 0) {
    for (std::int64_t i = 1; i <= n; ++i) ids.push_back(static_cast<NodeId>(i));
  } else {
    ids = random_ids(n, o.L, o.rng_seed);
  }

  std::optional<Network> net;
  if (o.kind == "layered") {
    net = layered_clique_chain(o.layers, o.width, ids);
  } else if (o.kind == "cycle") {
    net = directed_cycle(ids);
  } else if (o.kind == "clique") {
    net = complete_graph(ids);
  } else if (o.kind == "random") {
    net = random_strong_digraph(ids, o.extra_edges, o.rng_seed);
  } else {
    throw ValidationError("unknown graph kind '" + o.kind + "' (expected layered, cycle, clique or random)");
  }
  if (net->edge_count() > shared.max_edges) {
    throw LimitError("graph of " + std::to_string(net->edge_count()) + " edges exceeds the cap of " +
                     std::to_string(shared.max_edges));
  }
  emit_json(network_to_json(*net), o.out, out);
}

// simulate -----------------------------------------------------------------

struct Simulate {
  std::string mode = "wakeup";
  std::string instance;
  std::string graph;
  Step horizon = 0;
  std::string transcript;
};

void run_simulate(const Simulate& o, const Shared& shared, std::ostream& out) {
  const auto protocol = parse_protocol(o.mode);
  const Mode clock = clock_mode(protocol);
  const ScheduleSeed seed{shared.key(), shared.params()};
  PrimeTable primes(shared.prime_cap);
  const auto schedule = make_protocol_schedule(protocol, seed, &primes);
  const Instance inst = instance_from_json(read_json(o.instance));
  const auto budget = delay_budget(shared.params(), clock, inst.r(), inst.k());

  nlohmann::ordered_json line;
  line["mode"] = std::string(protocol_name(protocol));
  line["key"] = seed.key.fingerprint();
  line["k"] = inst.k();
  line["r"] = inst.r();
  line["budget"] = budget.value;

  if (o.graph.empty()) {
    const Step horizon = o.horizon > 0 ? o.horizon : inst.min_wake() + default_horizon(budget);
    const auto hit = simulate_mac(inst, *schedule, budget, horizon, !o.transcript.empty());
    if (!o.transcript.empty()) {
      Output t(o.transcript, out);
      write_transcript(*t, *hit.transcript);
    }
    const auto allowed = static_cast<Step>(std::floor(shared.kappa * static_cast<double>(budget.value)));
    line["horizon"] = horizon;
    line["hit_step"] = hit.hit_step ? *hit.hit_step : Step{-1};
    line["within_budget"] = hit.hit_step && *hit.hit_step - inst.min_wake() <= allowed;
  } else {
    if (!o.transcript.empty()) throw ValidationError("--transcript applies to single-hop runs only");
    const auto net = network_from_json(read_json(o.graph), shared.limits());
    // Each hop gets twice the whole-network budget.
    const auto whole = delay_budget(shared.params(), clock, floor_log_weight(net.ids()),
                                    static_cast<std::int64_t>(net.size()));
    const Step horizon =
        o.horizon > 0 ? o.horizon : inst.min_wake() + (net.eccentricity() + 1) * default_horizon(whole);
    const auto result = simulate_network(net, inst.nodes(), *schedule, horizon);
    std::size_t awake = 0;
    for (const auto& w : result.wake_time) awake += w.has_value();
    line["n"] = net.size();
    line["horizon"] = horizon;
    line["awake"] = awake;
    line["completion_step"] = result.completion_step ? *result.completion_step : Step{-1};
  }
  out << line.dump() << '\n';
}

// sweep --------------------------------------------------------------------

struct Sweep {
  std::string mode = "wakeup";
  std::vector<std::int64_t> ks;
  std::vector<std::uint64_t> Ls;
  std::vector<std::string> patterns{"simultaneous"};
  Step stagger_width = 0;
  std::int64_t trials = 1;
  double horizon_factor = 2.0;
  std::string out;
};

void run_sweep_cmd(const Sweep& o, const Shared& shared, std::ostream& out) {
  PrimeTable primes(shared.prime_cap);
  SweepConfig cfg;
  cfg.protocol = parse_protocol(o.mode);
  cfg.ks = o.ks;
  cfg.Ls = o.Ls;
  cfg.patterns.clear();
  for (const auto& p : o.patterns) cfg.patterns.push_back(pattern_spec(p, o.stagger_width));
  cfg.trials = o.trials;
  cfg.master = shared.key();
  cfg.params = shared.params();
  cfg.kappa = shared.kappa;
  cfg.horizon_factor = o.horizon_factor;
  cfg.jobs = shared.jobs;
  cfg.primes = &primes;
  const auto records = run_sweep(cfg);
  Output o_stream(o.out, out);
  write_sweep_csv(*o_stream, records);
}

// verify / search-seed -----------------------------------------------------

struct Verify {
  std::string mode = "wakeup";
  std::string corpus;
  int r_max = 0;
  Step wake_max = 0;
  std::string out;
};

void run_verify(const Verify& o, const Shared& shared, std::ostream& out, std::ostream& err) {
  const Mode mode = parse_mode(o.mode);
  const auto corpus = load_or_enumerate(o.corpus, o.r_max, o.wake_max, mode, shared);
  const auto report = verify_corpus(corpus, ScheduleSeed{shared.key(), shared.params()}, mode, shared.kappa, shared.jobs);
  emit_json(report_to_json(report, corpus), o.out, out);
  err << report.passed << " of " << report.rows.size() << " instances hit within budget\n";
}

struct SearchSeed {
  std::string mode = "wakeup";
  std::string corpus;
  int r_max = 0;
  Step wake_max = 0;
  std::size_t candidates = 64;
  std::string search_key;
  std::string out;
};

void run_search(const SearchSeed& o, const Shared& shared, std::ostream& out) {
  const Mode mode = parse_mode(o.mode);
  const auto corpus = load_or_enumerate(o.corpus, o.r_max, o.wake_max, mode, shared);
  const auto key = o.search_key.empty() ? default_master_key() : MasterKey::from_hex(o.search_key);
  const auto result = seed_search(corpus, mode, o.candidates, shared.kappa, key, shared.params(), shared.jobs);
  emit_json(search_to_json(result, mode, shared.kappa), o.out, out);
}

// layers -------------------------------------------------------------------

struct Layers {
  std::string graph;
  NodeId source = 0;
  NodeId target = 0;
  std::string mode = "broadcast";
  std::string instance;
  Step horizon = 0;
  std::string out;
};

void run_layers(const Layers& o, const Shared& shared, std::ostream& out) {
  const auto net = network_from_json(read_json(o.graph), shared.limits());
  const Mode mode = parse_mode(o.mode);
  const ScheduleSeed seed{shared.key(), shared.params()};
  const auto decomposition = layer_decompose(net, o.source, o.target);
  const auto budgets = layer_budgets(decomposition, shared.params(), mode);

  std::vector<NodeWake> initial{{o.source, 0}};
  if (!o.instance.empty()) initial = instance_from_json(read_json(o.instance)).nodes();
  Step horizon = o.horizon;
  if (horizon <= 0) {
    horizon = 1;
    for (const auto& b : budgets) horizon += 2 * std::max<Step>(b.budget, 1);
    for (const auto& n : initial) horizon = std::max(horizon, n.wake + 1);
  }
  const auto result = simulate_network(net, initial, seed, mode, horizon);

  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(mode));
  j["key"] = seed.key.fingerprint();
  j["kappa"] = shared.kappa;
  j["path"] = decomposition.path;
  j["horizon"] = horizon;
  j["completion_step"] = result.completion_step ? *result.completion_step : Step{-1};

  std::optional<LeadingTrace> trace;
  if (result.completion_step) trace = leading_layer_trace(net, result, decomposition);
  Step budget_sum = 0;
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < decomposition.layers.size(); ++i) {
    nlohmann::ordered_json l;
    l["index"] = i;
    l["ids"] = decomposition.layers[i];
    l["size"] = budgets[i].size;
    l["r"] = budgets[i].r;
    l["budget"] = budgets[i].budget;
    budget_sum += budgets[i].budget;
    if (trace) {
      l["duration"] = trace->durations[i];
      l["within_budget"] =
          static_cast<double>(trace->durations[i]) <= shared.kappa * static_cast<double>(budgets[i].budget);
    }
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  j["budget_sum"] = budget_sum;
  if (trace) j["unled_steps"] = trace->unled_steps;
  emit_json(j, o.out, out);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized wake-up and broadcast schedules for radio networks without global clocks", "blindcast"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file setting c, d, kappa and caps; flags take precedence");

  Shared shared;
  app.add_option("--c", shared.c, "synchronizer constant")->check(CLI::PositiveNumber);
  app.add_option("--d", shared.d, "transmission-schedule constant")->check(CLI::PositiveNumber);
  app.add_option("--kappa", shared.kappa, "budget multiplier for pass/fail")->check(CLI::PositiveNumber);
  app.add_option("--corpus-cap,--corpus_cap", shared.corpus_cap, "largest enumerated corpus");
  app.add_option("--prime-cap,--prime_cap", shared.prime_cap, "largest prime index for the prime baseline");
  app.add_option("--max-nodes,--max_nodes", shared.max_nodes, "graph node cap");
  app.add_option("--max-edges,--max_edges", shared.max_edges, "graph edge cap");
  app.add_option("--jobs", shared.jobs, "worker threads, 0 for all cores")->envname("BLINDCAST_JOBS");
  app.add_option("--seed-hex,--seed_hex", shared.seed_hex, "master key, 64 hex characters");
  app.fallthrough();

  GenInstance gi;
  auto* gen_instance = app.add_subcommand("gen-instance", "random instance, or every small instance with --enumerate");
  gen_instance->add_option("--k", gi.k, "node count");
  gen_instance->add_option("--L", gi.L, "id range {1..L}");
  gen_instance->add_option("--pattern", gi.pattern, "simultaneous, stagger or chain");
  gen_instance->add_option("--width", gi.width, "stagger width W");
  gen_instance->add_option("--rng-seed", gi.rng_seed, "instance sampler seed");
  gen_instance->add_flag("--enumerate", gi.enumerate, "write the exhaustive corpus instead");
  gen_instance->add_option("--r-max", gi.r_max, "corpus weight bound");
  gen_instance->add_option("--wake-max", gi.wake_max, "corpus relative wake bound");
  gen_instance->add_option("--mode", gi.mode, "wakeup or broadcast (corpus only)");
  gen_instance->add_option("--out", gi.out, "output file, stdout by default");

  GenGraph gg;
  auto* gen_graph = app.add_subcommand("gen-graph", "benchmark graph");
  gen_graph->add_option("--kind", gg.kind, "layered, cycle, clique or random");
  gen_graph->add_option("--layers", gg.layers, "layer count D (layered)");
  gen_graph->add_option("--width", gg.width, "layer width (layered)");
  gen_graph->add_option("--n", gg.n, "node count (cycle, clique, random)");
  gen_graph->add_option("--L", gg.L, "draw ids from {1..L}; ids are 1..n when omitted");
  gen_graph->add_option("--extra-edges", gg.extra_edges, "extra random edges (random)");
  gen_graph->add_option("--rng-seed", gg.rng_seed, "generator seed");
  gen_graph->add_option("--out", gg.out, "output file, stdout by default");

  Simulate sim;
  auto* simulate = app.add_subcommand("simulate", "one run on the channel, or on a graph with --graph");
  simulate->add_option("--mode", sim.mode, "wakeup, broadcast, prime or always");
  simulate->add_option("--instance", sim.instance, "instance JSON")->required();
  simulate->add_option("--graph", sim.graph, "graph JSON");
  simulate->add_option("--horizon", sim.horizon, "global steps to simulate");
  simulate->add_option("--transcript", sim.transcript, "write the per-step outcomes here");

  Sweep sw;
  auto* sweep = app.add_subcommand("sweep", "grid of random trials to CSV");
  sweep->add_option("--mode", sw.mode, "wakeup, broadcast, prime or always");
  sweep->add_option("--k", sw.ks, "node counts")->delimiter(',')->required();
  sweep->add_option("--L", sw.Ls, "id ranges")->delimiter(',')->required();
  sweep->add_option("--pattern", sw.patterns, "wake patterns")->delimiter(',');
  sweep->add_option("--stagger-width", sw.stagger_width, "W for the stagger pattern");
  sweep->add_option("--trials", sw.trials, "trials per grid point");
  sweep->add_option("--horizon-factor", sw.horizon_factor, "horizon in budgets");
  sweep->add_option("--out", sw.out, "output CSV, stdout by default");

  Verify ver;
  auto* verify = app.add_subcommand("verify", "check every corpus instance is hit within kappa * budget");
  verify->add_option("--mode", ver.mode, "wakeup or broadcast");
  verify->add_option("--corpus", ver.corpus, "corpus JSON; enumerated when omitted");
  verify->add_option("--r-max", ver.r_max, "corpus weight bound");
  verify->add_option("--wake-max", ver.wake_max, "corpus relative wake bound");
  verify->add_option("--out", ver.out, "report JSON, stdout by default");

  SearchSeed ss;
  auto* search = app.add_subcommand("search-seed", "find a master key that passes a corpus");
  search->add_option("--mode", ss.mode, "wakeup or broadcast");
  search->add_option("--corpus", ss.corpus, "corpus JSON; enumerated when omitted");
  search->add_option("--r-max", ss.r_max, "corpus weight bound");
  search->add_option("--wake-max", ss.wake_max, "corpus relative wake bound");
  search->add_option("--candidates", ss.candidates, "keys to try");
  search->add_option("--search-key", ss.search_key, "key the candidates derive from");
  search->add_option("--out", ss.out, "result JSON, stdout by default");

  Layers ly;
  auto* layers = app.add_subcommand("layers", "layer decomposition and leading-layer durations");
  layers->add_option("--graph", ly.graph, "graph JSON")->required();
  layers->add_option("--source", ly.source, "path start")->required();
  layers->add_option("--target", ly.target, "path end")->required();
  layers->add_option("--mode", ly.mode, "wakeup or broadcast");
  layers->add_option("--instance", ly.instance, "spontaneous wakes; the source alone at 0 by default");
  layers->add_option("--horizon", ly.horizon, "global steps to simulate");
  layers->add_option("--out", ly.out, "output JSON, stdout by default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (gen_instance->parsed()) run_gen_instance(gi, shared, out);
    if (gen_graph->parsed()) run_gen_graph(gg, shared, out);
    if (simulate->parsed()) run_simulate(sim, shared, out);
    if (sweep->parsed()) run_sweep_cmd(sw, shared, out);
    if (verify->parsed()) run_verify(ver, shared, out, err);
    if (search->parsed()) run_search(ss, shared, out);
    if (layers->parsed()) run_layers(ly, shared, out);
  } catch (const LimitError& e) {
    err << "limit exceeded: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace blindcast
