#include "blindcast/verify.hpp"

#include <algorithm>
#include <cmath>

#include "blindcast/parallel.hpp"

namespace blindcast {

double exactly_one_probability(std::span<const double> probs) {
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) throw ValidationError("probabilities must lie in [0, 1]");
    double term = probs[i];
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (j != i) term *= 1.0 - probs[j];
    }
    total += term;
  }
  return total;
}

double colhit_bound(std::span<const double> probs) {
  double f = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 0.5)) throw ValidationError("collision-hit bound needs every p_i in [0, 1/2]");
    f += p;
  }
  return f * std::pow(4.0, -f);
}

VerifyReport verify_corpus(const InstanceCorpus& corpus, const Schedule& schedule, Mode mode,
                           const ScheduleParams& params, double kappa, unsigned jobs) {
  if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");
  VerifyReport report;
  report.provenance = corpus.provenance;
  report.mode = mode;
  report.kappa = kappa;
  report.params = params;
  report.rows.resize(corpus.instances.size());

  parallel_for(corpus.instances.size(), jobs, [&](std::size_t i) {
    const auto& inst = corpus.instances[i];
    const auto budget = delay_budget(params, mode, inst.r(), inst.k());
    const auto allowed = static_cast<Step>(std::floor(kappa * static_cast<double>(budget.value)));
    const auto hit = simulate_mac(inst, schedule, budget, inst.min_wake() + allowed + 1, false);
    auto& row = report.rows[i];
    row.index = i;
    row.budget = budget.value;
    row.hit_step = hit.hit_step;
    row.pass = hit.hit_step && *hit.hit_step - inst.min_wake() <= allowed;
  });

  for (const auto& row : report.rows) {
    if (row.pass) {
      ++report.passed;
    } else {
      report.failures.push_back(row.index);
    }
    if (row.hit_step) {
      const auto& inst = corpus.instances[row.index];
      report.max_ratio = std::max(report.max_ratio, static_cast<double>(*row.hit_step - inst.min_wake()) /
                                                        static_cast<double>(row.budget));
    }
  }
  return report;
}

VerifyReport verify_corpus(const InstanceCorpus& corpus, const ScheduleSeed& seed, Mode mode, double kappa,
                           unsigned jobs) {
  auto report = verify_corpus(corpus, *make_schedule(seed, mode), mode, seed.params, kappa, jobs);
  report.key_fingerprint = seed.key.fingerprint();
  return report;
}

VerifyReport exhaustive_verify(const ScheduleSeed& seed, Mode mode, int r_max, Step wake_max, double kappa,
                               std::size_t corpus_cap, unsigned jobs) {
  const auto corpus = enumerate_instances(r_max, wake_max, mode, seed.params, corpus_cap);
  return verify_corpus(corpus, seed, mode, kappa, jobs);
}

SeedSearchResult seed_search(const InstanceCorpus& corpus, Mode mode, std::size_t candidate_count, double kappa,
                             const MasterKey& search_key, const ScheduleParams& params, unsigned jobs) {
  if (candidate_count < 1) throw ValidationError("seed search needs at least one candidate");
  SeedSearchResult result;
  result.corpus_size = corpus.instances.size();
  for (std::size_t i = 0; i < candidate_count; ++i) {
    const ScheduleSeed seed{derive_key(search_key, i), params};
    const auto report = verify_corpus(corpus, seed, mode, kappa, jobs);
    result.pass_counts.push_back(report.passed);
    if (i == 0 || report.passed > result.pass_counts[result.best_index]) {
      result.best_index = i;
      result.best_key = seed.key;
    }
    if (report.all_pass()) {
      result.all_pass = true;
      break;
    }
  }
  return result;
}

std::vector<bool> broadcast_window(const ScheduleSeed& seed, const Instance& inst, Step x) {
  if (x < 1) throw ValidationError("window length must be at least 1");
  TransmissionSchedule schedule(seed);
  std::vector<std::unique_ptr<NodeProgram>> programs;
  for (const auto& n : inst.nodes()) programs.push_back(schedule.bind(n.id, n.wake));
  std::vector<bool> bits;
  bits.reserve(static_cast<std::size_t>(x) * programs.size());
  for (Step s = 0; s < x; ++s) {
    for (const auto& p : programs) bits.push_back(p->transmits(inst.min_wake() + s));
  }
  return bits;
}

bool shifted_window_matches(const ScheduleSeed& seed, const Instance& inst, Step x, Step delta) {
  return broadcast_window(seed, inst, x) == broadcast_window(seed, shift_wakes(inst, delta), x);
}

bool shift_invariance_check(const ScheduleSeed& seed, const Instance& inst, Step x, std::int64_t multiplier) {
  if (multiplier < 1) throw ValidationError("shift multiplier must be at least 1");
  const auto delta = multiplier * static_cast<Step>(z_phase(static_cast<std::uint64_t>(x)));
  return shifted_window_matches(seed, inst, x, delta);
}

nlohmann::ordered_json provenance_to_json(const CorpusProvenance& provenance) {
  nlohmann::ordered_json out;
  if (const auto* e = std::get_if<ExhaustiveProvenance>(&provenance)) {
    out["kind"] = "exhaustive";
    out["r_max"] = e->r_max;
    out["wake_max"] = e->wake_max;
    out["mode"] = std::string(to_string(e->mode));
  } else if (const auto* r = std::get_if<RandomProvenance>(&provenance)) {
    out["kind"] = "random";
    out["k"] = r->k;
    out["L"] = r->L;
    out["pattern"] = std::string(to_string(r->pattern.kind));
    out["width"] = r->pattern.width;
    out["rng_seed"] = r->rng_seed;
  } else {
    out["kind"] = "list";
    out["source"] = std::get<ListProvenance>(provenance).source;
  }
  return out;
}

nlohmann::ordered_json report_to_json(const VerifyReport& report, const InstanceCorpus& corpus) {
  nlohmann::ordered_json out;
  out["provenance"] = provenance_to_json(report.provenance);
  out["mode"] = std::string(to_string(report.mode));
  out["key"] = report.key_fingerprint;
  out["c"] = report.params.c;
  out["d"] = report.params.d;
  out["kappa"] = report.kappa;

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    const auto& inst = corpus.instances.at(row.index);
    nlohmann::ordered_json r;
    r["index"] = row.index;
    r["nodes"] = instance_to_json(inst)["nodes"];
    r["r"] = inst.r();
    r["k"] = inst.k();
    r["hit_step"] = row.hit_step ? nlohmann::ordered_json(*row.hit_step) : nlohmann::ordered_json(nullptr);
    r["budget"] = row.budget;
    r["pass"] = row.pass;
    rows.push_back(std::move(r));
  }
  out["instances"] = std::move(rows);

  nlohmann::ordered_json agg;
  agg["checked"] = report.rows.size();
  agg["passed"] = report.passed;
  agg["max_hit_budget_ratio"] = report.max_ratio;
  agg["failures"] = report.failures;
  out["aggregate"] = std::move(agg);
  return out;
}

nlohmann::ordered_json search_to_json(const SeedSearchResult& result, Mode mode, double kappa) {
  nlohmann::ordered_json out;
  out["mode"] = std::string(to_string(mode));
  out["kappa"] = kappa;
  out["corpus_size"] = result.corpus_size;
  out["all_pass"] = result.all_pass;
  out["best_index"] = result.best_index;
  out["best_key"] = result.best_key.hex();
  out["pass_counts"] = result.pass_counts;
  return out;
}

}  // namespace blindcast
