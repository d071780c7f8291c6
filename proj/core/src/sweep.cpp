#include "blindcast/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "blindcast/baselines.hpp"
#include "blindcast/channel.hpp"
#include "blindcast/parallel.hpp"

namespace blindcast {

std::string_view protocol_name(Protocol protocol) {
  switch (protocol) {
    case Protocol::synchronizer: return "wakeup";
    case Protocol::transmission: return "broadcast";
    case Protocol::prime: return "prime";
    case Protocol::always: return "always";
  }
  return "?";
}

Protocol parse_protocol(std::string_view text) {
  if (text == "wakeup") return Protocol::synchronizer;
  if (text == "broadcast") return Protocol::transmission;
  if (text == "prime") return Protocol::prime;
  if (text == "always") return Protocol::always;
  throw ValidationError("unknown mode '" + std::string(text) + "' (expected wakeup, broadcast, prime or always)");
}

Mode clock_mode(Protocol protocol) {
  return protocol == Protocol::transmission ? Mode::broadcast : Mode::wakeup;
}

std::unique_ptr<Schedule> make_protocol_schedule(Protocol protocol, const ScheduleSeed& seed, PrimeTable* primes) {
  switch (protocol) {
    case Protocol::synchronizer: return std::make_unique<SynchronizerSchedule>(seed);
    case Protocol::transmission: return std::make_unique<TransmissionSchedule>(seed);
    case Protocol::prime: return std::make_unique<PrimeSchedule>(primes ? *primes : default_prime_table());
    case Protocol::always: return std::make_unique<AlwaysTransmitSchedule>();
  }
  throw ValidationError("unknown protocol");
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  if (config.trials < 1) throw ValidationError("trials must be at least 1");
  if (config.ks.empty() || config.Ls.empty() || config.patterns.empty()) {
    throw ValidationError("sweep grid must list at least one k, L and pattern");
  }
  if (!(config.kappa > 0.0) || !(config.horizon_factor > 0.0)) {
    throw ValidationError("kappa and horizon factor must be positive");
  }

  struct Trial {
    std::int64_t k;
    std::uint64_t L;
    WakePatternSpec pattern;
  };
  std::vector<Trial> trials;
  for (auto k : config.ks) {
    for (auto L : config.Ls) {
      if (k < 1 || static_cast<std::uint64_t>(k) > L) {
        throw ValidationError("sweep point k=" + std::to_string(k) + ", L=" + std::to_string(L) + " needs 1 <= k <= L");
      }
      for (const auto& pattern : config.patterns) {
        for (std::int64_t t = 0; t < config.trials; ++t) trials.push_back({k, L, pattern});
      }
    }
  }

  const Mode mode = clock_mode(config.protocol);
  std::vector<SweepRecord> records(trials.size());
  parallel_for(trials.size(), config.jobs, [&](std::size_t i) {
    const auto started = std::chrono::steady_clock::now();
    const auto& trial = trials[i];
    const ScheduleSeed seed{derive_key(config.master, i), config.params};
    const std::uint64_t inst_seed = prf_uniform(config.master, StreamTag::instance, i, 0);
    const Instance inst = random_instance(trial.k, trial.L, trial.pattern, inst_seed);
    const auto budget = delay_budget(config.params, mode, inst.r(), inst.k());
    const auto horizon = inst.min_wake() +
                         std::max<Step>(1, static_cast<Step>(std::ceil(config.horizon_factor * budget.value)));
    const auto schedule = make_protocol_schedule(config.protocol, seed, config.primes);
    const auto hit = simulate_mac(inst, *schedule, budget, horizon, false);

    auto& rec = records[i];
    rec.mode = std::string(protocol_name(config.protocol));
    rec.key = seed.key.fingerprint();
    rec.k = trial.k;
    rec.L = trial.L;
    rec.pattern = trial.pattern;
    rec.r = inst.r();
    rec.inst_seed = inst_seed;
    rec.hit_step = hit.hit_step.value_or(-1);
    rec.budget = budget.value;
    const auto allowed = static_cast<Step>(std::floor(config.kappa * static_cast<double>(budget.value)));
    rec.within_budget = hit.hit_step && *hit.hit_step - inst.min_wake() <= allowed;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  });
  return records;
}

std::string sweep_csv_row(const SweepRecord& r) {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
  return r.mode + ',' + r.key + ',' + std::to_string(r.k) + ',' + std::to_string(r.L) + ',' + std::to_string(r.r) +
         ',' + std::to_string(r.inst_seed) + ',' + std::to_string(r.hit_step) + ',' + std::to_string(r.budget) + ',' +
         (r.within_budget ? "1" : "0") + ',' + wall;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : records) out << sweep_csv_row(r) << '\n';
}

}  // namespace blindcast
