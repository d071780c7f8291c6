#pragma once

// Parameter sweeps over random instances, one CSV row per trial.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "blindcast/instance.hpp"
#include "blindcast/schedule.hpp"

namespace blindcast {

// Which schedule drives the nodes.  prime and always run on local clocks.
enum class Protocol { synchronizer, transmission, prime, always };

// CSV mode names: wakeup, broadcast, prime, always.
std::string_view protocol_name(Protocol protocol);
Protocol parse_protocol(std::string_view text);
Mode clock_mode(Protocol protocol);
class PrimeTable;

// `primes` defaults to the process-wide table.
std::unique_ptr<Schedule> make_protocol_schedule(Protocol protocol, const ScheduleSeed& seed,
                                                 PrimeTable* primes = nullptr);

struct SweepConfig {
  Protocol protocol = Protocol::synchronizer;
  std::vector<std::int64_t> ks;
  std::vector<std::uint64_t> Ls;
  std::vector<WakePatternSpec> patterns{WakePatternSpec{}};
  std::int64_t trials = 1;
  MasterKey master = default_master_key();
  ScheduleParams params;
  double kappa = 1.0;
  double horizon_factor = 2.0;  // horizon = min wake + factor * budget
  unsigned jobs = 0;
  PrimeTable* primes = nullptr;  // prime baseline table; null for the default
};

struct SweepRecord {
  std::string mode;
  std::string key;  // fingerprint of the trial key
  std::int64_t k = 0;
  std::uint64_t L = 0;
  WakePatternSpec pattern;
  std::int64_t r = 0;
  std::uint64_t inst_seed = 0;
  Step hit_step = -1;
  Step budget = 0;
  bool within_budget = false;
  double wall_ms = 0.0;
};

inline constexpr std::string_view kSweepCsvHeader = "mode,key,k,L,r,inst_seed,hit_step,budget,within_budget,wall_ms";

// Trial t (numbered across the whole grid in k, L, pattern, trial order)
// runs under derive_key(master, t) on random_instance(..., inst_seed) with
// inst_seed = prf(master, instance, t, 0).  Rows come back in trial order
// whatever the job count.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

std::string sweep_csv_row(const SweepRecord& record);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace blindcast
