#pragma once

// Single-hop multiple access channel.  A step succeeds iff exactly one node
// transmits; success wakes every listener, which may transmit from the next
// step on.

#include <cstdint>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "blindcast/instance.hpp"
#include "blindcast/schedule.hpp"

namespace blindcast {

struct Silence {
  friend bool operator==(const Silence&, const Silence&) = default;
};
struct Collision {
  std::int64_t count = 2;
  friend bool operator==(const Collision&, const Collision&) = default;
};
struct Success {
  NodeId v = 0;
  friend bool operator==(const Success&, const Success&) = default;
};

using StepOutcome = std::variant<Silence, Collision, Success>;

struct HitResult {
  std::optional<Step> hit_step;
  std::optional<std::vector<StepOutcome>> transcript;
  Step horizon = 0;
  DelayBudget budget;
};

// Runs global steps 0..horizon-1.  Without a transcript the run stops at the
// first success and stops counting transmitters once two are found.
HitResult simulate_mac(const Instance& inst, const Schedule& schedule, DelayBudget budget, Step horizon,
                       bool keep_transcript);

// Synchronizer in wakeup mode, transmission schedule in broadcast mode; the
// budget is g(r,k) or h(r,k) of the instance.
HitResult simulate_mac(const Instance& inst, const ScheduleSeed& seed, Mode mode, Step horizon,
                       bool keep_transcript = false);

// Default horizon: twice the budget.
Step default_horizon(const DelayBudget& budget);

// Lines "j silence", "j collision", "j success v".
void write_transcript(std::ostream& out, const std::vector<StepOutcome>& transcript);

struct LoadProfile {
  std::vector<double> load;        // f(j) for j = 0..horizon-1
  std::vector<Step> good_steps;    // steps whose load lies in the band
  double band_low = 0.0;
  double band_high = 0.0;
};

// Analytic expected transmitter count per step for the instance's fixed wake
// times.  Band: [loglog k / (2c log k), loglog k / 3] in wakeup mode,
// [1/(2d), 1] in broadcast mode.
LoadProfile load_profile(const Instance& inst, const ScheduleParams& params, Mode mode, Step horizon);

struct EmpiricalLoad {
  double mean = 0.0;
  double standard_error = 0.0;  // sample standard error of the mean
  std::int64_t keys = 0;
};

// Mean transmitter count at step j over n_keys master keys derived from
// `key_source`.  Wake times are the instance's own (no reception).
EmpiricalLoad empirical_load(const Instance& inst, const ScheduleParams& params, Mode mode, Step j,
                             std::int64_t n_keys, const MasterKey& key_source);

}  // namespace blindcast
