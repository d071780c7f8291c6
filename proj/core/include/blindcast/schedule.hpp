#pragma once

// The two infinite per-node bit schedules and the numeric helpers behind
// them.
//
// Synchronizer (no global clock): S(v)_j = 1 with probability
//   c*lambda(v) / (j + 2*c*lambda(v)),  j counted from v's own wake-up.
//
// Transmission schedule (global clock): for x = j - wake(v) >= 0,
//   T(v, wake)_j = 1  iff  s_{v,x} = 1  and  p_{v,x} <= 2^-(j mod z(x)),
// where s_{v,x} = 1 with probability
//   d*lambda(v)*LL(x) / (x + 2*d*lambda(v)*LL(x))
// and p_{v,x} is uniform on [0, 1).
//
// All randomness is drawn from the keyed PRF in prf.hpp, so a schedule is
// fully determined by a ScheduleSeed.  Logarithms are base 2.

#include <cstdint>
#include <memory>

#include "blindcast/prf.hpp"
#include "blindcast/types.hpp"

namespace blindcast {

struct ScheduleParams {
  int c = 9;   // synchronizer constant
  int d = 34;  // transmission-schedule constant

  friend bool operator==(const ScheduleParams&, const ScheduleParams&) = default;
};

struct ScheduleSeed {
  MasterKey key;
  ScheduleParams params;

  friend bool operator==(const ScheduleSeed&, const ScheduleSeed&) = default;
};

// lambda(v) = log2(v + 1).  Throws ValidationError for v = 0.
double lambda_weight(NodeId v);

// log2(log2(x + 4)); >= 1 for every x >= 0.
double safe_loglog(std::uint64_t x);
// log2(max(k, 2)); >= 1.
double safe_log(std::uint64_t k);
// log2(log2(max(k, 4))); the loglog k factor of the delay budgets, >= 1.
double safe_loglog_count(std::uint64_t k);

// z(j) = 2^ceil(1 + log2 log2 log2 j), and 2 for j <= 4.  Computed exactly:
// ceil(1 + lll j) <= m  iff  j <= 2^(2^(2^(m-1))).
std::uint64_t z_phase(std::uint64_t j);

struct DelayBudget {
  Mode mode = Mode::wakeup;
  std::int64_t r = 1;
  std::int64_t k = 1;
  Step value = 0;

  friend bool operator==(const DelayBudget&, const DelayBudget&) = default;
};

// wakeup:    ceil(c^2 * r * log k / loglog k)
// broadcast: ceil(d^2 * r * loglog k)
DelayBudget delay_budget(const ScheduleParams& params, Mode mode, std::int64_t r, std::int64_t k);

// Shared threshold expressions.  The bit functions and the analytic
// probabilities both go through these so they agree to the last ulp.
inline double sync_threshold(double c_lambda, Step rel_j) {
  return c_lambda / (static_cast<double>(rel_j) + 2.0 * c_lambda);
}

inline double ts_select_threshold(double d_lambda, Step x) {
  const double w = d_lambda * safe_loglog(static_cast<std::uint64_t>(x));
  return w / (static_cast<double>(x) + 2.0 * w);
}

// p <= 2^-m on 64-bit fixed point fractions.  m < 64.
constexpr bool phase_admits(std::uint64_t phase, std::uint64_t m) {
  return m == 0 || phase <= (std::uint64_t{1} << (64 - m));
}

// Probability that S(v)_{rel_j} = 1.
double sync_probability(const ScheduleParams& params, NodeId v, Step rel_j);
bool sync_bit(const ScheduleSeed& seed, NodeId v, Step rel_j);

// Probability that T(v, wake)_global_j = 1 (0 before wake).
double ts_probability(const ScheduleParams& params, NodeId v, Step wake, Step global_j);
bool ts_bit(const ScheduleSeed& seed, NodeId v, Step wake, Step global_j);

// A schedule bound to one node and its wake-up step.
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  // Whether the node transmits in global step `global_j`.
  virtual bool transmits(Step global_j) const = 0;
};

// Any deterministic bit function of (v, wake, global step).  Simulators only
// see this interface, so baselines plug in next to the real schedules.
class Schedule {
 public:
  virtual ~Schedule() = default;
  virtual std::unique_ptr<NodeProgram> bind(NodeId v, Step wake) const = 0;
};

class SynchronizerSchedule final : public Schedule {
 public:
  explicit SynchronizerSchedule(ScheduleSeed seed) : seed_(seed) {}
  std::unique_ptr<NodeProgram> bind(NodeId v, Step wake) const override;

 private:
  ScheduleSeed seed_;
};

class TransmissionSchedule final : public Schedule {
 public:
  explicit TransmissionSchedule(ScheduleSeed seed) : seed_(seed) {}
  std::unique_ptr<NodeProgram> bind(NodeId v, Step wake) const override;

 private:
  ScheduleSeed seed_;
};

// Synchronizer for wakeup, transmission schedule for broadcast.
std::unique_ptr<Schedule> make_schedule(const ScheduleSeed& seed, Mode mode);

}  // namespace blindcast
