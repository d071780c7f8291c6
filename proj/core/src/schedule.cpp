#include "blindcast/schedule.hpp"

#include <cmath>

namespace blindcast {

std::string_view to_string(Mode mode) {
  return mode == Mode::wakeup ? "wakeup" : "broadcast";
}

Mode parse_mode(std::string_view text) {
  if (text == "wakeup") return Mode::wakeup;
  if (text == "broadcast") return Mode::broadcast;
  throw ValidationError("unknown mode '" + std::string(text) + "' (expected wakeup or broadcast)");
}

double lambda_weight(NodeId v) {
  if (v == 0) throw ValidationError("node id 0 is not a valid id");
  return std::log2(static_cast<double>(v) + 1.0);
}

double safe_loglog(std::uint64_t x) {
  return std::log2(std::log2(static_cast<double>(x) + 4.0));
}

double safe_log(std::uint64_t k) {
  return std::log2(static_cast<double>(k < 2 ? 2 : k));
}

double safe_loglog_count(std::uint64_t k) {
  return std::log2(std::log2(static_cast<double>(k < 4 ? 4 : k)));
}

std::uint64_t z_phase(std::uint64_t j) {
  if (j <= 4) return 2;
  if (j <= 16) return 4;
  if (j <= 65536) return 8;
  // The next threshold is 2^256, beyond any 64-bit step.
  return 16;
}

DelayBudget delay_budget(const ScheduleParams& params, Mode mode, std::int64_t r, std::int64_t k) {
  if (r < 1 || k < 1) throw ValidationError("delay budget needs r >= 1 and k >= 1");
  const auto ku = static_cast<std::uint64_t>(k);
  double value = 0.0;
  if (mode == Mode::wakeup) {
    const double c = params.c;
    value = c * c * static_cast<double>(r) * safe_log(ku) / safe_loglog_count(ku);
  } else {
    const double d = params.d;
    value = d * d * static_cast<double>(r) * safe_loglog_count(ku);
  }
  return DelayBudget{mode, r, k, static_cast<Step>(std::ceil(value))};
}

double sync_probability(const ScheduleParams& params, NodeId v, Step rel_j) {
  if (rel_j < 0) return 0.0;
  return sync_threshold(params.c * lambda_weight(v), rel_j);
}

bool sync_bit(const ScheduleSeed& seed, NodeId v, Step rel_j) {
  if (rel_j < 0) return false;
  const double p = sync_threshold(seed.params.c * lambda_weight(v), rel_j);
  return to_unit(prf_uniform(seed.key, StreamTag::sync, v, static_cast<std::uint64_t>(rel_j))) < p;
}

double ts_probability(const ScheduleParams& params, NodeId v, Step wake, Step global_j) {
  if (global_j < wake) return 0.0;
  const Step x = global_j - wake;
  const std::uint64_t m = static_cast<std::uint64_t>(global_j) % z_phase(static_cast<std::uint64_t>(x));
  return ts_select_threshold(params.d * lambda_weight(v), x) * std::ldexp(1.0, -static_cast<int>(m));
}

bool ts_bit(const ScheduleSeed& seed, NodeId v, Step wake, Step global_j) {
  if (global_j < wake) return false;
  const Step x = global_j - wake;
  const auto xu = static_cast<std::uint64_t>(x);
  const double p = ts_select_threshold(seed.params.d * lambda_weight(v), x);
  if (!(to_unit(prf_uniform(seed.key, StreamTag::ts_select, v, xu)) < p)) return false;
  const std::uint64_t m = static_cast<std::uint64_t>(global_j) % z_phase(xu);
  return phase_admits(prf_uniform(seed.key, StreamTag::ts_phase, v, xu), m);
}

namespace {

class SynchronizerProgram final : public NodeProgram {
 public:
  SynchronizerProgram(const ScheduleSeed& seed, NodeId v, Step wake)
      : stream_(stream_key(seed.key, StreamTag::sync, v)),
        c_lambda_(seed.params.c * lambda_weight(v)),
        wake_(wake) {}

  bool transmits(Step global_j) const override {
    if (global_j < wake_) return false;
    const Step rel = global_j - wake_;
    return to_unit(stream_output(stream_, static_cast<std::uint64_t>(rel))) <
           sync_threshold(c_lambda_, rel);
  }

 private:
  std::uint64_t stream_;
  double c_lambda_;
  Step wake_;
};

class TransmissionProgram final : public NodeProgram {
 public:
  TransmissionProgram(const ScheduleSeed& seed, NodeId v, Step wake)
      : select_(stream_key(seed.key, StreamTag::ts_select, v)),
        phase_(stream_key(seed.key, StreamTag::ts_phase, v)),
        d_lambda_(seed.params.d * lambda_weight(v)),
        wake_(wake) {}

  bool transmits(Step global_j) const override {
    if (global_j < wake_) return false;
    const Step x = global_j - wake_;
    const auto xu = static_cast<std::uint64_t>(x);
    // The phase test is cheaper than the log-log threshold; order does not
    // change the result.
    const std::uint64_t m = static_cast<std::uint64_t>(global_j) % z_phase(xu);
    if (!phase_admits(stream_output(phase_, xu), m)) return false;
    return to_unit(stream_output(select_, xu)) < ts_select_threshold(d_lambda_, x);
  }

 private:
  std::uint64_t select_;
  std::uint64_t phase_;
  double d_lambda_;
  Step wake_;
};

}  // namespace

std::unique_ptr<NodeProgram> SynchronizerSchedule::bind(NodeId v, Step wake) const {
  return std::make_unique<SynchronizerProgram>(seed_, v, wake);
}

std::unique_ptr<NodeProgram> TransmissionSchedule::bind(NodeId v, Step wake) const {
  return std::make_unique<TransmissionProgram>(seed_, v, wake);
}

std::unique_ptr<Schedule> make_schedule(const ScheduleSeed& seed, Mode mode) {
  if (mode == Mode::wakeup) return std::make_unique<SynchronizerSchedule>(seed);
  return std::make_unique<TransmissionSchedule>(seed);
}

}  // namespace blindcast
