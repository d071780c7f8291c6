#include "blindcast/channel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace blindcast {

namespace {

struct Participant {
  NodeId id;
  Step wake;
  std::unique_ptr<NodeProgram> program;
};

}  // namespace

Step default_horizon(const DelayBudget& budget) { return std::max<Step>(1, 2 * budget.value); }

HitResult simulate_mac(const Instance& inst, const Schedule& schedule, DelayBudget budget, Step horizon,
                       bool keep_transcript) {
  if (horizon < 1) throw ValidationError("horizon must be at least 1");

  HitResult result;
  result.horizon = horizon;
  result.budget = budget;
  if (keep_transcript) {
    result.transcript.emplace();
    result.transcript->reserve(static_cast<std::size_t>(std::min<Step>(horizon, 1 << 20)));
  }

  std::vector<Participant> dormant;
  for (const auto& n : inst.nodes()) dormant.push_back({n.id, n.wake, nullptr});
  // Latest wake first so the next riser sits at the back.
  std::sort(dormant.begin(), dormant.end(), [](const auto& a, const auto& b) {
    return a.wake != b.wake ? a.wake > b.wake : a.id > b.id;
  });
  std::vector<Participant> awake;
  awake.reserve(dormant.size());

  for (Step j = 0; j < horizon; ++j) {
    while (!dormant.empty() && dormant.back().wake <= j) {
      auto p = std::move(dormant.back());
      dormant.pop_back();
      p.program = schedule.bind(p.id, p.wake);
      awake.push_back(std::move(p));
    }

    std::int64_t count = 0;
    NodeId sender = 0;
    for (const auto& p : awake) {
      if (p.program->transmits(j)) {
        ++count;
        sender = p.id;
        if (count >= 2 && !keep_transcript) break;
      }
    }

    if (count == 1) {
      if (!result.hit_step) result.hit_step = j;
      if (keep_transcript) result.transcript->push_back(Success{sender});
      // Listeners wake on reception and start their schedules at j + 1.
      for (auto& p : dormant) p.wake = j + 1;
      if (!keep_transcript) break;
    } else if (keep_transcript) {
      if (count == 0) {
        result.transcript->push_back(Silence{});
      } else {
        result.transcript->push_back(Collision{count});
      }
    }
  }
  return result;
}

HitResult simulate_mac(const Instance& inst, const ScheduleSeed& seed, Mode mode, Step horizon,
                       bool keep_transcript) {
  const auto schedule = make_schedule(seed, mode);
  return simulate_mac(inst, *schedule, delay_budget(seed.params, mode, inst.r(), inst.k()), horizon,
                      keep_transcript);
}

void write_transcript(std::ostream& out, const std::vector<StepOutcome>& transcript) {
  for (std::size_t j = 0; j < transcript.size(); ++j) {
    const auto& step = transcript[j];
    if (std::holds_alternative<Silence>(step)) {
      out << j << " silence\n";
    } else if (std::holds_alternative<Collision>(step)) {
      out << j << " collision\n";
    } else {
      out << j << " success " << std::get<Success>(step).v << '\n';
    }
  }
}

LoadProfile load_profile(const Instance& inst, const ScheduleParams& params, Mode mode, Step horizon) {
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  LoadProfile profile;
  const auto k = static_cast<std::uint64_t>(inst.k());
  if (mode == Mode::wakeup) {
    const double ll = safe_loglog_count(k);
    profile.band_low = ll / (2.0 * params.c * safe_log(k));
    profile.band_high = ll / 3.0;
  } else {
    profile.band_low = 1.0 / (2.0 * params.d);
    profile.band_high = 1.0;
  }

  profile.load.assign(static_cast<std::size_t>(horizon), 0.0);
  for (Step j = 0; j < horizon; ++j) {
    double f = 0.0;
    for (const auto& n : inst.nodes()) {
      if (n.wake > j) continue;
      f += mode == Mode::wakeup ? sync_probability(params, n.id, j - n.wake)
                                : ts_probability(params, n.id, n.wake, j);
    }
    profile.load[static_cast<std::size_t>(j)] = f;
    if (f >= profile.band_low && f <= profile.band_high) profile.good_steps.push_back(j);
  }
  return profile;
}

EmpiricalLoad empirical_load(const Instance& inst, const ScheduleParams& params, Mode mode, Step j,
                             std::int64_t n_keys, const MasterKey& key_source) {
  if (n_keys < 100) throw ValidationError("empirical load needs at least 100 keys");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < n_keys; ++i) {
    const ScheduleSeed seed{derive_key(key_source, static_cast<std::uint64_t>(i)), params};
    std::int64_t count = 0;
    for (const auto& n : inst.nodes()) {
      if (n.wake > j) continue;
      const bool bit = mode == Mode::wakeup ? sync_bit(seed, n.id, j - n.wake) : ts_bit(seed, n.id, n.wake, j);
      count += bit ? 1 : 0;
    }
    sum += static_cast<double>(count);
    sum_sq += static_cast<double>(count) * static_cast<double>(count);
  }
  const auto n = static_cast<double>(n_keys);
  EmpiricalLoad out;
  out.keys = n_keys;
  out.mean = sum / n;
  const double variance = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
  out.standard_error = std::sqrt(variance / n);
  return out;
}

}  // namespace blindcast
