#include <doctest.h>

#include "ehdrl/harness.hpp"
#include "ehdrl/weight_blob.hpp"

using namespace ehdrl;
using namespace ehdrl::policies;

namespace {

energy::EnergyConfig with_initial(double joules) {
  energy::EnergyConfig cfg;
  cfg.initial_charge_frac = joules / cfg.capacity_j();
  return cfg;
}

harness::RunConfig small_run(PolicyKind kind, int days) {
  harness::RunConfig cfg;
  cfg.policy = kind;
  cfg.days = days;
  cfg.train_days = days;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("policy names round trip") {
  for (auto p : {PolicyKind::kSplitDrl, PolicyKind::kUnconstrainedDrl, PolicyKind::kThreshold,
                 PolicyKind::kIdealUniform}) {
    CHECK(parse_policy(to_string(p)) == p);
  }
  CHECK_FALSE(parse_policy("greedy").has_value());
}

TEST_CASE("threshold transmits in proportion to stored energy") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    CHECK(threshold_decide(18.0, 18.0, rng) == Action::kTransmit);
    CHECK(threshold_decide(0.0, 18.0, rng) == Action::kWait);
  }
  const int n = 10000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += threshold_decide(4.5, 18.0, rng) == Action::kTransmit;
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(hits / static_cast<double>(n) - 0.25) < 3.0 * sigma);
}

TEST_CASE("uniform steps are evenly spread inside each day") {
  const auto s = uniform_steps(90, 720, 1440);
  REQUIRE(s.size() == 180);
  CHECK(s.front() == 5);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] - s[i - 1] == 8);
  CHECK(uniform_steps(0, 720, 720).empty());
  CHECK(uniform_steps(1, 720, 720) == std::vector<Step>{361});
}

TEST_CASE("ideal uniform on a dark trace affords exactly one update") {
  // Sensing for 720 steps, one full-buffer update, and the reserve that keeps
  // a full buffer sendable at every step.
  const double need = 720 * 1.5e-3 + 0.1 + 0.1;
  const energy::HarvestTrace dark{std::vector<double>(720, 0.0), {}};
  const auto one = ideal_uniform_schedule(dark, with_initial(need + 0.01), 1);
  CHECK(one.per_day == 1);
  CHECK(one.steps.size() == 1);
  CHECK(ideal_uniform_schedule(dark, with_initial(need - 0.09), 1).per_day == 0);
  const auto none = ideal_uniform_schedule(dark, with_initial(0.5), 1);
  CHECK(none.per_day == 0);
  CHECK(none.steps.empty());
}

TEST_CASE("ideal uniform under a constant income of 90 full updates a day") {
  const energy::EnergyConfig probe;
  const double daily = 90 * energy::tx_cost(probe, 4) + 720 * probe.sense_j;
  const double amps = daily / (probe.supply_voltage * 86400.0);
  const energy::HarvestTrace trace{std::vector<double>(10 * 720, amps), {}};
  const auto sched = ideal_uniform_schedule(trace, with_initial(0.2), 3);
  CHECK(sched.per_day >= 88);
  CHECK(sched.per_day <= 91);
  CHECK(schedule_is_feasible(sched.steps, trace, with_initial(0.2), 3));
  CHECK_FALSE(schedule_is_feasible(uniform_steps(sched.per_day + 1, 720, trace.steps()), trace,
                                   with_initial(0.2), 3));
}

TEST_CASE("split with free instant downloads reproduces unconstrained") {
  auto split = small_run(PolicyKind::kSplitDrl, 2);
  split.energy.ann_update_j = 0.0;
  split.t_ann_steps = 1;
  auto free = small_run(PolicyKind::kUnconstrainedDrl, 2);
  const auto trace = harness::make_trace(split);
  System a = harness::make_system(split, trace);
  System b = harness::make_system(free, trace);
  for (Step t = 1; t <= 1440; ++t) {
    const auto ra = step(a, t, trace);
    const auto rb = step(b, t, trace);
    REQUIRE(ra.energy_j == rb.energy_j);
    REQUIRE(ra.action == rb.action);
    REQUIRE(ra.tx_success == rb.tx_success);
    REQUIRE(ra.weight_install == rb.weight_install);
    REQUIRE(ra.loss == rb.loss);
  }
  CHECK(a.device.installs() > 0);
}

TEST_CASE("sink and device agree on the age at every step") {
  auto cfg = small_run(PolicyKind::kSplitDrl, 2);
  const auto trace = harness::make_trace(cfg);
  System sys = harness::make_system(cfg, trace);
  for (Step t = 1; t <= 1440; ++t) {
    step(sys, t, trace);
    REQUIRE(sys.device.last_acknowledged() == sys.sink.aoi().last_generation());
    REQUIRE(sys.device.aoi_steps(t) == sys.sink.aoi().age());
  }
}

TEST_CASE("installs respect the download gate") {
  for (int per_day : {1, 2, 3}) {
    auto cfg = small_run(PolicyKind::kSplitDrl, 4);
    cfg.profile = energy::Profile::kHigh;
    cfg.energy.capacitance_farads = 10.0;
    cfg.updates_per_day = per_day;
    const auto trace = harness::make_trace(cfg);
    System sys = harness::make_system(cfg, trace);
    const int gate = device::t_ann_steps(per_day);
    std::vector<int> per_calendar_day(4, 0);
    Step last = -gate;
    std::int64_t awake = 0;
    for (Step t = 1; t <= 4 * 720; ++t) {
      const auto r = step(sys, t, trace);
      awake += r.action >= 0;
      if (r.weight_install) {
        CHECK(t - last >= gate);
        last = t;
        ++per_calendar_day[(t - 1) / 720];
      }
    }
    for (int n : per_calendar_day) CHECK(n <= (720 + gate - 1) / gate);
    CHECK(sys.device.installs() <= awake / gate);
    if (per_day == 1) {
      CHECK(sys.device.installs() <= 4);
    }
  }
}

TEST_CASE("baselines never train") {
  for (auto kind : {PolicyKind::kThreshold, PolicyKind::kIdealUniform}) {
    auto cfg = small_run(kind, 2);
    const auto trace = harness::make_trace(cfg);
    System sys = harness::make_system(cfg, trace);
    const auto initial = nn::serialize(sys.device.cached());
    for (Step t = 1; t <= 1440; ++t) {
      const auto r = step(sys, t, trace);
      CHECK_FALSE(r.loss.has_value());
      CHECK_FALSE(r.weight_install);
    }
    CHECK(sys.sink.train_steps() == 0);
    CHECK(nn::serialize(sys.device.cached()) == initial);
  }
}

TEST_CASE("epsilon follows the simulation clock until overridden") {
  auto cfg = small_run(PolicyKind::kSplitDrl, 1);
  const auto trace = harness::make_trace(cfg);
  System sys = harness::make_system(cfg, trace);
  CHECK(sys.epsilon_at(1) == 1.0);
  CHECK(sys.epsilon_at(1441) == doctest::Approx(0.05));
  sys.epsilon_override = 0.2;
  CHECK(sys.epsilon_at(1) == 0.2);
}
