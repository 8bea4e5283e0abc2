#include <doctest.h>

#include "ehdrl/aoi_process.hpp"
#include "oracles.hpp"

using namespace ehdrl;
using ehdrl::aoi::AoIProcess;

TEST_CASE("age grows by one per tick") {
  AoIProcess p;
  for (Step t = 1; t <= 5; ++t) p.tick(t);
  CHECK(p.age() == 5);
  CHECK_THROWS_AS(p.tick(5), std::logic_error);
  CHECK_THROWS_AS(p.tick(7), std::logic_error);
}

TEST_CASE("reception resets the age and records the peak") {
  AoIProcess p;
  for (Step t = 1; t <= 10; ++t) p.tick(t);
  CHECK(p.receive(10, 10));
  CHECK(p.age() == 0);
  CHECK(p.peaks() == std::vector<Step>{10});
  p.tick(11);
  CHECK(p.age() == 1);
  for (Step t = 12; t <= 17; ++t) p.tick(t);
  CHECK(p.age() == 7);
  CHECK(p.receive(17, 15));
  CHECK(p.peaks().back() == 7);
  CHECK(p.age() == 2);
  CHECK_THROWS(p.receive(16, 16));
  CHECK_THROWS(p.receive(17, 18));
}

TEST_CASE("peak average is the mean of peaks") {
  AoIProcess p;
  for (Step t = 1; t <= 7; ++t) p.tick(t);
  p.receive(7, 7);  // peak 7
  for (Step t = 8; t <= 10; ++t) p.tick(t);
  p.receive(10, 10);  // peak 3
  CHECK(p.peak_aoi() == 5.0);
  CHECK(p.receptions() == 2);
  CHECK(AoIProcess{}.peak_aoi() == 0.0);
}

TEST_CASE("stale updates are counted and ignored") {
  AoIProcess p;
  for (Step t = 1; t <= 4; ++t) p.tick(t);
  CHECK(p.receive(4, 3));
  CHECK_FALSE(p.receive(4, 2));
  CHECK_FALSE(p.receive(4, 3));
  CHECK(p.stale_updates() == 2);
  CHECK(p.receptions() == 1);
  CHECK(p.age() == 1);
}

TEST_CASE("hand-enumerated average") {
  AoIProcess p;
  for (Step t = 1; t <= 8; ++t) {
    p.tick(t);
    if (t == 3 || t == 7) p.receive(t, t);
  }
  const std::vector<Step> expected{1, 2, 0, 1, 2, 3, 0, 1};
  for (Step t = 1; t <= 8; ++t) CHECK(p.sample(t) == expected[t - 1]);
  CHECK(p.average_aoi(8) == 1.25);
  CHECK_THROWS(p.average_aoi(0));
  CHECK_THROWS(p.average_aoi(5, 4));
}

TEST_CASE("constant age averages to itself") {
  AoIProcess p;
  for (Step t = 1; t <= 20; ++t) {
    p.tick(t);
    if (t >= 3) p.receive(t, t - 2);
  }
  CHECK(p.average_aoi(3, 20) == 2.0);
}

TEST_CASE("downtime counter") {
  AoIProcess p;
  for (int i = 0; i < 100; ++i) p.note_downtime(false);
  CHECK(p.downtime_steps() == 0);
  for (int i = 0; i < 30; ++i) p.note_downtime(true);
  CHECK(p.downtime_steps() == 30);
  CHECK(p.downtime_steps() * 120.0 / 3600.0 == 1.0);
}

TEST_CASE("rolling window") {
  AoIProcess p(720);
  for (Step t = 1; t <= 1000; ++t) p.tick(t);
  CHECK(p.window_size() == 720);
  // Ages are 1..1000 without receptions.
  CHECK(p.window_mean() == doctest::Approx((281.0 + 1000.0) / 2.0));
  CHECK(p.past_window_mean(720) == 0.0);
  CHECK(p.past_window_mean(721) == doctest::Approx((1.0 + 720.0) / 2.0));
  CHECK(p.past_window_mean(1000) == doctest::Approx((280.0 + 999.0) / 2.0));
}

TEST_CASE("sawtooth grows with slope one between receptions") {
  AoIProcess p;
  for (Step t = 1; t <= 50; ++t) {
    p.tick(t);
    if (t == 10 || t == 30) p.receive(t, t);
  }
  for (Step t = 10; t + 1 < 30; ++t) CHECK(p.sample(t + 1) - p.sample(t) == 1);
}

TEST_CASE("incremental bookkeeping equals brute force on random event lists") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Step horizon = 1 + static_cast<Step>(rng.below(120));
    std::vector<oracle::Event> events;
    for (Step t = 1; t <= horizon; ++t) {
      const auto k = rng.below(4) == 0 ? rng.below(3) + 1 : 0;
      for (std::uint64_t i = 0; i < k; ++i) {
        events.push_back({t, 1 + static_cast<Step>(rng.below(static_cast<std::uint64_t>(t)))});
      }
    }
    AoIProcess p(7);
    std::size_t e = 0;
    for (Step t = 1; t <= horizon; ++t) {
      p.tick(t);
      for (; e < events.size() && events[e].received == t; ++e) p.receive(t, events[e].generated);
    }
    const auto ref = oracle::brute_force_aoi(events, horizon);
    for (Step t = 1; t <= horizon; ++t) REQUIRE(p.sample(t) == ref.samples[t - 1]);
    CHECK(p.peaks() == ref.peaks);
    CHECK(p.stale_updates() == ref.stale);
    CHECK(p.average_aoi(horizon) == oracle::mean(ref.samples, 0, ref.samples.size()));
  }
}
