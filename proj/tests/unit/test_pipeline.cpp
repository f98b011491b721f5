#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "homesense/daily.hpp"
#include "homesense/data_matrix.hpp"
#include "homesense/forgetting.hpp"
#include "homesense/label_track.hpp"
#include "homesense/nrd.hpp"

using namespace homesense;

namespace {

Tick at(double seconds) { return ticks_from_seconds(seconds); }
Tick clock(int day, int h, int m = 0) { return ticks_from_days(day) + (h * 3600 + m * 60) * kTicksPerSecond; }

}  // namespace

TEST_CASE("binarize: empty stream gives an all-zero matrix") {
  auto X = binarize({}, 5, 100);
  CHECK(X.columns() == 100);
  for (int s = 0; s < 5; ++s) CHECK(X.runs(s).empty());
}

TEST_CASE("binarize: short ON span covers one column") {
  std::vector<SensorEvent> ev{{at(3.2), 2, true}, {at(3.4), 2, false}};
  auto X = binarize(ev, 4, 20);
  REQUIRE(X.runs(2).size() == 1);
  CHECK(X.runs(2)[0] == ColumnRun{3, 3});
}

TEST_CASE("binarize: ON from 3.2 s to 8.7 s spans seconds 4 through 9") {
  std::vector<SensorEvent> ev{{at(3.2), 0, true}, {at(8.7), 0, false}};
  auto X = binarize(ev, 1, 20);
  REQUIRE(X.runs(0).size() == 1);
  // 0-based column k covers (k, k+1] seconds.
  CHECK(X.runs(0)[0] == ColumnRun{3, 8});
}

TEST_CASE("binarize rejects events past the horizon") {
  std::vector<SensorEvent> ev{{at(30.0), 0, true}};
  CHECK_THROWS(binarize(ev, 1, 20));
}

TEST_CASE("binarize matches a per-tick replay on random streams") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int S = 6;
    const std::int64_t T = 3000;
    auto ev = oracle::random_trace(gen, S, T, 10000, 5.0 + trial * 3.0, 5.0 + trial * 20.0);
    auto X = binarize(ev, S, T);
    auto Y = oracle::binarize(ev, S, T);
    for (int s = 0; s < S; ++s)
      for (std::int64_t j = 0; j < T; ++j) REQUIRE(X.at(s, j) == static_cast<bool>(Y[s][j]));
    for (std::int64_t j = 0; j < T; ++j) {
      std::int64_t sum = 0;
      for (int s = 0; s < S; ++s) sum += Y[s][j];
      REQUIRE(X.column_sum(j) == sum);
    }
  }
}

TEST_CASE("segments cover the matrix with constant active sets") {
  std::mt19937_64 gen(7);
  auto ev = oracle::random_trace(gen, 5, 2000, 3000, 40.0, 60.0);
  auto X = binarize(ev, 5, 2000);
  std::int64_t next = 0;
  X.for_each_segment([&](std::int64_t a, std::int64_t b, std::span<const int> active) {
    CHECK(a == next);
    CHECK(a <= b);
    for (std::int64_t j = a; j <= b; ++j) {
      std::vector<int> here;
      for (int s = 0; s < 5; ++s)
        if (X.at(s, j)) here.push_back(s);
      REQUIRE(std::vector<int>(active.begin(), active.end()) == here);
    }
    next = b + 1;
  });
  CHECK(next == 2000);
}

namespace {

std::vector<std::vector<char>> dense_of(const DataMatrix& X) {
  std::vector<std::vector<char>> out(X.sensors(), std::vector<char>(X.columns(), 0));
  for (int s = 0; s < X.sensors(); ++s)
    for (const auto& r : X.runs(s))
      for (std::int64_t j = r.first; j <= r.last; ++j) out[s][j] = 1;
  return out;
}

}  // namespace

TEST_CASE("NRD counts up after a single firing") {
  auto [plan, layout] = default_plan();
  std::vector<SensorEvent> ev{{at(10.5), 5, true}, {at(11.5), 5, false}};
  auto X = binarize(ev, layout.size(), 200);
  auto nrd = nonresponse_duration(X, layout);
  const int row = 5;  // infrared ids come first among the motion sensors
  REQUIRE(nrd.motion_ids[row] == 5);
  // Active in columns 10 and 11; the counter restarts at the last active column.
  CHECK(nrd.value(row, 10) == 0);
  CHECK(nrd.value(row, 11) == 0);
  for (std::int64_t k = 1; k < 150; ++k) CHECK(nrd.value(row, 11 + k) == k);
  CHECK(nrd.value(row, 9) == 0);
  CHECK(nrd.value(6, 50) == 0);
}

TEST_CASE("NRD does not reset while a pressure mat stays ON") {
  auto [plan, layout] = default_plan();
  std::vector<SensorEvent> ev{{at(20.0), 34, true}, {at(120.0), 34, false}};
  auto X = binarize(ev, layout.size(), 300);
  auto nrd = nonresponse_duration(X, layout);
  int row = -1;
  for (int r = 0; r < nrd.rows(); ++r)
    if (nrd.motion_ids[r] == 34) row = r;
  REQUIRE(row >= 0);
  // Columns 19..119 are active; the value grows through the whole ON span.
  CHECK(nrd.value(row, 19) == 0);
  CHECK(nrd.value(row, 119) == 100);
  CHECK(nrd.value(row, 219) == 200);
}

TEST_CASE("NRD resets for an infrared sensor held ON") {
  auto [plan, layout] = default_plan();
  std::vector<SensorEvent> ev{{at(20.0), 3, true}, {at(120.0), 3, false}};
  auto X = binarize(ev, layout.size(), 300);
  auto nrd = nonresponse_duration(X, layout);
  CHECK(nrd.value(3, 119) == 0);
  CHECK(nrd.value(3, 129) == 10);
}

TEST_CASE("NRD is capped") {
  auto [plan, layout] = default_plan();
  std::vector<SensorEvent> ev{{at(1.0), 0, true}, {at(2.0), 0, false}};
  auto X = binarize(ev, layout.size(), 500);
  auto nrd = nonresponse_duration(X, layout, 100);
  CHECK(nrd.value(0, 100) == 99);
  CHECK(nrd.value(0, 101) == 100);
  CHECK(nrd.value(0, 499) == 100);
}

TEST_CASE("NRD matches a per-second replay on random traces") {
  auto [plan, layout] = default_plan();
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 15; ++trial) {
    const std::int64_t T = 4000;
    auto raw = oracle::random_trace(gen, layout.size(), T, 1500, 5.0 + 20.0 * (trial % 4), 2000.0 + 800.0 * trial);
    auto X = binarize(raw, layout.size(), T);
    const std::int64_t cap = trial % 3 == 0 ? 50 : kNrdCap;
    auto nrd = nonresponse_duration(X, layout, cap);
    auto want = oracle::nrd(dense_of(X), layout, cap);
    for (int r = 0; r < nrd.rows(); ++r)
      for (std::int64_t j = 0; j < T; ++j) REQUIRE(nrd.value(r, j) == want[r][j]);
  }
}

TEST_CASE("forgetting features: quiet window and stove left on") {
  auto [plan, layout] = default_plan();
  const std::int64_t H = 3 * 7200;
  std::vector<SensorEvent> ev{{clock(0, 2), 39, true}, {clock(0, 2, 10), 34, true}, {clock(0, 3, 50), 34, false},
                              {clock(0, 4), 39, false}};
  auto w = forgetting_features(ev, layout, H);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == ForgettingWindow{0, 0.0});
  CHECK(w[1].f1() == doctest::Approx(7200.0));
  CHECK(w[1].f2() == doctest::Approx(sensor_distance(layout, 39, 34)));
  CHECK(w[2] == ForgettingWindow{0, 0.0});
}

TEST_CASE("forgetting features: cooking near the stove stays close") {
  auto [plan, layout] = default_plan();
  std::vector<SensorEvent> ev{{clock(0, 0, 10), 39, true}, {clock(0, 0, 12), 11, true}, {clock(0, 0, 13), 11, false},
                              {clock(0, 0, 30), 39, false}};
  auto w = forgetting_features(ev, layout, 7200);
  REQUIRE(w.size() == 1);
  CHECK(w[0].f1() == doctest::Approx(20 * 60.0));
  CHECK(w[0].f2() <= 2.0);
  CHECK(w[0].f2() > 0.0);
}

TEST_CASE("forgetting features match a per-tick replay on random traces") {
  auto [plan, layout] = default_plan();
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 6; ++trial) {
    const std::int64_t H = 6 * 3600 + 1234;
    auto ev = oracle::random_trace(gen, layout.size(), H, 4000, 800.0 + 500.0 * trial, 3000.0);
    const std::int64_t window = trial % 2 ? 7200 : 1800;
    auto got = forgetting_features(ev, layout, H, window);
    auto want = oracle::forgetting(ev, layout, H, window);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].on_ticks == want[i].on_ticks);
      CHECK(got[i].max_distance == want[i].max_distance);
      CHECK(got[i].on_ticks <= 7200 * kTicksPerSecond * 4);
    }
  }
}

TEST_CASE("summarize_labels examples") {
  std::vector<AnomalyEpisode> ep{{AnomalyKind::Wandering, 1000, 1600}};
  auto y = summarize_labels(ep, kUnitSecond, 400);
  REQUIRE(y.intervals.size() == 1);
  // 1-based y[101..160] is 0-based [100, 159].
  CHECK(y.intervals[0] == Interval{100, 159});
  std::vector<AnomalyEpisode> f{{AnomalyKind::Forgetting, 3600 * kTicksPerSecond, 3 * 3600 * kTicksPerSecond}};
  auto z = summarize_labels(f, kUnitTwoHours, 86400);
  CHECK(z.length == 12);
  REQUIRE(z.intervals.size() == 1);
  CHECK(z.intervals[0] == Interval{0, 1});
  CHECK(summarize_labels({}, kUnitDay, 86400 * 5).intervals.empty());
  CHECK(summarize_labels({}, kUnitDay, 86400 * 5).length == 5);
}

TEST_CASE("sleep estimate from bed activations") {
  auto [plan, layout] = default_plan();
  std::vector<SensorEvent> night{{clock(0, 23), 34, true}, {clock(0, 23, 1), 34, false}, {clock(1, 7), 34, true},
                                 {clock(1, 7, 1), 34, false}};
  auto s = estimate_sleep(night, layout, 2);
  CHECK(s[0] == doctest::Approx(8.0));
  CHECK(s[1] == 0.0);
  auto broken = night;
  broken.push_back({clock(1, 3), 20, true});
  broken.push_back({clock(1, 3, 1), 20, false});
  std::sort(broken.begin(), broken.end(), event_order);
  auto b = estimate_sleep(broken, layout, 2);
  CHECK(b[0] == 0.0);
}

TEST_CASE("outing estimate from door activations") {
  auto [plan, layout] = default_plan();
  std::vector<SensorEvent> ev{{clock(0, 10), 40, true}, {clock(0, 10) + 30, 40, false}, {clock(0, 11), 40, true},
                              {clock(0, 11) + 30, 40, false}};
  CHECK(estimate_outings(ev, layout, 1)[0] == 1.0);
  auto busy = ev;
  busy.push_back({clock(0, 10, 20), 11, true});
  busy.push_back({clock(0, 10, 21), 11, false});
  std::sort(busy.begin(), busy.end(), event_order);
  CHECK(estimate_outings(busy, layout, 1)[0] == 0.0);
}
