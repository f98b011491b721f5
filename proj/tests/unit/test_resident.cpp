#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "homesense/activity.hpp"
#include "homesense/anomalies.hpp"
#include "homesense/mmse.hpp"
#include "homesense/walk.hpp"

using namespace homesense;

TEST_CASE("MMSE without noise or drift stays at m0") {
  auto m = simulate_mmse(3, 50, {24.0, 0.0, 0.0});
  for (double v : m.monthly_values) CHECK(v == 24.0);
}

TEST_CASE("MMSE without noise reaches 19.5 after 108 months") {
  auto m = simulate_mmse(1, 108, {29.0, 9.5 / 108.0, 0.0});
  CHECK(m.monthly_values.front() == 29.0);
  CHECK(std::abs(m.monthly_values.back() - 19.5) <= 0.01);
}

TEST_CASE("MMSE endpoint averaged over seeds") {
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) sum += simulate_mmse(seed, 108).monthly_values.back();
  CHECK(std::abs(sum / 1000.0 - 19.5) <= 0.1);
}

TEST_CASE("MMSE is reproducible, clipped and validated") {
  CHECK(simulate_mmse(9, 108).monthly_values == simulate_mmse(9, 108).monthly_values);
  CHECK(simulate_mmse(9, 108).monthly_values != simulate_mmse(10, 108).monthly_values);
  auto m = simulate_mmse(2, 400, {1.0, 0.5, 2.0});
  for (double v : m.monthly_values) {
    CHECK(v >= 0.0);
    CHECK(v <= 30.0);
  }
  CHECK_THROWS(simulate_mmse(1, 10, {31.0, 0.0, 0.0}));
  CHECK_THROWS(simulate_mmse(1, 0));
}

TEST_CASE("plan_walk timing") {
  auto w = plan_walk({1.0, 1.0}, {1.0, 7.875}, 68.75, 100);
  CHECK(w.start == 100);
  CHECK(std::abs(seconds_from_ticks(w.end - w.start) - 10.0) <= 0.1);
  auto z = plan_walk({2.0, 2.0}, {2.0, 2.0}, 68.75, 50);
  CHECK(z.end == z.start);
  CHECK_THROWS(plan_walk({0, 0}, {1, 1}, 0.0, 0));
}

TEST_CASE("plan_walk samples every tick and ends at the destination") {
  auto w = plan_walk({0.3, 0.4}, {4.1, 9.7}, 68.75, 1234);
  auto ts = w.timestamps();
  auto pts = w.polyline();
  REQUIRE(ts.size() == pts.size());
  for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] - ts[i - 1] == 1);
  CHECK(distance(pts.back(), w.to) <= 0.30);
  const double exact = distance(w.from, w.to) / 0.6875;
  CHECK(std::abs(seconds_from_ticks(w.end - w.start) - exact) <= 0.1);
  // Consecutive points are no farther apart than one tick of walking.
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(distance(pts[i - 1], pts[i]) <= 0.06875 + 1e-9);
}

namespace {

std::vector<ActivityTemplate> sleep_only() {
  for (const auto& t : default_templates())
    if (t.role == ActivityRole::Sleep) return {t};
  return {};
}

}  // namespace

TEST_CASE("sleep-only schedule: one sleep a day with the template mean duration") {
  auto templates = sleep_only();
  Rng rng(11);
  double total = 0.0;
  const int days = 10000;
  for (int d = 0; d < days; ++d) {
    auto s = schedule_day(templates, d, {}, rng);
    int sleeps = 0;
    for (const auto& a : s.instances) {
      if (a.role != ActivityRole::Sleep) continue;
      ++sleeps;
      total += seconds_from_ticks(a.end - a.start) / 60.0;
    }
    CHECK(sleeps == 1);
  }
  const double mean = total / days;
  CHECK(std::abs(mean - templates[0].duration_minutes.mean) <= 0.02 * templates[0].duration_minutes.mean);
}

TEST_CASE("schedule_day output is ordered, contiguous and bounded") {
  auto templates = default_templates();
  Rng rng(5);
  std::optional<Tick> earliest;
  for (int d = 0; d < 400; ++d) {
    auto s = schedule_day(templates, d, {}, rng, earliest);
    REQUIRE(!s.instances.empty());
    const Tick lo = earliest.value_or(ticks_from_days(d));
    CHECK(s.instances.front().start == lo);
    for (std::size_t i = 0; i < s.instances.size(); ++i) {
      const auto& a = s.instances[i];
      CHECK(a.start < a.end);
      if (i > 0) CHECK(a.start == s.instances[i - 1].end);
      if (i + 1 < s.instances.size()) CHECK(a.end <= ticks_from_days(d + 1));
    }
    CHECK(s.instances.back().role == ActivityRole::Sleep);
    CHECK(s.instances.back().start < ticks_from_days(d + 1));
    CHECK(s.sleep_end == s.instances.back().end);
    earliest = s.sleep_end;
  }
}

TEST_CASE("per-activity frequency and duration match template means over many days") {
  auto templates = default_templates();
  Rng rng(21);
  const int days = 10000;
  std::map<std::string, double> count, minutes;
  for (int d = 0; d < days; ++d) {
    auto s = schedule_day(templates, d, {}, rng);
    for (const auto& a : s.instances) {
      count[a.name] += 1;
      minutes[a.name] += seconds_from_ticks(a.end - a.start) / 60.0;
    }
  }
  for (const char* name : {"outing", "toilet", "cooking", "tv", "refrigerator", "phone", "breakfast", "dinner"}) {
    const ActivityTemplate* t = nullptr;
    for (const auto& x : templates)
      if (x.name == name) t = &x;
    REQUIRE(t);
    const double freq = count[name] / days;
    const double dur = minutes[name] / count[name];
    CHECK_MESSAGE(std::abs(freq - t->frequency_per_day) <= 0.02 * t->frequency_per_day, name, " frequency ", freq);
    CHECK_MESSAGE(std::abs(dur - t->duration_minutes.mean) <= 0.02 * t->duration_minutes.mean, name, " duration ", dur);
  }
}

TEST_CASE("outing frequency override of one per fortnight") {
  auto templates = default_templates();
  AnomalyEpisode ep{AnomalyKind::Housebound, 0, ticks_from_days(10000)};
  std::vector<StatModifiers> mods{stat_modifiers_for(AnomalyKind::Housebound, ep)};
  Rng rng(8);
  double outings = 0, phones = 0;
  const int days = 10000;
  for (int d = 0; d < days; ++d) {
    for (const auto& a : schedule_day(templates, d, mods, rng).instances) {
      outings += a.role == ActivityRole::Outing;
      phones += a.name == "phone";
    }
  }
  CHECK(std::abs(outings / days - 1.0 / 14.0) <= 0.2 / 14.0);
  CHECK(std::abs(phones / days - 1.0 / 3.0) <= 0.2 / 3.0);
}

TEST_CASE("zero-frequency templates are never instantiated") {
  auto templates = default_templates();
  for (auto& t : templates)
    if (t.name == "phone") t.frequency_per_day = 0.0;
  Rng rng(4);
  for (int d = 0; d < 500; ++d)
    for (const auto& a : schedule_day(templates, d, {}, rng).instances) CHECK(a.name != "phone");
}

TEST_CASE("modifiers outside their day range leave the schedule unchanged") {
  auto templates = default_templates();
  AnomalyEpisode ep{AnomalyKind::SemiBedridden, ticks_from_days(50), ticks_from_days(60)};
  std::vector<StatModifiers> mods{stat_modifiers_for(AnomalyKind::SemiBedridden, ep)};
  for (int d : {0, 10, 49, 60, 75}) {
    Rng a(77 + d), b(77 + d);
    auto x = schedule_day(templates, d, {}, a);
    auto y = schedule_day(templates, d, mods, b);
    REQUIRE(x.instances.size() == y.instances.size());
    for (std::size_t i = 0; i < x.instances.size(); ++i) {
      CHECK(x.instances[i].name == y.instances[i].name);
      CHECK(x.instances[i].start == y.instances[i].start);
      CHECK(x.instances[i].end == y.instances[i].end);
    }
  }
}

TEST_CASE("template validation") {
  CHECK_THROWS(validate_templates({}));
  auto t = default_templates();
  t.erase(t.begin());  // drops sleep
  CHECK_THROWS(validate_templates(t));
  auto u = default_templates();
  u[1].duration_minutes.mean = 0.0;
  CHECK_THROWS(validate_templates(u));
}
