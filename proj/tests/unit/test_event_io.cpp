#include <doctest.h>

#include <random>
#include <sstream>

#include "homesense/event_io.hpp"

using namespace homesense;

TEST_CASE("event line parsing") {
  auto e = parse_event_line("941130.1,10,1", 1);
  CHECK(e.time == 9411301);
  CHECK(e.sensor_id == 10);
  CHECK(e.on);
  auto f = parse_event_line("0.0,40,0", 7);
  CHECK(f == SensorEvent{0, 40, false});
}

TEST_CASE("clock arithmetic of a timestamp ten days in") {
  const Tick t = ticks_from_days(10) + (13 * 3600 + 45 * 60 + 30) * kTicksPerSecond + 1;
  CHECK(t == 9135301);
  CHECK(format_seconds(t) == "913530.1");
  CHECK(parse_seconds("913530.1") == t);
}

TEST_CASE("malformed lines report their line number") {
  try {
    std::istringstream in("x,y,z\n");
    read_events(in);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  std::istringstream bad(std::string(kEventHeader) + "\n1.0,3,1\n2.0,3\n");
  try {
    read_events(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_event_line("1.0,3,2", 4), ParseError);
  CHECK_THROWS_AS(parse_event_line("1.25,3,1", 4), ParseError);
  CHECK_THROWS_AS(parse_event_line("-1.0,3,1", 4), ParseError);
}

TEST_CASE("event files round-trip byte for byte") {
  std::mt19937_64 gen(3);
  std::vector<SensorEvent> events;
  Tick t = 0;
  for (int i = 0; i < 1000000; ++i) {
    t += static_cast<Tick>(gen() % 50);
    events.push_back({t, static_cast<int>(gen() % 41), (gen() & 1) != 0});
  }
  std::sort(events.begin(), events.end(), event_order);
  std::ostringstream a;
  write_events(events, a);
  std::istringstream in(a.str());
  auto back = read_events(in);
  CHECK(back == events);
  std::ostringstream b;
  write_events(back, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("seconds formatting keeps one decimal") {
  CHECK(format_seconds(0) == "0.0");
  CHECK(format_seconds(5) == "0.5");
  CHECK(format_seconds(123456789) == "12345678.9");
  for (Tick v : {Tick{0}, Tick{1}, Tick{99}, Tick{2799360000}}) CHECK(parse_seconds(format_seconds(v)) == v);
  CHECK(parse_seconds("12") == 120);
}

TEST_CASE("episode and checksum helpers") {
  std::vector<AnomalyEpisode> eps{{AnomalyKind::FallWalking, 15, 315}, {AnomalyKind::Forgetting, 1000, 90000}};
  std::ostringstream out;
  write_episodes(eps, out);
  std::istringstream in(out.str());
  CHECK(read_episodes(in) == eps);
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
}
