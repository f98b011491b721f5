#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "homesense/activity.hpp"
#include "homesense/anomalies.hpp"
#include "homesense/sensor_engine.hpp"

namespace homesense {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr const char* kEventHeader = "time_s,sensor_id,state";

// Canonical CSV: header, then one `time_s,sensor_id,state` row per event, time with one decimal.
void write_events(std::span<const SensorEvent> events, std::ostream& out);
std::vector<SensorEvent> read_events(std::istream& in);
SensorEvent parse_event_line(const std::string& line, std::size_t line_number);
std::string format_event(const SensorEvent& e);

// Decimal seconds with at most one fractional digit, parsed without rounding error.
Tick parse_seconds(const std::string& text);
std::string format_seconds(Tick t);

void write_episodes(std::span<const AnomalyEpisode> episodes, std::ostream& out);
std::vector<AnomalyEpisode> read_episodes(std::istream& in);

void write_activities(std::span<const ActivityInstance> activities, std::ostream& out);
std::vector<ActivityInstance> read_activities(std::istream& in);

// FNV-1a over bytes; used for artifact checksums.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
std::string file_checksum(const std::string& path);

}  // namespace homesense
