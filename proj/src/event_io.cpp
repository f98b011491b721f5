#include "homesense/event_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace homesense {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = line.find(sep, pos);
    parts.push_back(line.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

int parse_int(const std::string& s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw std::invalid_argument(std::string("bad ") + what);
  return v;
}

}  // namespace

Tick parse_seconds(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty time");
  std::size_t dot = text.find('.');
  std::string whole = text.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  if (whole.empty() || frac.size() > 1 || (dot != std::string::npos && frac.empty()))
    throw std::invalid_argument("time must have at most one decimal: " + text);
  Tick w = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (ec != std::errc() || p != whole.data() + whole.size() || w < 0) throw std::invalid_argument("bad time: " + text);
  Tick f = 0;
  if (!frac.empty()) {
    if (frac[0] < '0' || frac[0] > '9') throw std::invalid_argument("bad time: " + text);
    f = frac[0] - '0';
  }
  return w * kTicksPerSecond + f;
}

std::string format_seconds(Tick t) {
  char buf[32];
  const char* sign = t < 0 ? "-" : "";
  Tick a = t < 0 ? -t : t;
  std::snprintf(buf, sizeof buf, "%s%lld.%lld", sign, static_cast<long long>(a / kTicksPerSecond),
                static_cast<long long>(a % kTicksPerSecond));
  return buf;
}

std::string format_event(const SensorEvent& e) {
  return format_seconds(e.time) + "," + std::to_string(e.sensor_id) + "," + (e.on ? "1" : "0");
}

void write_events(std::span<const SensorEvent> events, std::ostream& out) {
  out << kEventHeader << '\n';
  std::string buf;
  buf.reserve(1 << 16);
  char line[64];
  for (const auto& e : events) {
    int n = std::snprintf(line, sizeof line, "%lld.%lld,%d,%d\n", static_cast<long long>(e.time / kTicksPerSecond),
                          static_cast<long long>(e.time % kTicksPerSecond), e.sensor_id, e.on ? 1 : 0);
    buf.append(line, static_cast<std::size_t>(n));
    if (buf.size() > (1 << 16) - 64) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

SensorEvent parse_event_line(const std::string& raw, std::size_t line_number) {
  std::string line = strip_cr(raw);
  auto parts = split(line, ',');
  if (parts.size() != 3) throw ParseError(line_number, "expected 3 fields `time_s,sensor_id,state`");
  try {
    SensorEvent e;
    e.time = parse_seconds(parts[0]);
    e.sensor_id = parse_int(parts[1], "sensor id");
    if (e.sensor_id < 0) throw std::invalid_argument("negative sensor id");
    if (parts[2] == "1") e.on = true;
    else if (parts[2] == "0") e.on = false;
    else throw std::invalid_argument("state must be 0 or 1");
    return e;
  } catch (const std::invalid_argument& ex) {
    throw ParseError(line_number, ex.what());
  }
}

std::vector<SensorEvent> read_events(std::istream& in) {
  std::vector<SensorEvent> events;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1 && strip_cr(line) == kEventHeader) continue;
    if (line.empty()) continue;
    events.push_back(parse_event_line(line, n));
  }
  return events;
}

void write_episodes(std::span<const AnomalyEpisode> episodes, std::ostream& out) {
  out << "kind,start_seconds,end_seconds\n";
  for (const auto& e : episodes) out << to_string(e.kind) << ',' << format_seconds(e.start) << ',' << format_seconds(e.end) << '\n';
}

std::vector<AnomalyEpisode> read_episodes(std::istream& in) {
  std::vector<AnomalyEpisode> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (line.empty() || (n == 1 && line.rfind("kind,", 0) == 0)) continue;
    auto parts = split(line, ',');
    if (parts.size() != 3) throw ParseError(n, "expected `kind,start_seconds,end_seconds`");
    try {
      out.push_back({anomaly_kind_from_string(parts[0]), parse_seconds(parts[1]), parse_seconds(parts[2])});
    } catch (const std::invalid_argument& ex) {
      throw ParseError(n, ex.what());
    }
  }
  return out;
}

void write_activities(std::span<const ActivityInstance> activities, std::ostream& out) {
  out << "name,anchor,role,start_seconds,end_seconds,appliance_sensor\n";
  for (const auto& a : activities) {
    out << a.name << ',' << a.anchor << ',' << to_string(a.role) << ',' << format_seconds(a.start) << ','
        << format_seconds(a.end) << ',';
    if (a.appliance_sensor) out << *a.appliance_sensor;
    out << '\n';
  }
}

std::vector<ActivityInstance> read_activities(std::istream& in) {
  std::vector<ActivityInstance> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (line.empty() || (n == 1 && line.rfind("name,", 0) == 0)) continue;
    auto parts = split(line, ',');
    if (parts.size() != 6) throw ParseError(n, "expected 6 activity fields");
    try {
      ActivityInstance a;
      a.name = parts[0];
      a.anchor = parts[1];
      a.role = activity_role_from_string(parts[2]);
      a.start = parse_seconds(parts[3]);
      a.end = parse_seconds(parts[4]);
      if (!parts[5].empty()) a.appliance_sensor = parse_int(parts[5], "appliance sensor");
      out.push_back(std::move(a));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(n, ex.what());
    }
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::string buf(1 << 16, '\0');
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h = fnv1a(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())), h);
  }
  return hex64(h);
}

}  // namespace homesense
