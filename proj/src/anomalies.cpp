#include "homesense/anomalies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homesense {

namespace {

bool overlaps(const AnomalyEpisode& a, const AnomalyEpisode& b) { return a.start < b.end && b.start < a.end; }

constexpr Tick kMonthTicks = ticks_from_days(kDaysPerMonth);

}  // namespace

const char* to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::SemiBedridden: return "semi_bedridden";
    case AnomalyKind::Housebound: return "housebound";
    case AnomalyKind::Forgetting: return "forgetting";
    case AnomalyKind::Wandering: return "wandering";
    case AnomalyKind::FallWalking: return "fall_walking";
    case AnomalyKind::FallStanding: return "fall_standing";
  }
  return "unknown";
}

AnomalyKind anomaly_kind_from_string(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  for (auto k : kAllAnomalyKinds)
    if (n == to_string(k)) return k;
  throw std::invalid_argument("unknown anomaly kind: " + name);
}

double monthly_rate(AnomalyKind kind, double m) {
  double r = 0.0;
  switch (kind) {
    case AnomalyKind::SemiBedridden: r = 1.0 / 20.0; break;
    case AnomalyKind::Housebound: r = 1.0 / 10.0; break;
    case AnomalyKind::Wandering: r = -1.86 * m + 56.0; break;
    case AnomalyKind::Forgetting: r = -m + 30.0; break;
    case AnomalyKind::FallWalking:
    case AnomalyKind::FallStanding: r = -m / 15.0 + 2.0; break;
  }
  return std::max(0.0, r);
}

std::vector<AnomalyEpisode> sample_episodes(AnomalyKind kind, const MmseTrajectory& mmse, int months, Rng& rng,
                                            const AnomalyParams& params, std::span<const AnomalyEpisode> exclude) {
  if (static_cast<std::size_t>(months) > mmse.monthly_values.size())
    throw std::invalid_argument("episode horizon exceeds the MMSE trajectory");
  std::vector<AnomalyEpisode> out;
  if (!params.is_enabled(kind)) return out;
  const auto& override_rate = params.rate_override[static_cast<int>(kind)];
  for (int m = 0; m < months; ++m) {
    const double value = mmse.at_month(m);
    const double rate = params.rate_scale * (override_rate ? *override_rate : monthly_rate(kind, value));
    const int count = rng.poisson(rate);
    const Tick month_start = m * kMonthTicks;
    for (int k = 0; k < count; ++k) {
      AnomalyEpisode e;
      e.kind = kind;
      switch (kind) {
        case AnomalyKind::SemiBedridden:
        case AnomalyKind::Housebound: {
          double mean = kind == AnomalyKind::SemiBedridden ? params.semi_bedridden_mean_days : params.housebound_mean_days;
          double extra = std::max(0.0, mean - params.weeks_min_days);
          std::int64_t days = params.weeks_min_days + (extra > 0 ? std::llround(rng.exponential(extra)) : 0);
          std::int64_t day = m * kDaysPerMonth + static_cast<std::int64_t>(rng.below(kDaysPerMonth));
          e.start = ticks_from_days(day);
          e.end = ticks_from_days(day + std::max<std::int64_t>(1, days));
          break;
        }
        case AnomalyKind::Wandering: {
          double mean_min = -0.31 * value + 9.8;
          double minutes = rng.truncated_normal(mean_min, 0.2 * mean_min, 1.0);
          e.start = month_start + static_cast<Tick>(rng.below(kMonthTicks));
          e.end = e.start + std::max<Tick>(1, std::llround(minutes * 60.0 * kTicksPerSecond));
          break;
        }
        case AnomalyKind::FallWalking:
        case AnomalyKind::FallStanding: {
          double seconds = rng.truncated_normal(params.fall_mean_s, 0.2 * params.fall_mean_s, 5.0);
          e.start = month_start + static_cast<Tick>(rng.below(kMonthTicks));
          e.end = e.start + std::max<Tick>(1, std::llround(seconds * kTicksPerSecond));
          break;
        }
        case AnomalyKind::Forgetting:
          e.start = month_start + static_cast<Tick>(rng.below(kMonthTicks));
          e.end = e.start + 1;
          break;
      }
      if (kind == AnomalyKind::SemiBedridden || kind == AnomalyKind::Housebound) {
        bool clash = std::any_of(out.begin(), out.end(), [&](const AnomalyEpisode& o) { return overlaps(o, e); }) ||
                     std::any_of(exclude.begin(), exclude.end(), [&](const AnomalyEpisode& o) { return overlaps(o, e); });
        if (clash) continue;
      }
      out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end(), [](const AnomalyEpisode& a, const AnomalyEpisode& b) { return a.start < b.start; });
  return out;
}

StatModifiers stat_modifiers_for(AnomalyKind kind, const AnomalyEpisode& episode) {
  StatModifiers m;
  m.first_day = static_cast<int>(episode.start / kTicksPerDay);
  m.last_day = static_cast<int>((episode.end + kTicksPerDay - 1) / kTicksPerDay) - 1;
  switch (kind) {
    case AnomalyKind::SemiBedridden: {
      ActivityTemplate nap;
      nap.name = "nap";
      nap.anchor = "bed";
      nap.start_hours = {14.0, 1.0};
      nap.duration_minutes = {40.0, 5.0};
      nap.frequency_per_day = 1.0;
      nap.role = ActivityRole::Nap;
      m.added_templates.push_back(nap);
      m.duration_shift_minutes["rest"] = 30.0;
      m.frequency_override["outing"] = 1.0 / 7.0;
      break;
    }
    case AnomalyKind::Housebound:
      m.frequency_override["phone"] = 1.0 / 3.0;
      m.frequency_override["outing"] = 1.0 / 14.0;
      break;
    default:
      throw std::invalid_argument(std::string("no schedule modifiers for anomaly kind ") + to_string(kind));
  }
  return m;
}

std::vector<TrajectoryPiece> inject_wandering(const AnomalyEpisode& episode, const FloorPlan& plan, Point origin,
                                              double speed_cm_s, Rng& rng, double max_pause_s) {
  if (episode.kind != AnomalyKind::Wandering) throw std::invalid_argument("inject_wandering needs a wandering episode");
  std::vector<Point> staging;
  for (const auto& [name, p] : plan.anchors) staging.push_back(p);
  if (staging.size() < 2) throw std::invalid_argument("wandering needs at least two anchors");

  std::vector<TrajectoryPiece> out;
  Tick t = episode.start;
  Point pos = origin;
  const Tick max_pause = ticks_from_seconds(max_pause_s);
  while (t < episode.end) {
    Point target;
    do {
      target = staging[rng.below(staging.size())];
    } while (distance(target, pos) < 0.5);
    WalkSegment w = plan_walk(pos, target, speed_cm_s, t);
    if (w.end >= episode.end) {
      w.to = w.position_at(episode.end);
      w.end = episode.end;
      out.emplace_back(w);
      break;
    }
    out.emplace_back(w);
    t = w.end;
    pos = target;
    Tick pause = std::min<Tick>(static_cast<Tick>(rng.below(static_cast<std::uint64_t>(max_pause) + 1)), episode.end - t);
    if (pause > 0) {
      Hold h;
      h.position = pos;
      h.start = t;
      h.end = t + pause;
      out.emplace_back(h);
      t += pause;
    }
  }
  return out;
}

FallInjection inject_fall(AnomalyKind kind, const WalkSegment& walk, Tick immobile_duration, Rng& rng,
                          bool at_destination) {
  if (immobile_duration <= 0) throw std::invalid_argument("fall immobile duration must be positive");
  FallInjection out;
  out.episode.kind = kind;
  Hold lying;
  lying.body_radius = kFallenRadius;
  lying.fallen = true;
  if (kind == AnomalyKind::FallWalking) {
    if (walk.end - walk.start <= 2 * kTicksPerSecond) throw std::invalid_argument("fall while walking needs a walk longer than 2 s");
    Tick tf = walk.start + 1 + static_cast<Tick>(rng.below(static_cast<std::uint64_t>(walk.end - walk.start - 1)));
    Point p = walk.position_at(tf);
    WalkSegment first = walk;
    first.to = p;
    first.end = tf;
    lying.position = p;
    lying.start = tf;
    lying.end = tf + immobile_duration;
    WalkSegment rest = walk;
    rest.from = p;
    rest.start = lying.end;
    rest.end = walk.end + immobile_duration;
    out.pieces = {first, lying, rest};
    out.episode.start = lying.start;
    out.episode.end = lying.end;
  } else if (kind == AnomalyKind::FallStanding) {
    if (at_destination) {
      lying.position = walk.to;
      lying.start = walk.end;
      lying.end = walk.end + immobile_duration;
      out.pieces = {walk, lying};
    } else {
      lying.position = walk.from;
      lying.start = walk.start;
      lying.end = walk.start + immobile_duration;
      WalkSegment moved = walk;
      moved.start += immobile_duration;
      moved.end += immobile_duration;
      out.pieces = {lying, moved};
    }
    out.episode.start = lying.start;
    out.episode.end = lying.end;
  } else {
    throw std::invalid_argument("inject_fall needs a fall kind");
  }
  return out;
}

std::optional<Tick> find_return_time(std::span<const TrajectoryPiece> pieces, Tick from, Point anchor, double radius) {
  auto it = std::lower_bound(pieces.begin(), pieces.end(), from,
                             [](const TrajectoryPiece& p, Tick t) { return piece_start(p) < t; });
  bool left = false;
  for (; it != pieces.end(); ++it) {
    if (const auto* h = std::get_if<Hold>(&*it)) {
      if (distance(h->position, anchor) > radius) left = true;
      else if (left) return h->start;
    } else if (std::get_if<Absence>(&*it)) {
      left = true;
    } else {
      const auto& w = std::get<WalkSegment>(*it);
      double t0 = 0, t1 = 0;
      if (!segment_within(w.from, w.to, anchor, radius, t0, t1)) {
        left = true;
        continue;
      }
      if (t0 > 0.0) {
        Tick entry = w.start + static_cast<Tick>(std::ceil(t0 * static_cast<double>(w.end - w.start)));
        return std::min(entry, w.end);
      }
      if (left) return w.start;
      if (t1 < 1.0) left = true;
    }
  }
  return std::nullopt;
}

std::optional<ForgettingInjection> inject_forgetting(std::span<const ActivityInstance> activities,
                                                     std::span<const TrajectoryPiece> pieces, const FloorPlan& plan,
                                                     Tick window_start, Tick window_end, Tick horizon, Rng& rng,
                                                     std::vector<char>& taken, double radius) {
  if (taken.size() < activities.size()) taken.resize(activities.size(), 0);
  std::vector<std::size_t> candidates;
  auto lo = std::lower_bound(activities.begin(), activities.end(), window_start,
                             [](const ActivityInstance& a, Tick t) { return a.start < t; });
  for (auto it = lo; it != activities.end() && it->start < window_end; ++it) {
    std::size_t i = static_cast<std::size_t>(it - activities.begin());
    if (it->appliance_sensor && !taken[i] && it->end < horizon) candidates.push_back(i);
  }
  if (candidates.empty()) return std::nullopt;
  std::size_t idx = candidates[rng.below(candidates.size())];
  const auto& act = activities[idx];
  Tick off = find_return_time(pieces, act.end, plan.anchor(act.anchor), radius).value_or(horizon);
  off = std::min(off, horizon);
  if (off <= act.end) return std::nullopt;
  taken[idx] = 1;
  ForgettingInjection out;
  out.activity_index = idx;
  out.switch_off = off;
  out.episode = {AnomalyKind::Forgetting, act.end, off};
  return out;
}

}  // namespace homesense
