#include "homesense/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace homesense {

namespace {

constexpr Tick kMinActivity = 60 * kTicksPerSecond;

Point piece_end_position(const TrajectoryPiece& p, Point fallback) {
  if (const auto* w = std::get_if<WalkSegment>(&p)) return w->to;
  if (const auto* h = std::get_if<Hold>(&p)) return h->position;
  return fallback;
}

void clip_piece(TrajectoryPiece& p, Tick horizon) {
  if (auto* w = std::get_if<WalkSegment>(&p)) {
    if (w->end > horizon) {
      w->to = w->position_at(horizon);
      w->end = horizon;
    }
  } else if (auto* h = std::get_if<Hold>(&p)) {
    h->end = std::min(h->end, horizon);
  } else {
    auto& a = std::get<Absence>(p);
    a.end = std::min(a.end, horizon);
  }
}

bool episode_order(const AnomalyEpisode& a, const AnomalyEpisode& b) {
  return a.kind != b.kind ? static_cast<int>(a.kind) < static_cast<int>(b.kind) : a.start < b.start;
}

}  // namespace

SimulationConfig SimulationConfig::defaults() {
  SimulationConfig c;
  auto [plan, layout] = default_plan();
  c.plan = std::move(plan);
  c.layout = std::move(layout);
  c.templates = default_templates();
  return c;
}

void SimulationConfig::validate() const {
  std::ostringstream problems;
  if (horizon_days < 1) problems << "horizon_days must be >= 1; ";
  if (!(walking_speed_cm_s > 0.0)) problems << "walking speed must be positive; ";
  if (!(door_open_s > 0.0)) problems << "door open time must be positive; ";
  if (!(motion.burst_min_s > 0.0 && motion.burst_max_s >= motion.burst_min_s)) problems << "bad motion burst range; ";
  if (anomalies.rate_scale < 0.0) problems << "anomaly rate scale must be >= 0; ";
  if (!(mmse.m0 >= 0.0 && mmse.m0 <= 30.0)) problems << "mmse m0 must lie in [0, 30]; ";
  try {
    validate_templates(templates);
  } catch (const std::invalid_argument& e) {
    problems << e.what() << "; ";
  }
  std::vector<std::string> anchors;
  for (const auto& t : templates) {
    anchors.push_back(t.anchor);
    if (t.appliance_sensor) {
      if (*t.appliance_sensor < 0 || *t.appliance_sensor >= layout.size() || !layout.at(*t.appliance_sensor).is_cost())
        problems << "template " << t.name << " binds a sensor that is not a cost sensor; ";
    }
  }
  for (const auto& v : homesense::validate(plan, layout, anchors)) problems << v.entity << ": " << v.message << "; ";
  std::string text = problems.str();
  if (!text.empty()) throw std::invalid_argument("invalid configuration: " + text);
}

std::vector<AnomalyEpisode> SimulationResult::episodes_of(AnomalyKind kind) const {
  std::vector<AnomalyEpisode> out;
  for (const auto& e : episodes)
    if (e.kind == kind) out.push_back(e);
  return out;
}

Realization realize(std::span<const ActivityInstance> schedule, const FloorPlan& plan, const std::string& bed_anchor,
                    double speed_cm_s, const PendingAnomalies& pending, const AnomalyParams& params, Rng& rng) {
  Realization out;
  if (schedule.empty()) return out;
  std::size_t wi = 0, fwi = 0, fsi = 0;
  int fs_mode = -1;  // 1 = at bed arrival, 0 = at walk origin
  Point pos = plan.anchor(schedule.front().anchor);
  Tick t = schedule.front().start;

  for (const auto& inst : schedule) {
    const Point anchor = plan.anchor(inst.anchor);
    if (wi < pending.wandering.size() && pending.wandering[wi].start <= t) {
      const auto& nominal = pending.wandering[wi++];
      AnomalyEpisode ep{AnomalyKind::Wandering, t, t + (nominal.end - nominal.start)};
      auto legs = inject_wandering(ep, plan, pos, speed_cm_s, rng, params.wandering_max_pause_s);
      for (auto& leg : legs) {
        pos = piece_end_position(leg, pos);
        out.pieces.push_back(std::move(leg));
      }
      t = ep.end;
      out.episodes.push_back(ep);
    }

    WalkSegment walk = plan_walk(pos, anchor, speed_cm_s, t);
    bool moved = walk.end > walk.start;
    bool injected = false;
    if (moved && fwi < pending.fall_walking.size() && pending.fall_walking[fwi].start <= t &&
        walk.end - walk.start > 2 * kTicksPerSecond) {
      const auto& nominal = pending.fall_walking[fwi++];
      auto fall = inject_fall(AnomalyKind::FallWalking, walk, nominal.end - nominal.start, rng);
      out.pieces.insert(out.pieces.end(), fall.pieces.begin(), fall.pieces.end());
      out.episodes.push_back(fall.episode);
      injected = true;
    } else if (moved && fsi < pending.fall_standing.size() && pending.fall_standing[fsi].start <= t) {
      if (fs_mode < 0) fs_mode = rng.bernoulli(params.bed_fall_probability) ? 1 : 0;
      bool at_bed = fs_mode == 1;
      if (!at_bed || inst.anchor == bed_anchor) {
        const auto& nominal = pending.fall_standing[fsi++];
        auto fall = inject_fall(AnomalyKind::FallStanding, walk, nominal.end - nominal.start, rng, at_bed);
        out.pieces.insert(out.pieces.end(), fall.pieces.begin(), fall.pieces.end());
        out.episodes.push_back(fall.episode);
        injected = true;
        fs_mode = -1;
      }
    }
    if (!injected && moved) out.pieces.emplace_back(walk);
    Tick arrival = out.pieces.empty() ? t : std::max(t, piece_end(out.pieces.back()));

    ActivityInstance act = inst;
    act.start = arrival;
    act.end = std::max(inst.end, arrival + kMinActivity);
    if (inst.is_outing()) {
      out.pieces.emplace_back(Absence{act.start, act.end});
    } else {
      Hold h;
      h.position = anchor;
      h.start = act.start;
      h.end = act.end;
      h.motion_interval_s = inst.motion_interval_s;
      out.pieces.emplace_back(h);
    }
    out.activities.push_back(std::move(act));
    t = out.activities.back().end;
    pos = anchor;
  }
  return out;
}

void emit_samples(const TrajectoryPiece& piece, const MotionParams& motion, Rng& rng,
                  const std::function<void(const PositionSample&)>& observe) {
  if (const auto* w = std::get_if<WalkSegment>(&piece)) {
    if (w->end <= w->start) return;
    for (Tick t = w->start; t <= w->end; ++t) observe({t, w->position_at(t), true, kUprightRadius, true});
    return;
  }
  if (const auto* a = std::get_if<Absence>(&piece)) {
    PositionSample s;
    s.time = a->start;
    s.present = false;
    observe(s);
    return;
  }
  const auto& h = std::get<Hold>(piece);
  if (h.fallen) {
    Tick burst = std::min<Tick>(ticks_from_seconds(motion.fall_motion_s), (h.end - h.start) / 2);
    for (Tick t = h.start; t < h.start + burst; ++t) observe({t, h.position, true, h.body_radius, true});
    observe({h.start + burst, h.position, false, h.body_radius, true});
    for (Tick t = h.end - burst; t < h.end; ++t) observe({t, h.position, true, h.body_radius, true});
    return;
  }
  observe({h.start, h.position, false, h.body_radius, true});
  if (h.motion_interval_s <= 0.0) return;
  double t = static_cast<double>(h.start) + rng.exponential(h.motion_interval_s) * kTicksPerSecond;
  for (;;) {
    Tick begin = static_cast<Tick>(std::ceil(t));
    Tick len = std::max<Tick>(1, ticks_from_seconds(rng.uniform(motion.burst_min_s, motion.burst_max_s)));
    if (begin + len >= h.end) break;
    for (Tick k = begin; k < begin + len; ++k) observe({k, h.position, true, h.body_radius, true});
    observe({begin + len, h.position, false, h.body_radius, true});
    t = static_cast<double>(begin + len) + rng.exponential(h.motion_interval_s) * kTicksPerSecond;
  }
}

SimulationResult simulate(const SimulationConfig& config) {
  std::vector<SensorEvent> events;
  auto result = simulate(config, [&](const SensorEvent& e) { events.push_back(e); });
  result.events = std::move(events);
  return result;
}

SimulationResult simulate(const SimulationConfig& config, const EventSink& sink) {
  config.validate();
  const std::uint64_t seed = config.seed;
  const Tick horizon = ticks_from_days(config.horizon_days);
  const int months = (config.horizon_days + kDaysPerMonth - 1) / kDaysPerMonth;

  SimulationResult result;
  result.horizon_days = config.horizon_days;
  result.mmse = simulate_mmse(seed, months, config.mmse);

  auto sample_kind = [&](AnomalyKind kind, std::span<const AnomalyEpisode> exclude = {}) {
    Rng rng = Rng::substream(seed, {stream_key("episodes"), static_cast<std::uint64_t>(kind)});
    return sample_episodes(kind, result.mmse, months, rng, config.anomalies, exclude);
  };
  auto semi = sample_kind(AnomalyKind::SemiBedridden);
  auto house = sample_kind(AnomalyKind::Housebound, semi);
  PendingAnomalies pending;
  pending.wandering = sample_kind(AnomalyKind::Wandering);
  pending.fall_walking = sample_kind(AnomalyKind::FallWalking);
  pending.fall_standing = sample_kind(AnomalyKind::FallStanding);
  auto forgetting = sample_kind(AnomalyKind::Forgetting);

  std::vector<StatModifiers> modifiers;
  for (const auto& e : semi) modifiers.push_back(stat_modifiers_for(AnomalyKind::SemiBedridden, e));
  for (const auto& e : house) modifiers.push_back(stat_modifiers_for(AnomalyKind::Housebound, e));

  std::vector<ActivityInstance> schedule;
  std::optional<Tick> earliest;
  for (int d = 0; d < config.horizon_days; ++d) {
    Rng rng = Rng::substream(seed, {stream_key("schedule"), static_cast<std::uint64_t>(d)});
    std::vector<StatModifiers> active;
    for (const auto& m : modifiers)
      if (m.active_on(d)) active.push_back(m);
    auto day = schedule_day(config.templates, d, active, rng, earliest);
    schedule.insert(schedule.end(), std::make_move_iterator(day.instances.begin()),
                    std::make_move_iterator(day.instances.end()));
    result.warnings.insert(result.warnings.end(), day.warnings.begin(), day.warnings.end());
    earliest = day.sleep_end;
  }

  std::string bed_anchor;
  for (const auto& t : config.templates)
    if (t.role == ActivityRole::Sleep) {
      bed_anchor = t.anchor;
      break;
    }
  Rng realize_rng = Rng::substream(seed, {stream_key("realize")});
  Realization real = realize(schedule, config.plan, bed_anchor, config.walking_speed_cm_s, pending, config.anomalies,
                             realize_rng);
  schedule.clear();
  schedule.shrink_to_fit();

  // Everything past the horizon is cut.
  auto& pieces = real.pieces;
  while (!pieces.empty() && piece_start(pieces.back()) >= horizon) pieces.pop_back();
  if (!pieces.empty()) clip_piece(pieces.back(), horizon);
  auto& acts = real.activities;
  while (!acts.empty() && acts.back().start >= horizon) acts.pop_back();
  if (!acts.empty()) acts.back().end = std::min(acts.back().end, horizon);

  std::vector<AnomalyEpisode> episodes;
  auto keep = [&](AnomalyEpisode e) {
    if (e.start >= horizon) return;
    e.end = std::min(e.end, horizon);
    episodes.push_back(e);
  };
  for (const auto& e : semi) keep(e);
  for (const auto& e : house) keep(e);
  for (const auto& e : real.episodes) keep(e);

  std::vector<Tick> switch_off(acts.size(), -1);
  {
    Rng rng = Rng::substream(seed, {stream_key("forgetting")});
    std::vector<char> taken(acts.size(), 0);
    std::vector<AnomalyEpisode> chosen;
    const Tick month = ticks_from_days(kDaysPerMonth);
    for (const auto& nominal : forgetting) {
      const Tick m0 = (nominal.start / month) * month;
      for (int attempt = 0; attempt < 8; ++attempt) {
        auto inj = inject_forgetting(acts, pieces, config.plan, m0, m0 + month, horizon, rng, taken,
                                     config.anomalies.forgetting_return_radius);
        if (!inj) break;
        bool clash = std::any_of(chosen.begin(), chosen.end(), [&](const AnomalyEpisode& o) {
          return o.start < inj->episode.end && inj->episode.start < o.end;
        });
        if (clash) continue;
        switch_off[inj->activity_index] = inj->switch_off;
        chosen.push_back(inj->episode);
        break;
      }
    }
    for (const auto& e : chosen) keep(e);
  }
  std::sort(episodes.begin(), episodes.end(), episode_order);
  result.episodes = std::move(episodes);

  std::vector<ApplianceWindow> windows;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (!acts[i].appliance_sensor) continue;
    Tick end = switch_off[i] >= 0 ? switch_off[i] : acts[i].end;
    windows.push_back({*acts[i].appliance_sensor, acts[i].start, end});
  }

  SensorEngine engine(config.layout, [&](const SensorEvent& e) {
    ++result.event_count;
    if (e.on) ++result.activation_count;
    sink(e);
  }, config.door_open_s);
  for (const auto& w : merge_windows(std::move(windows))) engine.appliance_window(w.sensor_id, w.start, w.end);
  for (const auto& p : pieces) {
    if (const auto* a = std::get_if<Absence>(&p)) {
      engine.door_crossing(a->start);
      if (a->end < horizon) engine.door_crossing(a->end);
    }
  }
  Rng motion_rng = Rng::substream(seed, {stream_key("motion")});
  auto observe = [&](const PositionSample& s) { engine.observe(s); };
  for (const auto& p : pieces) emit_samples(p, config.motion, motion_rng, observe);
  engine.finish(horizon);

  result.activities = std::move(acts);
  return result;
}

}  // namespace homesense
