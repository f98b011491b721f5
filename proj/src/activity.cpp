#include "homesense/activity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace homesense {

namespace {

constexpr Tick kMinute = 60 * kTicksPerSecond;
constexpr Tick kMinActivity = kMinute;
constexpr Tick kOutingMargin = 2 * kMinute;
constexpr Tick kIdleLimit = 5 * kMinute;

Tick hours_to_ticks(double h) { return static_cast<Tick>(std::llround(h * 3600.0 * kTicksPerSecond)); }
Tick minutes_to_ticks(double m) { return static_cast<Tick>(std::llround(m * 60.0 * kTicksPerSecond)); }

Tick sample_duration(const ActivityTemplate& t, Rng& rng) {
  double minutes = rng.truncated_normal(t.duration_minutes.mean, t.duration_minutes.sd, 1.0);
  return std::max(minutes_to_ticks(minutes), kMinActivity + 1);
}

ActivityInstance make_instance(const ActivityTemplate& t, Tick start, Tick end) {
  ActivityInstance a;
  a.name = t.name;
  a.anchor = t.anchor;
  a.role = t.role;
  a.start = start;
  a.end = end;
  a.appliance_sensor = t.appliance_sensor;
  a.motion_interval_s = t.motion_interval_s;
  return a;
}

}  // namespace

const char* to_string(ActivityRole role) {
  switch (role) {
    case ActivityRole::Sleep: return "sleep";
    case ActivityRole::Nap: return "nap";
    case ActivityRole::Outing: return "outing";
    case ActivityRole::Meal: return "meal";
    case ActivityRole::Appliance: return "appliance";
    case ActivityRole::Other: return "other";
    case ActivityRole::Rest: return "rest";
  }
  return "unknown";
}

ActivityRole activity_role_from_string(const std::string& name) {
  for (auto r : {ActivityRole::Sleep, ActivityRole::Nap, ActivityRole::Outing, ActivityRole::Meal,
                 ActivityRole::Appliance, ActivityRole::Other, ActivityRole::Rest}) {
    if (name == to_string(r)) return r;
  }
  throw std::invalid_argument("unknown activity role: " + name);
}

int ActivityTemplate::priority() const {
  switch (role) {
    case ActivityRole::Sleep: return 0;
    case ActivityRole::Outing: return 1;
    case ActivityRole::Meal:
    case ActivityRole::Nap: return 2;
    case ActivityRole::Appliance: return 3;
    case ActivityRole::Other: return 4;
    case ActivityRole::Rest: return 5;
  }
  return 6;
}

std::vector<ActivityTemplate> apply_modifiers(std::span<const ActivityTemplate> templates,
                                              std::span<const StatModifiers> modifiers, int day) {
  std::vector<ActivityTemplate> out(templates.begin(), templates.end());
  for (const auto& m : modifiers) {
    if (!m.active_on(day)) continue;
    for (auto& t : out) {
      if (auto it = m.duration_shift_minutes.find(t.name); it != m.duration_shift_minutes.end())
        t.duration_minutes.mean += it->second;
      if (auto it = m.frequency_multiplier.find(t.name); it != m.frequency_multiplier.end())
        t.frequency_per_day *= it->second;
      if (auto it = m.frequency_override.find(t.name); it != m.frequency_override.end())
        t.frequency_per_day = it->second;
    }
    out.insert(out.end(), m.added_templates.begin(), m.added_templates.end());
  }
  return out;
}

void validate_templates(std::span<const ActivityTemplate> templates) {
  if (templates.empty()) throw std::invalid_argument("activity template list is empty");
  bool sleep = false;
  for (const auto& t : templates) {
    if (t.name.empty()) throw std::invalid_argument("activity template without a name");
    if (!(t.duration_minutes.mean > 0.0)) throw std::invalid_argument("template " + t.name + ": duration mean must be > 0");
    if (t.duration_minutes.sd < 0.0 || t.start_hours.sd < 0.0)
      throw std::invalid_argument("template " + t.name + ": negative standard deviation");
    if (t.frequency_per_day < 0.0) throw std::invalid_argument("template " + t.name + ": frequency must be >= 0");
    if (t.motion_interval_s < 0.0) throw std::invalid_argument("template " + t.name + ": motion interval must be >= 0");
    if (t.role == ActivityRole::Sleep) sleep = true;
  }
  if (!sleep) throw std::invalid_argument("a sleep template is required");
}

DaySchedule schedule_day(std::span<const ActivityTemplate> templates, int day_index,
                         std::span<const StatModifiers> modifiers, Rng& rng, std::optional<Tick> earliest) {
  validate_templates(templates);
  const auto eff = apply_modifiers(templates, modifiers, day_index);
  const Tick day_start = ticks_from_days(day_index);
  const Tick lo = earliest.value_or(day_start);

  DaySchedule out;
  const ActivityTemplate* sleep = nullptr;
  const ActivityTemplate* rest = nullptr;
  for (const auto& t : eff) {
    if (t.role == ActivityRole::Sleep && !sleep) sleep = &t;
    if (t.role == ActivityRole::Rest && !rest) rest = &t;
  }

  Tick sleep_start = day_start + hours_to_ticks(rng.normal(sleep->start_hours.mean, sleep->start_hours.sd));
  // a night's sleep starts on its own calendar day
  sleep_start = std::min(sleep_start, day_start + kTicksPerDay - kMinActivity);
  sleep_start = std::max(sleep_start, lo + kMinActivity);
  const Tick sleep_end = sleep_start + sample_duration(*sleep, rng);

  std::vector<std::size_t> order(eff.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eff[a].priority() < eff[b].priority(); });

  std::vector<ActivityInstance> placed;  // kept sorted by start
  for (std::size_t idx : order) {
    const auto& t = eff[idx];
    if (&t == sleep) continue;
    int count = 0;
    if (t.frequency_per_day > 0.0)
      count = (t.role == ActivityRole::Meal || t.role == ActivityRole::Nap) ? 1 : rng.poisson(t.frequency_per_day);
    for (int k = 0; k < count; ++k) {
      const Tick want = day_start + hours_to_ticks(rng.normal(t.start_hours.mean, t.start_hours.sd));
      const Tick dur = sample_duration(t, rng);
      const bool outing = t.is_outing();

      // Scan free gaps between placed instances; outings keep a margin on both sides.
      Tick best = -1, best_dist = 0;
      bool exact = false;
      Tick prev_end = lo;
      bool prev_outing = false;
      for (std::size_t i = 0; i <= placed.size() && !exact; ++i) {
        Tick g0 = prev_end + ((outing || prev_outing) && i > 0 ? kOutingMargin : 0);
        Tick g1;
        if (i < placed.size()) g1 = placed[i].start - ((outing || placed[i].is_outing()) ? kOutingMargin : 0);
        else g1 = sleep_start - (outing ? kOutingMargin : 0);
        if (g1 - g0 >= dur) {
          Tick pos = std::clamp(want, g0, g1 - dur);
          Tick dist = std::llabs(pos - want);
          if (dist == 0) exact = true;
          if (best < 0 || dist < best_dist) {
            best = pos;
            best_dist = dist;
          }
        }
        if (i < placed.size()) {
          prev_end = placed[i].end;
          prev_outing = placed[i].is_outing();
        }
      }
      if (best < 0) {
        out.warnings.push_back("day " + std::to_string(day_index) + ": dropped " + t.name + " (no free slot)");
        continue;
      }
      auto inst = make_instance(t, best, best + dur);
      auto pos = std::upper_bound(placed.begin(), placed.end(), inst.start,
                                  [](Tick s, const ActivityInstance& a) { return s < a.start; });
      placed.insert(pos, std::move(inst));
    }
  }

  ActivityTemplate rest_filler;
  rest_filler.name = kRestFiller;
  rest_filler.role = ActivityRole::Rest;
  rest_filler.anchor = rest ? rest->anchor : sleep->anchor;
  rest_filler.motion_interval_s = rest ? rest->motion_interval_s : 0.0;

  Tick cursor = lo;
  const ActivityInstance* prev = nullptr;
  auto fill = [&](Tick until) {
    Tick gap = until - cursor;
    if (gap <= 0) return;
    if (gap < kIdleLimit && prev && !prev->is_outing()) {
      ActivityTemplate idle = rest_filler;
      idle.name = kIdleFiller;
      idle.anchor = prev->anchor;
      out.instances.push_back(make_instance(idle, cursor, until));
    } else {
      out.instances.push_back(make_instance(rest_filler, cursor, until));
    }
    cursor = until;
  };
  for (auto& inst : placed) {
    fill(inst.start);
    out.instances.push_back(inst);
    prev = &inst;
    cursor = inst.end;
  }
  fill(sleep_start);
  out.instances.push_back(make_instance(*sleep, sleep_start, sleep_end));
  out.sleep_end = sleep_end;
  return out;
}

std::vector<ActivityTemplate> default_templates() {
  auto t = [](std::string name, std::string anchor, double sh, double ssd, double dm, double dsd, double freq,
              ActivityRole role, std::optional<int> appliance, double motion) {
    ActivityTemplate a;
    a.name = std::move(name);
    a.anchor = std::move(anchor);
    a.start_hours = {sh, ssd};
    a.duration_minutes = {dm, dsd};
    a.frequency_per_day = freq;
    a.role = role;
    a.appliance_sensor = appliance;
    a.motion_interval_s = motion;
    return a;
  };
  using R = ActivityRole;
  return {
      t("sleep", "bed", 23.0, 0.5, 480.0, 60.0, 1.0, R::Sleep, std::nullopt, 0.0),
      t("outing", "entrance", 13.0, 3.0, 45.0, 15.0, 4.0, R::Outing, std::nullopt, 0.0),
      t("breakfast", "dining_table", 7.5, 0.5, 20.0, 5.0, 1.0, R::Meal, std::nullopt, 60.0),
      t("lunch", "dining_table", 12.0, 0.5, 25.0, 5.0, 1.0, R::Meal, std::nullopt, 60.0),
      t("dinner", "dining_table", 18.5, 0.5, 30.0, 5.0, 1.0, R::Meal, std::nullopt, 60.0),
      t("cooking", "kitchen_stove", 12.0, 4.0, 20.0, 6.0, 2.0, R::Appliance, 39, 60.0),
      t("dish_washing", "kitchen_sink", 13.0, 4.0, 8.0, 2.5, 2.0, R::Appliance, 36, 60.0),
      t("washing", "washbasin", 12.0, 5.0, 5.0, 1.5, 2.0, R::Appliance, 37, 60.0),
      t("tv", "sofa", 16.0, 4.0, 60.0, 20.0, 2.0, R::Appliance, 38, 60.0),
      t("toilet", "toilet", 12.0, 5.0, 5.0, 1.5, 5.0, R::Other, std::nullopt, 60.0),
      t("phone", "phone", 14.0, 4.0, 10.0, 3.0, 1.0, R::Other, std::nullopt, 60.0),
      t("refrigerator", "refrigerator", 12.0, 4.0, 2.0, 0.5, 3.0, R::Other, std::nullopt, 60.0),
      t("cupboard", "cupboard", 12.0, 4.0, 3.0, 1.0, 1.0, R::Other, std::nullopt, 60.0),
      t("trash", "trash_box", 12.0, 5.0, 1.5, 0.3, 1.0, R::Other, std::nullopt, 60.0),
      t("dressing", "wardrobe", 8.0, 2.0, 5.0, 1.5, 1.0, R::Other, std::nullopt, 60.0),
      t("laundry", "washing_machine", 10.0, 2.0, 10.0, 3.0, 0.3, R::Other, std::nullopt, 60.0),
      t("rest", "sofa", 15.0, 4.0, 30.0, 10.0, 1.0, R::Rest, std::nullopt, 60.0),
  };
}

}  // namespace homesense
