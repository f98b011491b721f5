#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homesense/rng.hpp"
#include "homesense/time.hpp"

namespace homesense {

enum class ActivityRole { Sleep, Nap, Outing, Meal, Appliance, Other, Rest };

const char* to_string(ActivityRole role);
ActivityRole activity_role_from_string(const std::string& name);

struct NormalLaw {
  double mean = 0.0;
  double sd = 0.0;
};

struct ActivityTemplate {
  std::string name;
  std::string anchor;
  NormalLaw start_hours;       // time of day
  NormalLaw duration_minutes;
  double frequency_per_day = 1.0;
  ActivityRole role = ActivityRole::Other;
  std::optional<int> appliance_sensor;
  double motion_interval_s = 0.0;  // mean gap between in-place movements, 0 = still

  bool is_outing() const { return role == ActivityRole::Outing; }
  bool is_sleep_segment() const { return role == ActivityRole::Sleep || role == ActivityRole::Nap; }
  // Lower value wins when instances compete for time.
  int priority() const;
};

struct ActivityInstance {
  std::string name;
  std::string anchor;
  ActivityRole role = ActivityRole::Other;
  Tick start = 0;
  Tick end = 0;
  std::optional<int> appliance_sensor;
  double motion_interval_s = 0.0;

  bool is_outing() const { return role == ActivityRole::Outing; }
  bool is_sleep_segment() const { return role == ActivityRole::Sleep || role == ActivityRole::Nap; }
};

struct StatModifiers {
  std::map<std::string, double> duration_shift_minutes;
  std::map<std::string, double> frequency_multiplier;
  std::map<std::string, double> frequency_override;
  std::vector<ActivityTemplate> added_templates;
  int first_day = 0;
  int last_day = -1;  // inclusive; empty range when last_day < first_day

  bool active_on(int day) const { return day >= first_day && day <= last_day; }
};

// Templates with every modifier active on `day` applied in order.
std::vector<ActivityTemplate> apply_modifiers(std::span<const ActivityTemplate> templates,
                                              std::span<const StatModifiers> modifiers, int day);

struct DaySchedule {
  std::vector<ActivityInstance> instances;
  std::vector<std::string> warnings;
  Tick sleep_end = 0;  // end of the night sleep, i.e. start of the next day's schedule
};

inline constexpr const char* kRestFiller = "rest";
inline constexpr const char* kIdleFiller = "idle";

// Builds one day from `earliest` (the previous night's wake-up, or the day start) through the
// night's sleep, which is the final instance and may run past midnight.
DaySchedule schedule_day(std::span<const ActivityTemplate> templates, int day_index,
                         std::span<const StatModifiers> modifiers, Rng& rng,
                         std::optional<Tick> earliest = std::nullopt);

std::vector<ActivityTemplate> default_templates();

void validate_templates(std::span<const ActivityTemplate> templates);

}  // namespace homesense
