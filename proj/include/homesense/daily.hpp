#pragma once

#include <span>
#include <vector>

#include "homesense/activity.hpp"
#include "homesense/floor_plan.hpp"
#include "homesense/sensor_engine.hpp"

namespace homesense {

struct DailySeries {
  std::vector<double> sleep_hours;
  std::vector<double> outings;
};

// Sleep: from one bed-sensor activation to the next, longer than 60 s with no other motion
// sensor activated in between; credited to the day the interval starts.
std::vector<double> estimate_sleep(std::span<const SensorEvent> events, const SensorLayout& layout, int days);

// Outing: a door activation whose next door activation comes more than 60 s later with no
// other motion sensor activated in between.
std::vector<double> estimate_outings(std::span<const SensorEvent> events, const SensorLayout& layout, int days);

DailySeries estimate_daily(std::span<const SensorEvent> events, const SensorLayout& layout, int days);

// Reference values from realized activities.
DailySeries daily_ground_truth(std::span<const ActivityInstance> activities, int days);

double mean_absolute_error(std::span<const double> a, std::span<const double> b);

}  // namespace homesense
