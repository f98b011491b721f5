#include "homesense/floor_plan.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace homesense {

const char* to_string(SensorKind kind) {
  switch (kind) {
    case SensorKind::InfraredMotion: return "infrared_motion";
    case SensorKind::Pressure: return "pressure";
    case SensorKind::Door: return "door";
    case SensorKind::Flow: return "flow";
    case SensorKind::Power: return "power";
  }
  return "unknown";
}

SensorKind sensor_kind_from_string(const std::string& name) {
  for (auto k : {SensorKind::InfraredMotion, SensorKind::Pressure, SensorKind::Door, SensorKind::Flow,
                 SensorKind::Power}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown sensor kind: " + name);
}

const Point& FloorPlan::anchor(const std::string& name) const {
  auto it = anchors.find(name);
  if (it == anchors.end()) throw std::out_of_range("unknown anchor: " + name);
  return it->second;
}

const SensorSpec& SensorLayout::at(int id) const {
  if (id < 0 || id >= size() || sensors[id].id != id) {
    auto it = std::find_if(sensors.begin(), sensors.end(), [id](const SensorSpec& s) { return s.id == id; });
    if (it == sensors.end()) throw std::out_of_range("unknown sensor id " + std::to_string(id));
    return *it;
  }
  return sensors[id];
}

std::vector<int> SensorLayout::motion_sensor_ids() const {
  std::vector<int> ids;
  for (const auto& s : sensors)
    if (s.is_motion()) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::optional<int> SensorLayout::sensor_for_appliance(const std::string& anchor) const {
  for (const auto& s : sensors)
    if (s.is_cost() && s.appliance == anchor) return s.id;
  return std::nullopt;
}

std::pair<FloorPlan, SensorLayout> default_plan() {
  FloorPlan plan;
  plan.width = 5.0;
  plan.height = 12.0;
  plan.furniture = {
      {"water_closet", {4.0, 0.0, 5.0, 1.2}},
      {"washing_machine", {4.2, 1.4, 5.0, 2.1}},
      {"refrigerator", {4.3, 2.4, 5.0, 3.1}},
      {"kitchen_stove", {4.4, 3.3, 5.0, 4.0}},
      {"cupboard", {0.0, 3.0, 0.5, 4.5}},
      {"trash_box", {0.0, 4.6, 0.4, 5.0}},
      {"dining_table", {1.9, 5.6, 3.3, 6.6}},
      {"chair", {1.5, 5.8, 1.85, 6.4}},
      {"chair", {3.35, 5.8, 3.7, 6.4}},
      {"wardrobe", {0.0, 7.6, 0.5, 9.0}},
      {"bed", {3.9, 7.6, 5.0, 9.6}},
      {"sofa", {1.8, 10.0, 3.4, 10.5}},
  };
  plan.anchors = {
      {"entrance", {0.6, 0.35}},
      {"toilet", {3.7, 0.6}},
      {"washbasin", {3.2, 1.6}},
      {"washing_machine", {3.9, 1.75}},
      {"refrigerator", {3.95, 2.75}},
      {"kitchen_stove", {4.05, 3.65}},
      {"kitchen_sink", {4.05, 4.45}},
      {"cupboard", {0.85, 3.75}},
      {"trash_box", {0.75, 4.8}},
      {"dining_table", {2.5, 5.3}},
      {"wardrobe", {0.85, 8.3}},
      {"bed", {4.3, 7.95}},
      {"phone", {1.9, 9.3}},
      {"sofa", {2.6, 10.8}},
  };
  plan.entrance = {0.6, 0.0};

  SensorLayout layout;
  const double xs[] = {0.7, 1.9, 3.1, 4.3};
  const double ys[] = {0.5, 1.8, 3.1, 4.4, 5.7, 7.0, 8.3, 9.6, 10.9};
  int id = 0;
  for (double y : ys) {
    for (double x : xs) {
      if (x == 4.3 && (y == 8.3 || y == 9.6)) continue;  // over the bed
      SensorSpec s;
      s.id = id++;
      s.kind = SensorKind::InfraredMotion;
      s.position = {x, y};
      if (x == 4.3 && y == 7.0) s.position.y = 7.3;  // bedside
      layout.sensors.push_back(s);
    }
  }
  auto mat = [&](Rect r) {
    SensorSpec s;
    s.id = id++;
    s.kind = SensorKind::Pressure;
    s.area = r;
    s.position = r.center();
    s.radius = 0.0;
    layout.sensors.push_back(s);
  };
  mat({3.0, 7.6, 3.9, 7.6 + 0.75 / 0.9});
  mat({3.0, 7.6 + 0.75 / 0.9, 3.9, 7.6 + 0.75 / 0.9 + 1.0 / 0.9});
  auto cost = [&](SensorKind kind, Point p, const char* appliance) {
    SensorSpec s;
    s.id = id++;
    s.kind = kind;
    s.position = p;
    s.radius = 0.0;
    s.sample_rate_hz = 1;
    s.appliance = appliance;
    layout.sensors.push_back(s);
    layout.cost_sensor_ids.push_back(s.id);
  };
  cost(SensorKind::Flow, {4.9, 4.45}, "kitchen_sink");
  cost(SensorKind::Flow, {3.2, 1.3}, "washbasin");
  cost(SensorKind::Power, {2.6, 11.9}, "sofa");
  cost(SensorKind::Power, {4.9, 3.65}, "kitchen_stove");
  SensorSpec door;
  door.id = id++;
  door.kind = SensorKind::Door;
  door.position = plan.entrance;
  door.radius = 0.0;
  layout.sensors.push_back(door);
  layout.door_sensor_id = door.id;
  layout.bed_sensor_ids = {23, 34, 35};
  return {plan, layout};
}

double sensor_distance(const SensorLayout& layout, int a, int b) {
  return distance(layout.at(a).position, layout.at(b).position);
}

namespace {

bool inside(const FloorPlan& plan, Point p) {
  return p.x >= 0.0 && p.x <= plan.width && p.y >= 0.0 && p.y <= plan.height;
}

std::string sensor_name(const SensorSpec& s) { return "sensor #" + std::to_string(s.id); }

}  // namespace

std::vector<Violation> validate(const FloorPlan& plan, const SensorLayout& layout) {
  std::vector<Violation> out;
  auto add = [&](std::string entity, std::string message) { out.push_back({std::move(entity), std::move(message)}); };

  if (!(plan.width > 0.0) || !(plan.height > 0.0)) add("floor plan", "width and height must be positive");
  for (const auto& f : plan.furniture) {
    if (!(f.rect.x0 < f.rect.x1 && f.rect.y0 < f.rect.y1)) add("furniture " + f.name, "degenerate rectangle");
    if (!inside(plan, {f.rect.x0, f.rect.y0}) || !inside(plan, {f.rect.x1, f.rect.y1}))
      add("furniture " + f.name, "outside the floor plan");
  }
  for (const auto& [name, p] : plan.anchors)
    if (!inside(plan, p)) add("anchor " + name, "outside the floor plan");
  if (!inside(plan, plan.entrance)) add("entrance", "outside the floor plan");

  std::map<int, int> id_count;
  for (const auto& s : layout.sensors) id_count[s.id]++;
  bool duplicates = false;
  for (const auto& [sid, n] : id_count) {
    if (n > 1) {
      duplicates = true;
      add("sensor #" + std::to_string(sid), "duplicate sensor id");
    }
  }
  if (!duplicates) {
    for (int i = 0; i < layout.size(); ++i) {
      if (layout.sensors[i].id != i) {
        add(sensor_name(layout.sensors[i]), "sensor ids must be dense 0..S-1 in order");
        break;
      }
    }
  }

  int doors = 0;
  for (const auto& s : layout.sensors) {
    if (!inside(plan, s.position)) add(sensor_name(s), "position outside the floor plan");
    switch (s.kind) {
      case SensorKind::InfraredMotion:
        if (!(s.radius > 0.0)) add(sensor_name(s), "infrared sensor needs a positive detection radius");
        break;
      case SensorKind::Pressure:
        if (!(s.area.area() > 0.0)) add(sensor_name(s), "pressure sensor needs a positive area");
        else if (!inside(plan, {s.area.x0, s.area.y0}) || !inside(plan, {s.area.x1, s.area.y1}))
          add(sensor_name(s), "pressure area outside the floor plan");
        break;
      case SensorKind::Door: ++doors; break;
      case SensorKind::Flow:
      case SensorKind::Power:
        if (s.appliance.empty() || !plan.has_anchor(s.appliance))
          add(sensor_name(s), "cost sensor must be bound to an existing anchor");
        break;
    }
    if (s.sample_rate_hz != 1 && s.sample_rate_hz != 10) add(sensor_name(s), "sample rate must be 1 or 10 Hz");
  }
  if (doors != 1) add("layout", "exactly one door sensor required, found " + std::to_string(doors));

  auto valid_id = [&](int sid) { return id_count.count(sid) != 0; };
  if (!valid_id(layout.door_sensor_id) || layout.at(layout.door_sensor_id).kind != SensorKind::Door)
    add("layout", "door_sensor_id does not name a door sensor");
  if (layout.bed_sensor_ids.empty()) add("layout", "bed_sensor_ids must be non-empty");
  for (int b : layout.bed_sensor_ids) {
    if (!valid_id(b)) add("bed sensor #" + std::to_string(b), "unknown sensor id");
    else if (!layout.at(b).is_motion()) add("bed sensor #" + std::to_string(b), "bed sensors must be motion sensors");
  }
  std::set<int> declared(layout.cost_sensor_ids.begin(), layout.cost_sensor_ids.end());
  std::set<int> actual;
  for (const auto& s : layout.sensors)
    if (s.is_cost()) actual.insert(s.id);
  if (declared != actual) add("layout", "cost_sensor_ids must list exactly the flow and power sensors");
  return out;
}

std::vector<Violation> validate(const FloorPlan& plan, const SensorLayout& layout,
                                const std::vector<std::string>& required_anchors) {
  auto out = validate(plan, layout);
  for (const auto& name : required_anchors)
    if (!plan.has_anchor(name)) out.push_back({"anchor " + name, "referenced by an activity but not defined"});
  return out;
}

}  // namespace homesense
