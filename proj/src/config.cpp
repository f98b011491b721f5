#include "homesense/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "homesense/event_io.hpp"

namespace homesense {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw std::invalid_argument(where + ": unknown key `" + k + "`");
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json point(const Point& p) { return json::array({p.x, p.y}); }
Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}
json rect(const Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }
Rect rect_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("rect must be [x0, y0, x1, y1]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json law(const NormalLaw& n) { return json{{"mean", n.mean}, {"sd", n.sd}}; }
NormalLaw law_from(const json& j) {
  check_keys(j, "normal law", {"mean", "sd"});
  NormalLaw n;
  read(j, "mean", n.mean);
  read(j, "sd", n.sd);
  return n;
}

}  // namespace

json to_json(const FloorPlan& plan) {
  json j;
  j["width"] = plan.width;
  j["height"] = plan.height;
  j["entrance"] = point(plan.entrance);
  json f = json::array();
  for (const auto& x : plan.furniture) f.push_back({{"name", x.name}, {"rect", rect(x.rect)}});
  j["furniture"] = f;
  json a = json::object();
  for (const auto& [k, p] : plan.anchors) a[k] = point(p);
  j["anchors"] = a;
  return j;
}

FloorPlan floor_plan_from_json(const json& j) {
  check_keys(j, "floor_plan", {"width", "height", "entrance", "furniture", "anchors"});
  FloorPlan p;
  read(j, "width", p.width);
  read(j, "height", p.height);
  if (j.contains("entrance")) p.entrance = point_from(j["entrance"]);
  if (j.contains("furniture"))
    for (const auto& f : j["furniture"]) {
      check_keys(f, "furniture", {"name", "rect"});
      p.furniture.push_back({f.at("name").get<std::string>(), rect_from(f.at("rect"))});
    }
  if (j.contains("anchors"))
    for (const auto& [k, v] : j["anchors"].items()) p.anchors[k] = point_from(v);
  return p;
}

json to_json(const SensorLayout& layout) {
  json s = json::array();
  for (const auto& x : layout.sensors) {
    json e{{"id", x.id}, {"kind", to_string(x.kind)}, {"sample_rate_hz", x.sample_rate_hz}};
    if (x.kind == SensorKind::Pressure) e["area"] = rect(x.area);
    else e["position"] = point(x.position);
    if (x.kind == SensorKind::InfraredMotion) e["radius"] = x.radius;
    if (!x.appliance.empty()) e["appliance"] = x.appliance;
    s.push_back(e);
  }
  return json{{"sensors", s}, {"bed_sensor_ids", layout.bed_sensor_ids}};
}

SensorLayout sensor_layout_from_json(const json& j) {
  check_keys(j, "layout", {"sensors", "bed_sensor_ids"});
  SensorLayout l;
  for (const auto& e : j.at("sensors")) {
    check_keys(e, "sensor", {"id", "kind", "sample_rate_hz", "area", "position", "radius", "appliance"});
    SensorSpec s;
    s.id = e.at("id").get<int>();
    s.kind = sensor_kind_from_string(e.at("kind").get<std::string>());
    read(e, "sample_rate_hz", s.sample_rate_hz);
    if (e.contains("area")) {
      s.area = rect_from(e["area"]);
      s.position = s.area.center();
    }
    if (e.contains("position")) s.position = point_from(e["position"]);
    read(e, "radius", s.radius);
    read(e, "appliance", s.appliance);
    if (s.kind == SensorKind::Door) l.door_sensor_id = s.id;
    if (s.is_cost()) l.cost_sensor_ids.push_back(s.id);
    l.sensors.push_back(s);
  }
  read(j, "bed_sensor_ids", l.bed_sensor_ids);
  return l;
}

json to_json(const ActivityTemplate& t) {
  json j{{"name", t.name},
         {"anchor", t.anchor},
         {"start_hours", law(t.start_hours)},
         {"duration_minutes", law(t.duration_minutes)},
         {"frequency_per_day", t.frequency_per_day},
         {"role", to_string(t.role)},
         {"motion_interval_s", t.motion_interval_s}};
  if (t.appliance_sensor) j["appliance_sensor"] = *t.appliance_sensor;
  return j;
}

ActivityTemplate activity_template_from_json(const json& j) {
  check_keys(j, "template", {"name", "anchor", "start_hours", "duration_minutes", "frequency_per_day", "role",
                             "motion_interval_s", "appliance_sensor"});
  ActivityTemplate t;
  t.name = j.at("name").get<std::string>();
  t.anchor = j.at("anchor").get<std::string>();
  if (j.contains("start_hours")) t.start_hours = law_from(j["start_hours"]);
  if (j.contains("duration_minutes")) t.duration_minutes = law_from(j["duration_minutes"]);
  read(j, "frequency_per_day", t.frequency_per_day);
  if (j.contains("role")) t.role = activity_role_from_string(j["role"].get<std::string>());
  read(j, "motion_interval_s", t.motion_interval_s);
  if (j.contains("appliance_sensor") && !j["appliance_sensor"].is_null())
    t.appliance_sensor = j["appliance_sensor"].get<int>();
  return t;
}

json to_json(const RunConfig& c) {
  const auto& s = c.simulation;
  json an;
  an["rate_scale"] = s.anomalies.rate_scale;
  json en = json::object(), ov = json::object();
  for (auto k : kAllAnomalyKinds) {
    en[to_string(k)] = s.anomalies.enabled[static_cast<int>(k)];
    if (const auto& r = s.anomalies.rate_override[static_cast<int>(k)]) ov[to_string(k)] = *r;
  }
  an["enabled"] = en;
  an["rate_override_per_month"] = ov;
  an["semi_bedridden_mean_days"] = s.anomalies.semi_bedridden_mean_days;
  an["housebound_mean_days"] = s.anomalies.housebound_mean_days;
  an["weeks_min_days"] = s.anomalies.weeks_min_days;
  an["bed_fall_probability"] = s.anomalies.bed_fall_probability;
  an["forgetting_return_radius"] = s.anomalies.forgetting_return_radius;
  an["wandering_max_pause_s"] = s.anomalies.wandering_max_pause_s;
  an["fall_mean_s"] = s.anomalies.fall_mean_s;

  json t = json::array();
  for (const auto& x : s.templates) t.push_back(to_json(x));
  return json{{"seed", s.seed},
              {"horizon_days", s.horizon_days},
              {"walking_speed_cm_s", s.walking_speed_cm_s},
              {"door_open_s", s.door_open_s},
              {"output_dir", c.output_dir},
              {"mmse", {{"m0", s.mmse.m0}, {"drift", s.mmse.drift}, {"noise_sd", s.mmse.noise_sd}}},
              {"motion",
               {{"burst_min_s", s.motion.burst_min_s},
                {"burst_max_s", s.motion.burst_max_s},
                {"fall_motion_s", s.motion.fall_motion_s}}},
              {"anomalies", an},
              {"floor_plan", to_json(s.plan)},
              {"layout", to_json(s.layout)},
              {"templates", t}};
}

RunConfig run_config_from_json(const json& j) {
  check_keys(j, "config", {"seed", "horizon_days", "walking_speed_cm_s", "door_open_s", "output_dir", "mmse", "motion",
                           "anomalies", "floor_plan", "layout", "templates"});
  RunConfig c;
  auto& s = c.simulation;
  read(j, "seed", s.seed);
  read(j, "horizon_days", s.horizon_days);
  read(j, "walking_speed_cm_s", s.walking_speed_cm_s);
  read(j, "door_open_s", s.door_open_s);
  read(j, "output_dir", c.output_dir);
  if (j.contains("mmse")) {
    const auto& m = j["mmse"];
    check_keys(m, "mmse", {"m0", "drift", "noise_sd"});
    read(m, "m0", s.mmse.m0);
    read(m, "drift", s.mmse.drift);
    read(m, "noise_sd", s.mmse.noise_sd);
  }
  if (j.contains("motion")) {
    const auto& m = j["motion"];
    check_keys(m, "motion", {"burst_min_s", "burst_max_s", "fall_motion_s"});
    read(m, "burst_min_s", s.motion.burst_min_s);
    read(m, "burst_max_s", s.motion.burst_max_s);
    read(m, "fall_motion_s", s.motion.fall_motion_s);
  }
  if (j.contains("anomalies")) {
    const auto& a = j["anomalies"];
    check_keys(a, "anomalies", {"rate_scale", "enabled", "rate_override_per_month", "semi_bedridden_mean_days",
                                "housebound_mean_days", "weeks_min_days", "bed_fall_probability",
                                "forgetting_return_radius", "wandering_max_pause_s", "fall_mean_s"});
    auto& p = s.anomalies;
    read(a, "rate_scale", p.rate_scale);
    if (a.contains("enabled"))
      for (const auto& [k, v] : a["enabled"].items()) p.enabled[static_cast<int>(anomaly_kind_from_string(k))] = v.get<bool>();
    if (a.contains("rate_override_per_month"))
      for (const auto& [k, v] : a["rate_override_per_month"].items())
        p.rate_override[static_cast<int>(anomaly_kind_from_string(k))] = v.get<double>();
    read(a, "semi_bedridden_mean_days", p.semi_bedridden_mean_days);
    read(a, "housebound_mean_days", p.housebound_mean_days);
    read(a, "weeks_min_days", p.weeks_min_days);
    read(a, "bed_fall_probability", p.bed_fall_probability);
    read(a, "forgetting_return_radius", p.forgetting_return_radius);
    read(a, "wandering_max_pause_s", p.wandering_max_pause_s);
    read(a, "fall_mean_s", p.fall_mean_s);
  }
  if (j.contains("floor_plan")) s.plan = floor_plan_from_json(j["floor_plan"]);
  if (j.contains("layout")) s.layout = sensor_layout_from_json(j["layout"]);
  if (j.contains("templates")) {
    s.templates.clear();
    for (const auto& t : j["templates"]) s.templates.push_back(activity_template_from_json(t));
  }
  return c;
}

void RunConfig::validate() const {
  simulation.validate();
  if (output_dir.empty()) throw std::invalid_argument("output_dir must not be empty");
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
  try {
    return run_config_from_json(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
}

void save_run_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(config).dump(2) << '\n';
}

std::string config_hash(const RunConfig& config) {
  json j = to_json(config);
  j.erase("output_dir");
  return hex64(fnv1a(j.dump()));
}

}  // namespace homesense
