#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homesense/config.hpp"
#include "homesense/event_io.hpp"
#include "homesense/experiment.hpp"
#include "homesense/simulator.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace homesense;

namespace {

// Invalid user input: reported with exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Stopwatch {
 public:
  void lap(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    timings_[name] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  const std::map<std::string, double>& timings() const { return timings_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::map<std::string, double> timings_;
};

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> days;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_days = true) {
  cmd->add_option("--config", c.config_path, "Run configuration JSON")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Master seed (overrides the config)");
  if (with_days) cmd->add_option("--days", c.days, "Horizon in days (overrides the config)")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory (overrides the config)");
}

RunConfig resolve_config(const Common& c) {
  RunConfig cfg;
  try {
    cfg = c.config_path.empty() ? RunConfig::defaults() : load_run_config(c.config_path);
    if (c.seed) cfg.simulation.seed = *c.seed;
    if (c.days) cfg.simulation.horizon_days = *c.days;
    if (!c.out.empty()) cfg.output_dir = c.out;
    cfg.validate();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + p);
  return in;
}

void write_manifest(const fs::path& dir, const std::string& stage, const RunConfig& cfg, const Stopwatch& sw,
                    const std::vector<fs::path>& artifacts, const json& extra = json::object()) {
  json m;
  m["tool"] = "homesense";
  m["stage"] = stage;
  m["config_hash"] = config_hash(cfg);
  m["seed"] = cfg.simulation.seed;
  m["horizon_days"] = cfg.simulation.horizon_days;
  m["timings_s"] = sw.timings();
  json a = json::object();
  for (const auto& p : artifacts) a[fs::relative(p, dir).generic_string()] = file_checksum(p.string());
  m["artifacts"] = a;
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  auto out = open_out(dir / ("manifest_" + stage + ".json"));
  out << m.dump(2) << '\n';
}

std::vector<SensorEvent> load_events(const std::string& path) {
  auto in = open_in(path);
  try {
    return read_events(in);
  } catch (const ParseError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// Horizon for an event file: explicit flag, else the simulate manifest beside it, else the last event's day.
int resolve_days(const std::optional<int>& flag, const std::string& events_path, const std::vector<SensorEvent>& events) {
  if (flag) return *flag;
  fs::path manifest = fs::path(events_path).parent_path() / "manifest_simulate.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    json m = json::parse(in, nullptr, false);
    if (m.is_object() && m.contains("horizon_days")) return m["horizon_days"].get<int>();
  }
  if (events.empty()) throw ValidationError("cannot infer the horizon of an empty event file; pass --days");
  return static_cast<int>(events.back().time / ticks_from_days(1)) + 1;
}

Observations observe(std::vector<SensorEvent> events, const RunConfig& cfg, int days) {
  try {
    return Observations(std::move(events), cfg.simulation.layout, days);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

AnomalyKind parse_kind(const std::string& s) {
  try {
    return anomaly_kind_from_string(s);
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
}

Method parse_method(const std::string& s) {
  try {
    return method_from_string(s);
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
}

int cmd_simulate(const Common& c) {
  RunConfig cfg = resolve_config(c);
  fs::path dir = prepare_dir(cfg.output_dir);
  Stopwatch sw;
  SimulationResult r = simulate(cfg.simulation);
  sw.lap("simulate");

  std::vector<fs::path> artifacts = {dir / "events.csv", dir / "episodes.csv", dir / "activities.csv", dir / "config.json"};
  {
    auto out = open_out(dir / "events.csv");
    write_events(r.events, out);
  }
  {
    auto out = open_out(dir / "episodes.csv");
    write_episodes(r.episodes, out);
  }
  {
    auto out = open_out(dir / "activities.csv");
    write_activities(r.activities, out);
  }
  save_run_config(cfg, (dir / "config.json").string());
  fs::create_directories(dir / "labels");
  for (const auto& [kind, track] : labels_from_episodes(r.episodes, cfg.simulation.horizon_days)) {
    fs::path p = dir / "labels" / (std::string(to_string(kind)) + ".csv");
    auto out = open_out(p);
    write_label_track(track, out);
    out.close();
    artifacts.push_back(p);
  }
  sw.lap("write");

  json extra;
  extra["event_count"] = r.event_count;
  extra["activation_count"] = r.activation_count;
  extra["episode_count"] = r.episodes.size();
  extra["warnings"] = r.warnings.size();
  write_manifest(dir, "simulate", cfg, sw, artifacts, extra);
  std::cout << "events " << r.event_count << " (activations " << r.activation_count << "), episodes "
            << r.episodes.size() << ", checksum " << file_checksum((dir / "events.csv").string()) << '\n';
  return 0;
}

int cmd_preprocess(const Common& c, const std::string& events_path) {
  RunConfig cfg = resolve_config(c);
  fs::path dir = prepare_dir(cfg.output_dir);
  Stopwatch sw;
  auto events = load_events(events_path);
  int days = resolve_days(c.days, events_path, events);
  cfg.simulation.horizon_days = days;
  sw.lap("read");
  Observations obs = observe(std::move(events), cfg, days);

  std::vector<fs::path> artifacts;
  {
    fs::path p = dir / "daily.csv";
    auto out = open_out(p);
    const auto& d = obs.daily();
    out << "# unit_seconds=86400\nday,sleep_hours,outings\n";
    for (int i = 0; i < days; ++i) out << i << ',' << d.sleep_hours[i] << ',' << d.outings[i] << '\n';
    artifacts.push_back(p);
  }
  {
    fs::path p = dir / "forgetting.csv";
    auto out = open_out(p);
    out << "# unit_seconds=7200\nwindow,f1_seconds,f2_meters\n";
    const auto& w = obs.forgetting();
    for (std::size_t i = 0; i < w.size(); ++i) out << i << ',' << w[i].f1() << ',' << w[i].f2() << '\n';
    artifacts.push_back(p);
  }
  {
    fs::path p = dir / "matrix.csv";
    auto out = open_out(p);
    const auto& m = obs.matrix();
    out << "# unit_seconds=1\n# columns=" << m.columns() << "\n# sensors=" << m.sensors() << "\nsensor_id,first,last\n";
    for (int s = 0; s < m.sensors(); ++s)
      for (const auto& r : m.runs(s)) out << s << ',' << r.first << ',' << r.last << '\n';
    artifacts.push_back(p);
  }
  {
    fs::path p = dir / "nrd.csv";
    auto out = open_out(p);
    const auto& n = obs.nrd();
    out << "# unit_seconds=1\n# columns=" << n.columns << "\n# motion_ids=";
    for (std::size_t i = 0; i < n.motion_ids.size(); ++i) out << (i ? " " : "") << n.motion_ids[i];
    out << "\nfirst,length,sensor_id,c0,slope\n";
    for (const auto& r : n.runs)
      out << r.first << ',' << r.length << ',' << n.motion_ids[r.row] << ',' << r.c0 << ',' << r.slope << '\n';
    artifacts.push_back(p);
  }
  sw.lap("features");
  write_manifest(dir, "preprocess", cfg, sw, artifacts, {{"events", file_checksum(events_path)}});
  std::cout << "wrote " << artifacts.size() << " feature files to " << dir.string() << '\n';
  return 0;
}

int cmd_train(const Common& c, const std::string& events_path, const std::string& episodes_path,
              const std::string& anomaly, const std::string& method_name) {
  RunConfig cfg = resolve_config(c);
  AnomalyKind kind = parse_kind(anomaly);
  Method method = parse_method(method_name);
  if (!valid_pairing(kind, method))
    throw ValidationError(std::string("unsupported pairing ") + to_string(kind) + "/" + to_string(method) +
                          "; valid pairings: " + valid_pairings());
  fs::path dir = prepare_dir(cfg.output_dir);
  Stopwatch sw;
  auto events = load_events(events_path);
  int days = resolve_days(c.days, events_path, events);
  cfg.simulation.horizon_days = days;
  std::vector<AnomalyEpisode> episodes;
  {
    auto in = open_in(episodes_path);
    try {
      episodes = read_episodes(in);
    } catch (const ParseError& e) {
      throw ValidationError(episodes_path + ": " + e.what());
    }
  }
  sw.lap("read");
  Observations obs = observe(std::move(events), cfg, days);
  LabelSet labels = labels_from_episodes(episodes, days);
  Model model;
  try {
    model = train_model(kind, method, obs, labels, cfg.simulation.seed);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  sw.lap("train");
  fs::path p = dir / "model.json";
  save_model(model, p.string());

  LabelTrack fit = detect(model, obs);
  ScoreReport s = score(labels.at(kind), fit, days, model.denoise_threshold);
  {
    auto out = open_out(dir / "training_metrics.csv");
    out << kScoreHeader << '\n';
    write_score_row(out, to_string(kind), to_string(method), s);
  }
  sw.lap("training_metrics");
  write_manifest(dir, "train", cfg, sw, {p, dir / "training_metrics.csv"},
                 {{"events", file_checksum(events_path)}, {"episodes", file_checksum(episodes_path)}});
  std::cout << "trained " << to_string(kind) << "/" << to_string(method);
  if (model.threshold) std::cout << " theta " << model.threshold->theta << " (c " << model.threshold->c << ")";
  std::cout << ", training sensitivity " << format_optional(s.sensitivity) << ", FAR/day " << s.far_per_day << '\n';
  return 0;
}

int cmd_detect(const Common& c, const std::string& events_path, const std::string& model_path,
               std::optional<std::int64_t> denoise_threshold) {
  RunConfig cfg = resolve_config(c);
  if (denoise_threshold && *denoise_threshold < 0) throw ValidationError("denoise threshold must be >= 0");
  fs::path dir = prepare_dir(cfg.output_dir);
  Stopwatch sw;
  Model model;
  try {
    model = load_model(model_path);
  } catch (const std::exception& e) {
    throw ValidationError(model_path + ": " + e.what());
  }
  auto events = load_events(events_path);
  int days = resolve_days(c.days, events_path, events);
  cfg.simulation.horizon_days = days;
  sw.lap("read");
  Observations obs = observe(std::move(events), cfg, days);
  LabelTrack pred;
  try {
    pred = detect(model, obs, denoise_threshold);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  sw.lap("detect");
  fs::path p = dir / "prediction.csv";
  {
    auto out = open_out(p);
    write_label_track(pred, out);
  }
  write_manifest(dir, "detect", cfg, sw, {p},
                 {{"model", file_checksum(model_path)},
                  {"events", file_checksum(events_path)},
                  {"denoise_threshold", denoise_threshold.value_or(model.denoise_threshold)}});
  std::cout << "predicted " << pred.intervals.size() << " intervals (" << to_string(model.anomaly) << ", unit "
            << pred.unit_seconds << " s)\n";
  return 0;
}

LabelTrack load_track(const std::string& path) {
  auto in = open_in(path);
  try {
    return read_label_track(in);
  } catch (const std::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

int cmd_evaluate(const Common& c, const std::string& truth_path, const std::string& pred_path,
                 const std::string& anomaly, const std::string& method, std::int64_t denoise_threshold) {
  RunConfig cfg = resolve_config(c);
  fs::path dir = prepare_dir(cfg.output_dir);
  Stopwatch sw;
  LabelTrack truth = load_track(truth_path);
  LabelTrack pred = load_track(pred_path);
  if (truth.unit_seconds != pred.unit_seconds)
    throw ValidationError("unit mismatch: truth " + std::to_string(truth.unit_seconds) + " s, prediction " +
                          std::to_string(pred.unit_seconds) + " s");
  if (truth.length != pred.length)
    throw ValidationError("length mismatch: truth " + std::to_string(truth.length) + ", prediction " +
                          std::to_string(pred.length));
  double days = c.days ? *c.days : static_cast<double>(truth.length * truth.unit_seconds) / 86400.0;
  ScoreReport s = score(truth, pred, days, denoise_threshold);
  sw.lap("score");
  fs::path p = dir / "score.csv";
  {
    auto out = open_out(p);
    out << kScoreHeader << '\n';
    write_score_row(out, anomaly, method, s);
  }
  write_manifest(dir, "evaluate", cfg, sw, {p},
                 {{"truth", file_checksum(truth_path)}, {"prediction", file_checksum(pred_path)}});
  std::cout << kScoreHeader << '\n';
  write_score_row(std::cout, anomaly, method, s);
  return 0;
}

int cmd_reproduce(const Common& c, const std::string& scale, int seeds, int days) {
  Common base = c;
  base.days.reset();
  RunConfig cfg = resolve_config(base);
  fs::path dir = prepare_dir(cfg.output_dir);
  ReproduceOptions o;
  o.scale = scale == "full" ? Scale::Full : Scale::Desk;
  o.seed = cfg.simulation.seed;
  o.seeds = seeds;
  o.days = days;
  o.log = &std::cerr;
  Stopwatch sw;
  ReproduceReport r = reproduce(o, cfg.simulation);
  sw.lap("reproduce");
  fs::path p = dir / ("report_" + scale + ".csv");
  {
    auto out = open_out(p);
    write_report(r, out);
  }
  write_report(r, std::cout);
  write_manifest(dir, "reproduce_" + scale, cfg, sw, {p},
                 {{"replicates", r.seeds}, {"days", r.days}, {"rate_scale", r.rate_scale},
                  {"gating_pass", r.gating_pass()}});
  std::cout << (r.gating_pass() ? "all gating rows pass" : "some gating rows fail") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smart-home resident simulator and anomaly detection pipeline"};
  app.require_subcommand(1);

  Common c;
  std::string events, episodes, anomaly, method = "-", model, truth, pred;
  std::optional<std::int64_t> denoise;
  std::int64_t eval_denoise = 0;
  std::string scale = "desk";
  int seeds = 0, rep_days = 0;

  auto* sim = app.add_subcommand("simulate", "Simulate sensor events and anomaly labels");
  add_common(sim, c);

  auto* pre = app.add_subcommand("preprocess", "Derive feature files from an event CSV");
  add_common(pre, c);
  pre->add_option("--events", events, "Event CSV")->required()->check(CLI::ExistingFile);

  auto* train = app.add_subcommand("train", "Train one detector");
  add_common(train, c);
  train->add_option("--events", events, "Event CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--labels", episodes, "Episode CSV (kind,start_seconds,end_seconds)")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--anomaly", anomaly, "Anomaly kind")->required();
  train->add_option("--method", method, "ST, DT, RF, DNB or HMM")->required();

  auto* det = app.add_subcommand("detect", "Apply a trained detector");
  add_common(det, c);
  det->add_option("--events", events, "Event CSV")->required()->check(CLI::ExistingFile);
  det->add_option("--model", model, "Model file")->required()->check(CLI::ExistingFile);
  det->add_option("--denoise", denoise, "Drop predicted runs shorter than this many units");

  auto* ev = app.add_subcommand("evaluate", "Score a prediction against ground truth");
  add_common(ev, c);
  ev->add_option("--truth", truth, "Ground-truth label track")->required()->check(CLI::ExistingFile);
  ev->add_option("--pred", pred, "Predicted label track")->required()->check(CLI::ExistingFile);
  ev->add_option("--anomaly", anomaly, "Anomaly name for the report row");
  ev->add_option("--method", method, "Method name for the report row");
  ev->add_option("--denoise", eval_denoise, "Denoise threshold recorded in the report row");

  auto* rep = app.add_subcommand("reproduce", "Run the full train/test comparison against the reference results");
  add_common(rep, c, false);
  rep->add_option("scale", scale, "desk or full")->check(CLI::IsMember({"desk", "full"}));
  rep->add_option("--replicates", seeds, "Number of replicates (default 5 desk, 1 full)")->check(CLI::NonNegativeNumber);
  rep->add_option("--days", rep_days, "Days per simulation (default 720 desk, 3240 full)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(c);
    if (*pre) return cmd_preprocess(c, events);
    if (*train) return cmd_train(c, events, episodes, anomaly, method);
    if (*det) return cmd_detect(c, events, model, denoise);
    if (*ev) return cmd_evaluate(c, truth, pred, anomaly.empty() ? "-" : anomaly, method, eval_denoise);
    if (*rep) return cmd_reproduce(c, scale, seeds, rep_days);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
