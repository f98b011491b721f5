#include "homesense/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "homesense/rng.hpp"
#include "homesense/simulator.hpp"

namespace homesense {

using nlohmann::json;

const char* to_string(Method m) {
  switch (m) {
    case Method::ST: return "ST";
    case Method::DT: return "DT";
    case Method::RF: return "RF";
    case Method::DNB: return "DNB";
    case Method::HMM: return "HMM";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  for (Method m : {Method::ST, Method::DT, Method::RF, Method::DNB, Method::HMM}) {
    std::string s = to_string(m);
    if (name == s) return m;
    std::string lower;
    for (char c : s) lower += static_cast<char>(c - 'A' + 'a');
    if (name == lower) return m;
  }
  throw std::invalid_argument("unknown method `" + name + "` (expected ST, DT, RF, DNB or HMM)");
}

bool valid_pairing(AnomalyKind kind, Method method) {
  switch (kind) {
    case AnomalyKind::SemiBedridden:
    case AnomalyKind::Housebound: return method == Method::ST;
    case AnomalyKind::Forgetting: return method == Method::DT;
    case AnomalyKind::FallWalking: return method == Method::RF;
    case AnomalyKind::Wandering:
    case AnomalyKind::FallStanding: return method == Method::DNB || method == Method::HMM;
  }
  return false;
}

std::string valid_pairings() {
  return "semi_bedridden:ST, housebound:ST, forgetting:DT, wandering:DNB|HMM, fall_walking:RF, "
         "fall_standing:DNB|HMM";
}

std::int64_t default_denoise(AnomalyKind kind, Method method) {
  if (kind == AnomalyKind::Wandering && method == Method::HMM) return 28;
  if (kind == AnomalyKind::Wandering && method == Method::DNB) return 5;
  if (kind == AnomalyKind::FallStanding && method == Method::HMM) return 6;
  if (kind == AnomalyKind::FallWalking) return 16;
  return 0;
}

LabelSet labels_from_episodes(std::span<const AnomalyEpisode> episodes, int horizon_days) {
  LabelSet out;
  const std::int64_t seconds = static_cast<std::int64_t>(horizon_days) * 86400;
  for (auto k : kAllAnomalyKinds) {
    std::vector<AnomalyEpisode> of;
    for (const auto& e : episodes)
      if (e.kind == k) of.push_back(e);
    out[k] = summarize_labels(of, unit_for(k), seconds);
  }
  return out;
}

Observations::Observations(std::vector<SensorEvent> events, SensorLayout layout, int days)
    : events_(std::move(events)), layout_(std::move(layout)), days_(days) {
  if (days < 1) throw std::invalid_argument("days must be >= 1");
  for (const auto& e : events_)
    if (e.sensor_id < 0 || e.sensor_id >= layout_.size())
      throw std::invalid_argument("event sensor id " + std::to_string(e.sensor_id) + " is not in the layout");
}

const DailySeries& Observations::daily() {
  if (!daily_) daily_ = estimate_daily(events_, layout_, days_);
  return *daily_;
}

const std::vector<ForgettingWindow>& Observations::forgetting() {
  if (!forgetting_) forgetting_ = forgetting_features(events_, layout_, seconds());
  return *forgetting_;
}

const DataMatrix& Observations::matrix() {
  if (!matrix_) matrix_ = binarize(events_, layout_.size(), seconds());
  return *matrix_;
}

const NrdMatrix& Observations::nrd() {
  if (!nrd_) nrd_ = nonresponse_duration(matrix(), layout_);
  return *nrd_;
}

void Observations::release_matrix() { matrix_.reset(); }

namespace {

const LabelTrack& labels_for(const LabelSet& labels, AnomalyKind kind) {
  auto it = labels.find(kind);
  if (it == labels.end()) throw std::invalid_argument(std::string("no labels for ") + to_string(kind));
  return it->second;
}

json threshold_json(const ThresholdDetector& d) {
  return json{{"mu", d.mu},
              {"sigma", d.sigma},
              {"c", d.c},
              {"theta", d.theta},
              {"direction", d.direction == Direction::Above ? "above" : "below"},
              {"min_run_days", d.min_run_days}};
}

ThresholdDetector threshold_from(const json& j) {
  ThresholdDetector d;
  d.mu = j.at("mu").get<double>();
  d.sigma = j.at("sigma").get<double>();
  d.c = j.at("c").get<double>();
  d.theta = j.at("theta").get<double>();
  auto dir = j.at("direction").get<std::string>();
  if (dir != "above" && dir != "below") throw std::invalid_argument("threshold direction must be above or below");
  d.direction = dir == "above" ? Direction::Above : Direction::Below;
  d.min_run_days = j.at("min_run_days").get<int>();
  return d;
}

json tree_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.label, n.w0, n.w1}));
  return json{{"features", t.features}, {"nodes", nodes}};
}

DecisionTree tree_from(const json& j) {
  DecisionTree t;
  t.features = j.at("features").get<int>();
  for (const auto& a : j.at("nodes")) {
    TreeNode n;
    n.feature = a.at(0).get<int>();
    n.threshold = a.at(1).get<double>();
    n.left = a.at(2).get<int>();
    n.right = a.at(3).get<int>();
    n.label = a.at(4).get<int>();
    n.w0 = a.at(5).get<double>();
    n.w1 = a.at(6).get<double>();
    t.nodes.push_back(n);
  }
  const int size = static_cast<int>(t.nodes.size());
  if (size == 0) throw std::invalid_argument("tree without nodes");
  for (const auto& n : t.nodes)
    if (n.feature >= 0 && (n.feature >= t.features || n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size))
      throw std::invalid_argument("malformed tree node");
  return t;
}

}  // namespace

json model_to_json(const Model& m) {
  json j{{"format", "homesense-model"},
         {"version", kModelFormatVersion},
         {"anomaly", to_string(m.anomaly)},
         {"method", to_string(m.method)},
         {"sensors", m.sensors},
         {"unit_seconds", m.unit_seconds},
         {"denoise_threshold", m.denoise_threshold}};
  if (m.threshold) j["threshold"] = threshold_json(*m.threshold);
  if (m.sleep_exclusion) j["sleep_exclusion"] = threshold_json(*m.sleep_exclusion);
  if (m.tree) j["tree"] = tree_json(*m.tree);
  if (m.forest) {
    json trees = json::array();
    for (const auto& t : m.forest->trees) trees.push_back(tree_json(t));
    j["forest"] = json{{"features", m.forest->features}, {"trees", trees}};
  }
  if (m.sequence) {
    const auto& s = *m.sequence;
    j["sequence"] = json{{"variant", s.variant == SequenceVariant::HiddenMarkov ? "HMM" : "DNB"},
                         {"pi", s.pi},
                         {"A", s.A},
                         {"B", s.B},
                         {"decoder", m.viterbi ? "viterbi" : "posterior"}};
  }
  return j;
}

Model model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "homesense-model") throw std::invalid_argument("not a model file");
    if (j.at("version").get<int>() != kModelFormatVersion) throw std::invalid_argument("unsupported model version");
    Model m;
    m.anomaly = anomaly_kind_from_string(j.at("anomaly").get<std::string>());
    m.method = method_from_string(j.at("method").get<std::string>());
    if (!valid_pairing(m.anomaly, m.method)) throw std::invalid_argument("model pairs an unsupported anomaly and method");
    m.sensors = j.at("sensors").get<int>();
    m.unit_seconds = j.at("unit_seconds").get<std::int64_t>();
    m.denoise_threshold = j.at("denoise_threshold").get<std::int64_t>();
    if (j.contains("threshold")) m.threshold = threshold_from(j["threshold"]);
    if (j.contains("sleep_exclusion")) m.sleep_exclusion = threshold_from(j["sleep_exclusion"]);
    if (j.contains("tree")) m.tree = tree_from(j["tree"]);
    if (j.contains("forest")) {
      RandomForest f;
      f.features = j["forest"].at("features").get<int>();
      for (const auto& t : j["forest"].at("trees")) f.trees.push_back(tree_from(t));
      m.forest = std::move(f);
    }
    if (j.contains("sequence")) {
      const auto& s = j["sequence"];
      SequenceModel q;
      q.variant = s.at("variant").get<std::string>() == "HMM" ? SequenceVariant::HiddenMarkov
                                                                : SequenceVariant::DynamicNaiveBayes;
      q.pi = s.at("pi").get<std::array<double, 2>>();
      q.A = s.at("A").get<std::array<std::array<double, 2>, 2>>();
      q.B = s.at("B").get<std::array<std::vector<double>, 2>>();
      if (q.B[0].size() != q.B[1].size()) throw std::invalid_argument("emission rows differ in length");
      m.viterbi = s.value("decoder", "posterior") == "viterbi";
      m.sequence = std::move(q);
    }
    bool complete = (m.method == Method::ST && m.threshold) || (m.method == Method::DT && m.tree) ||
                    (m.method == Method::RF && m.forest) ||
                    ((m.method == Method::DNB || m.method == Method::HMM) && m.sequence);
    if (!complete) throw std::invalid_argument("model file lacks the parameters of its method");
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << model_to_json(m).dump(1) << '\n';
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

Model train_model(AnomalyKind kind, Method method, Observations& data, const LabelSet& labels, std::uint64_t seed) {
  if (!valid_pairing(kind, method))
    throw std::invalid_argument(std::string("unsupported pairing ") + to_string(kind) + ":" + to_string(method) +
                                "; valid pairings are " + valid_pairings());
  Model m;
  m.anomaly = kind;
  m.method = method;
  m.sensors = data.layout().size();
  m.unit_seconds = unit_for(kind);
  m.denoise_threshold = default_denoise(kind, method);
  const LabelTrack& y = labels_for(labels, kind);
  switch (method) {
    case Method::ST: {
      const auto& daily = data.daily();
      if (kind == AnomalyKind::SemiBedridden) {
        m.threshold = fit_threshold(daily.sleep_hours, y, Direction::Above);
      } else {
        const LabelTrack& semi = labels_for(labels, AnomalyKind::SemiBedridden);
        std::vector<char> exclude;
        if (!semi.intervals.empty()) {
          m.sleep_exclusion = fit_threshold(daily.sleep_hours, semi, Direction::Above);
          auto dense = m.sleep_exclusion->classify(daily.sleep_hours).to_dense();
          exclude.assign(dense.begin(), dense.end());
        }
        m.threshold = fit_threshold(daily.outings, y, Direction::Below, exclude.empty() ? nullptr : &exclude);
      }
      break;
    }
    case Method::DT: m.tree = fit_forgetting_tree(data.forgetting(), y); break;
    case Method::RF: {
      ForestParams p;
      p.seed = seed;
      m.forest = fit_fall_forest(data.nrd(), y, p);
      break;
    }
    case Method::DNB:
    case Method::HMM:
      m.sequence = fit_sequence(data.matrix(), y,
                                method == Method::HMM ? SequenceVariant::HiddenMarkov : SequenceVariant::DynamicNaiveBayes);
      break;
  }
  return m;
}

LabelTrack detect_raw(const Model& m, Observations& data) {
  if (m.sensors != data.layout().size())
    throw std::invalid_argument("model expects " + std::to_string(m.sensors) + " sensors, the layout has " +
                                std::to_string(data.layout().size()));
  switch (m.method) {
    case Method::ST: {
      const auto& daily = data.daily();
      if (m.anomaly == AnomalyKind::SemiBedridden) return m.threshold->classify(daily.sleep_hours);
      if (m.sleep_exclusion)
        return detect_weeksscale(daily.sleep_hours, daily.outings, *m.sleep_exclusion, *m.threshold).housebound;
      return m.threshold->classify(daily.outings);
    }
    case Method::DT: return predict_forgetting(*m.tree, data.forgetting());
    case Method::RF: {
      const auto& nrd = data.nrd();
      return NrdStepPredictor(*m.forest, nrd.rows()).predict(nrd);
    }
    case Method::DNB:
    case Method::HMM:
      return m.viterbi ? viterbi(*m.sequence, data.matrix()) : predict_sequence(*m.sequence, data.matrix());
  }
  throw std::logic_error("unreachable");
}

LabelTrack detect(const Model& model, Observations& data, std::optional<std::int64_t> threshold) {
  return denoise(detect_raw(model, data), threshold.value_or(model.denoise_threshold));
}

std::span<const ReferenceRow> reference_rows() {
  static const ReferenceRow rows[] = {
      {AnomalyKind::SemiBedridden, Method::ST, 0, 1.0, 0.0},
      {AnomalyKind::Housebound, Method::ST, 0, 1.0, 0.004},
      {AnomalyKind::Forgetting, Method::DT, 0, 1.0, 0.01},
      {AnomalyKind::Wandering, Method::DNB, 0, 1.0, 68.2},
      {AnomalyKind::Wandering, Method::DNB, 5, 0.97, 13.1},
      {AnomalyKind::Wandering, Method::HMM, 0, 1.0, 45.9},
      {AnomalyKind::Wandering, Method::HMM, 28, 1.0, 0.017},
      {AnomalyKind::FallWalking, Method::RF, 0, 0.75, 0.09},
      {AnomalyKind::FallWalking, Method::RF, 16, 0.75, 0.02},
      {AnomalyKind::FallStanding, Method::DNB, 0, 0.18, 0.015},
      {AnomalyKind::FallStanding, Method::HMM, 0, 0.92, 0.053},
      {AnomalyKind::FallStanding, Method::HMM, 6, 0.92, 0.0},
  };
  return rows;
}

bool ReproduceReport::gating_pass() const {
  for (const auto& r : rows)
    if (r.gating && !r.pass) return false;
  return true;
}

std::uint64_t train_seed(std::uint64_t master, int replicate) {
  return Rng::substream(master, {stream_key("train"), static_cast<std::uint64_t>(replicate)}).engine()();
}

std::uint64_t test_seed(std::uint64_t master, int replicate) {
  return Rng::substream(master, {stream_key("test"), static_cast<std::uint64_t>(replicate)}).engine()();
}

namespace {

struct Band {
  bool gating;
  std::optional<double> min_sens;
  std::optional<double> max_far;
};

Band desk_band(const ReferenceRow& r) {
  using K = AnomalyKind;
  if ((r.anomaly == K::SemiBedridden || r.anomaly == K::Housebound) && r.method == Method::ST) return {true, 0.8, 0.05};
  if (r.anomaly == K::Forgetting && r.method == Method::DT) return {true, 0.8, 0.1};
  if (r.anomaly == K::Wandering && r.method == Method::HMM && r.denoise_threshold == 28) return {true, 0.9, 0.2};
  if (r.anomaly == K::FallStanding && r.method == Method::HMM && r.denoise_threshold == 6) return {true, 0.7, {}};
  if (r.anomaly == K::FallWalking && r.method == Method::RF && r.denoise_threshold == 16) return {true, 0.5, {}};
  return {false, {}, {}};
}

bool full_pass(const ReferenceRow& r, const ScoreReport& s) {
  if (!s.sensitivity || std::abs(*s.sensitivity - r.sensitivity) > 0.15 + 1e-12) return false;
  if (r.far_per_day > 0.0) return s.far_per_day <= 5.0 * r.far_per_day && s.far_per_day >= r.far_per_day / 5.0;
  return s.far_per_day <= 0.05;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ReproduceReport reproduce(const ReproduceOptions& o, const SimulationConfig& base) {
  ReproduceReport report;
  report.scale = o.scale;
  const bool desk = o.scale == Scale::Desk;
  report.seeds = o.seeds > 0 ? o.seeds : (desk ? 5 : 1);
  report.days = o.days > 0 ? o.days : (desk ? 720 : 3240);
  report.rate_scale = o.rate_scale > 0.0 ? o.rate_scale : (desk ? 3.0 : 1.0);
  report.notes.push_back("anomaly rates scaled by " + std::to_string(report.rate_scale) + ", " +
                         std::to_string(report.days) + "-day train and test simulations, " +
                         std::to_string(report.seeds) + " replicate(s) pooled");

  const auto refs = reference_rows();
  std::vector<std::vector<ScoreReport>> scores(refs.size());
  std::vector<std::string> skipped(refs.size());
  auto log = [&](const std::string& s) {
    if (o.log) *o.log << s << std::endl;
  };

  for (int r = 0; r < report.seeds; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    SimulationConfig cfg = base;
    cfg.horizon_days = report.days;
    cfg.anomalies.rate_scale = base.anomalies.rate_scale * report.rate_scale;

    std::map<std::pair<AnomalyKind, Method>, Model> models;
    {
      cfg.seed = train_seed(o.seed, r);
      auto sim = simulate(cfg);
      auto labels = labels_from_episodes(sim.episodes, cfg.horizon_days);
      Observations data(std::move(sim.events), cfg.layout, cfg.horizon_days);
      log("replicate " + std::to_string(r) + ": training data simulated in " + std::to_string(elapsed(t0)) + " s");
      for (std::size_t i = 0; i < refs.size(); ++i) {
        auto key = std::make_pair(refs[i].anomaly, refs[i].method);
        if (models.count(key)) continue;
        try {
          models.emplace(key, train_model(key.first, key.second, data, labels,
                                          Rng::substream(cfg.seed, {stream_key("forest")}).engine()()));
        } catch (const std::invalid_argument& e) {
          log(std::string("  skipped ") + to_string(key.first) + ":" + to_string(key.second) + ": " + e.what());
        }
      }
      log("replicate " + std::to_string(r) + ": models trained at " + std::to_string(elapsed(t0)) + " s");
    }

    cfg.seed = test_seed(o.seed, r);
    auto sim = simulate(cfg);
    auto labels = labels_from_episodes(sim.episodes, cfg.horizon_days);
    Observations data(std::move(sim.events), cfg.layout, cfg.horizon_days);
    std::map<std::pair<AnomalyKind, Method>, LabelTrack> raw;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      auto key = std::make_pair(refs[i].anomaly, refs[i].method);
      auto m = models.find(key);
      if (m == models.end()) {
        skipped[i] = "model not trained in at least one replicate";
        continue;
      }
      if (!raw.count(key)) raw.emplace(key, detect_raw(m->second, data));
      scores[i].push_back(score(labels.at(key.first), raw.at(key), cfg.horizon_days, refs[i].denoise_threshold));
    }
    log("replicate " + std::to_string(r) + ": evaluated at " + std::to_string(elapsed(t0)) + " s");
  }

  for (std::size_t i = 0; i < refs.size(); ++i) {
    ReproduceRow row;
    row.reference = refs[i];
    if (desk) {
      Band b = desk_band(refs[i]);
      row.gating = b.gating;
      row.min_sensitivity = b.min_sens;
      row.max_far = b.max_far;
    } else {
      row.min_sensitivity = std::max(0.0, refs[i].sensitivity - 0.15);
      row.max_far = refs[i].far_per_day > 0.0 ? 5.0 * refs[i].far_per_day : 0.05;
    }
    if (scores[i].empty()) {
      row.pass = !row.gating;
      row.note = skipped[i].empty() ? "no scores" : skipped[i];
    } else {
      row.pooled = pool(scores[i]);
      if (!skipped[i].empty()) row.note = skipped[i];
      if (desk) {
        row.pass = true;
        if (row.min_sensitivity) row.pass = row.pooled.sensitivity && *row.pooled.sensitivity >= *row.min_sensitivity;
        if (row.max_far) row.pass = row.pass && row.pooled.far_per_day <= *row.max_far;
        if (row.gating && !skipped[i].empty()) row.pass = false;
      } else {
        row.pass = full_pass(refs[i], row.pooled);
      }
    }
    row.pooled.denoise_threshold = refs[i].denoise_threshold;
    report.rows.push_back(row);
  }
  return report;
}

void write_report(const ReproduceReport& report, std::ostream& out) {
  out << "# scale=" << (report.scale == Scale::Desk ? "desk" : "full") << " replicates=" << report.seeds
      << " days=" << report.days << " rate_scale=" << report.rate_scale << '\n';
  for (const auto& n : report.notes) out << "# " << n << '\n';
  out << kScoreHeader
      << ",reference_sensitivity,reference_far_per_day,min_sensitivity,max_far_per_day,gating,pass,note\n";
  for (const auto& r : report.rows) {
    std::ostringstream line;
    write_score_row(line, to_string(r.reference.anomaly), to_string(r.reference.method), r.pooled);
    std::string s = line.str();
    s.pop_back();
    out << s << ',' << r.reference.sensitivity << ',' << r.reference.far_per_day << ','
        << format_optional(r.min_sensitivity) << ',' << format_optional(r.max_far) << ',' << (r.gating ? "yes" : "no")
        << ','
        << (!r.min_sensitivity && !r.max_far ? "-" : r.pass ? "pass" : "FAIL") << ',' << r.note << '\n';
  }
}

}  // namespace homesense
