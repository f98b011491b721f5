#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "homesense/cart.hpp"
#include "homesense/config.hpp"
#include "homesense/daily.hpp"
#include "homesense/data_matrix.hpp"
#include "homesense/forgetting.hpp"
#include "homesense/label_track.hpp"
#include "homesense/metrics.hpp"
#include "homesense/nrd.hpp"
#include "homesense/sequence_model.hpp"
#include "homesense/threshold.hpp"

namespace homesense {

enum class Method { ST, DT, RF, DNB, HMM };

const char* to_string(Method m);
Method method_from_string(const std::string& name);
bool valid_pairing(AnomalyKind kind, Method method);
std::string valid_pairings();
// Threshold used when none is given: 28 s wandering, 6 s fall while standing, 16 s fall while walking.
std::int64_t default_denoise(AnomalyKind kind, Method method);

using LabelSet = std::map<AnomalyKind, LabelTrack>;

LabelSet labels_from_episodes(std::span<const AnomalyEpisode> episodes, int horizon_days);

// Features derived from one event stream, computed on first use.
class Observations {
 public:
  Observations(std::vector<SensorEvent> events, SensorLayout layout, int days);

  int days() const { return days_; }
  std::int64_t seconds() const { return static_cast<std::int64_t>(days_) * 86400; }
  const SensorLayout& layout() const { return layout_; }
  const std::vector<SensorEvent>& events() const { return events_; }
  const DailySeries& daily();
  const std::vector<ForgettingWindow>& forgetting();
  const DataMatrix& matrix();
  const NrdMatrix& nrd();
  void release_matrix();

 private:
  std::vector<SensorEvent> events_;
  SensorLayout layout_;
  int days_;
  std::optional<DailySeries> daily_;
  std::optional<std::vector<ForgettingWindow>> forgetting_;
  std::optional<DataMatrix> matrix_;
  std::optional<NrdMatrix> nrd_;
};

struct Model {
  AnomalyKind anomaly = AnomalyKind::SemiBedridden;
  Method method = Method::ST;
  int sensors = 0;
  std::int64_t unit_seconds = kUnitDay;
  std::int64_t denoise_threshold = 0;
  std::optional<ThresholdDetector> threshold;
  std::optional<ThresholdDetector> sleep_exclusion;  // housebound only
  std::optional<DecisionTree> tree;
  std::optional<RandomForest> forest;
  std::optional<SequenceModel> sequence;
  bool viterbi = false;
};

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const Model& m);
Model model_from_json(const nlohmann::json& j);
void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

// Throws std::invalid_argument on an unsupported pairing or when the labels hold no positives.
Model train_model(AnomalyKind kind, Method method, Observations& data, const LabelSet& labels, std::uint64_t seed);
// Prediction before denoising.
LabelTrack detect_raw(const Model& model, Observations& data);
LabelTrack detect(const Model& model, Observations& data, std::optional<std::int64_t> denoise_threshold = {});

enum class Scale { Desk, Full };

struct ReferenceRow {
  AnomalyKind anomaly;
  Method method;
  std::int64_t denoise_threshold;
  double sensitivity;
  double far_per_day;
};

// Reference detection results used as the comparison target.
std::span<const ReferenceRow> reference_rows();

struct ReproduceRow {
  ReferenceRow reference;
  ScoreReport pooled;
  bool gating = false;
  std::optional<double> min_sensitivity;
  std::optional<double> max_far;
  bool pass = true;
  std::string note;
};

struct ReproduceReport {
  Scale scale = Scale::Desk;
  int seeds = 1;
  int days = 0;
  double rate_scale = 1.0;
  std::vector<ReproduceRow> rows;
  std::vector<std::string> notes;
  bool gating_pass() const;
};

struct ReproduceOptions {
  Scale scale = Scale::Desk;
  std::uint64_t seed = 1;
  int seeds = 0;        // 0 picks 5 for desk, 1 for full
  int days = 0;         // 0 picks 720 for desk, 3240 for full
  double rate_scale = 0.0;  // 0 picks 3 for desk, 1 for full
  std::ostream* log = nullptr;
};

ReproduceReport reproduce(const ReproduceOptions& options, const SimulationConfig& base = SimulationConfig::defaults());
void write_report(const ReproduceReport& report, std::ostream& out);

// Seeds of the training and test simulations for one replicate.
std::uint64_t train_seed(std::uint64_t master, int replicate);
std::uint64_t test_seed(std::uint64_t master, int replicate);

}  // namespace homesense
