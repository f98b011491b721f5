#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "homesense/forgetting.hpp"
#include "homesense/label_track.hpp"
#include "homesense/nrd.hpp"

namespace homesense {

// Weighted rows with sparse features; absent features are 0. Each row carries a weight per class.
struct Dataset {
  int features = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::pair<int, double>> entries;
  std::vector<double> w0;
  std::vector<double> w1;

  std::size_t rows() const { return w0.size(); }
  void add_row(std::span<const std::pair<int, double>> values, double weight0, double weight1);
  void add_dense_row(std::span<const double> values, double weight0, double weight1);
  std::span<const std::pair<int, double>> row(std::size_t i) const {
    return {entries.data() + offsets[i], entries.data() + offsets[i + 1]};
  }
  double value(std::size_t i, int feature) const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double w0 = 0.0;
  double w1 = 0.0;
  int label = 0;
};

struct TreeParams {
  double min_split = 5.0;  // nodes with less total weight are leaves
  int max_features = 0;    // 0 = all features
  int max_depth = 64;
};

// Binary CART with Gini impurity; x[feature] <= threshold goes left.
struct DecisionTree {
  std::vector<TreeNode> nodes;
  int features = 0;

  int predict(std::span<const double> x) const;
  int predict_sparse(std::span<const std::pair<int, double>> x) const;
  int depth() const;
  int leaf_count() const;
};

class Rng;
DecisionTree fit_cart(const Dataset& data, const TreeParams& params, Rng* rng = nullptr);

// Weighted Gini impurity 1 - p0^2 - p1^2.
double gini(double w0, double w1);

struct RandomForest {
  std::vector<DecisionTree> trees;
  int features = 0;

  int votes(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return 2 * votes(x) > static_cast<int>(trees.size()) ? 1 : 0; }
};

struct ForestParams {
  int trees = 100;
  double min_split = 2.0;
  std::uint64_t seed = 1;
};

// Each tree sees Poisson-resampled class weights and sqrt(features) candidates per split.
RandomForest fit_forest(const Dataset& data, const ForestParams& params);

// Forgetting detector: one tree on (f1, f2) per 2-hour window.
Dataset forgetting_dataset(std::span<const ForgettingWindow> windows, const LabelTrack& labels);
DecisionTree fit_forgetting_tree(std::span<const ForgettingWindow> windows, const LabelTrack& labels,
                                 double min_split = 5.0);
LabelTrack predict_forgetting(const DecisionTree& tree, std::span<const ForgettingWindow> windows);

// Fall-while-walking detector on NRD features, trained on seconds within +-window_days of a fall.
Dataset nrd_dataset(const NrdMatrix& nrd, const LabelTrack& labels, std::int64_t window_days = 3);
RandomForest fit_fall_forest(const NrdMatrix& nrd, const LabelTrack& labels, const ForestParams& params,
                             std::int64_t window_days = 3);

// Per-row step function of the forest's vote as the row's NRD value varies, all other rows 0.
class NrdStepPredictor {
 public:
  NrdStepPredictor(const RandomForest& forest, int rows);
  int predict(int row, std::int64_t value) const;
  LabelTrack predict(const NrdMatrix& nrd) const;

 private:
  struct Step {
    std::vector<double> cuts;   // ascending; label i applies to values in (cuts[i-1], cuts[i]]
    std::vector<char> labels;   // cuts.size() + 1 entries
  };
  int zero_label_ = 0;
  std::vector<Step> steps_;
};

}  // namespace homesense
