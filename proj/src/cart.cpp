#include "homesense/cart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "homesense/rng.hpp"

namespace homesense {

void Dataset::add_row(std::span<const std::pair<int, double>> values, double weight0, double weight1) {
  for (const auto& [f, v] : values) {
    if (f < 0 || f >= features) throw std::out_of_range("feature index out of range");
    if (v != 0.0) entries.emplace_back(f, v);
  }
  offsets.push_back(entries.size());
  w0.push_back(weight0);
  w1.push_back(weight1);
}

void Dataset::add_dense_row(std::span<const double> values, double weight0, double weight1) {
  if (static_cast<int>(values.size()) != features) throw std::invalid_argument("row width differs from feature count");
  for (int f = 0; f < features; ++f)
    if (values[f] != 0.0) entries.emplace_back(f, values[f]);
  offsets.push_back(entries.size());
  w0.push_back(weight0);
  w1.push_back(weight1);
}

double Dataset::value(std::size_t i, int feature) const {
  for (const auto& [f, v] : row(i))
    if (f == feature) return v;
  return 0.0;
}

double gini(double w0, double w1) {
  double w = w0 + w1;
  if (w <= 0.0) return 0.0;
  double p0 = w0 / w, p1 = w1 / w;
  return 1.0 - p0 * p0 - p1 * p1;
}

int DecisionTree::predict(std::span<const double> x) const {
  int n = 0;
  while (nodes[n].feature >= 0) n = x[nodes[n].feature] <= nodes[n].threshold ? nodes[n].left : nodes[n].right;
  return nodes[n].label;
}

int DecisionTree::predict_sparse(std::span<const std::pair<int, double>> x) const {
  int n = 0;
  while (nodes[n].feature >= 0) {
    double v = 0.0;
    for (const auto& [f, val] : x)
      if (f == nodes[n].feature) v = val;
    n = v <= nodes[n].threshold ? nodes[n].left : nodes[n].right;
  }
  return nodes[n].label;
}

int DecisionTree::depth() const {
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int best = 0;
  while (!stack.empty()) {
    auto [n, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes[n].feature >= 0) {
      stack.emplace_back(nodes[n].left, d + 1);
      stack.emplace_back(nodes[n].right, d + 1);
    }
  }
  return best;
}

int DecisionTree::leaf_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

struct Entry {
  double value;
  double w0;
  double w1;
};

constexpr double kMinGain = 1e-12;

class Builder {
 public:
  Builder(const Dataset& data, const std::vector<double>& w0, const std::vector<double>& w1, const TreeParams& params,
          Rng* rng)
      : data_(data), w0_(w0), w1_(w1), params_(params), rng_(rng), slot_(data.features, -1) {}

  DecisionTree build() {
    DecisionTree tree;
    tree.features = data_.features;
    std::vector<std::uint32_t> all;
    for (std::size_t i = 0; i < data_.rows(); ++i)
      if (w0_[i] > 0.0 || w1_[i] > 0.0) all.push_back(static_cast<std::uint32_t>(i));
    struct Task {
      int node;
      std::vector<std::uint32_t> rows;
      int depth;
    };
    std::vector<Task> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, std::move(all), 0});
    while (!stack.empty()) {
      Task task = std::move(stack.back());
      stack.pop_back();
      double W0 = 0.0, W1 = 0.0;
      for (auto i : task.rows) {
        W0 += w0_[i];
        W1 += w1_[i];
      }
      TreeNode& node = tree.nodes[task.node];
      node.w0 = W0;
      node.w1 = W1;
      node.label = W1 > W0 ? 1 : 0;
      if (W0 + W1 < params_.min_split || W0 == 0.0 || W1 == 0.0 || task.depth >= params_.max_depth) continue;
      Split s = best_split(task.rows, W0, W1);
      if (s.feature < 0) continue;
      std::vector<std::uint32_t> left, right;
      for (auto i : task.rows) (data_.value(i, s.feature) <= s.threshold ? left : right).push_back(i);
      int l = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& parent = tree.nodes[task.node];
      parent.feature = s.feature;
      parent.threshold = s.threshold;
      parent.left = l;
      parent.right = l + 1;
      std::vector<std::uint32_t>().swap(task.rows);
      stack.push_back({l + 1, std::move(right), task.depth + 1});
      stack.push_back({l, std::move(left), task.depth + 1});
    }
    return tree;
  }

 private:
  Split best_split(const std::vector<std::uint32_t>& rows, double W0, double W1) {
    const int F = data_.features;
    std::vector<int> order(F);
    std::iota(order.begin(), order.end(), 0);
    int batch = F;
    if (params_.max_features > 0 && params_.max_features < F && rng_) {
      for (int i = F - 1; i > 0; --i) std::swap(order[i], order[rng_->below(static_cast<std::uint64_t>(i) + 1)]);
      batch = params_.max_features;
    }
    Split best;
    for (int begin = 0; begin < F && best.feature < 0; begin += batch) {
      int end = std::min(F, begin + batch);
      scan(rows, W0, W1, std::span<const int>(order.data() + begin, end - begin), best);
      batch = F;  // fall back to the remaining features when the sample gave no split
    }
    return best;
  }

  void scan(const std::vector<std::uint32_t>& rows, double W0, double W1, std::span<const int> feats, Split& best) {
    buckets_.resize(feats.size());
    for (std::size_t k = 0; k < feats.size(); ++k) {
      slot_[feats[k]] = static_cast<int>(k);
      buckets_[k].clear();
    }
    for (auto i : rows) {
      for (const auto& [f, v] : data_.row(i)) {
        int k = slot_[f];
        if (k >= 0) buckets_[k].push_back({v, w0_[i], w1_[i]});
      }
    }
    const double parent = gini(W0, W1);
    const double W = W0 + W1;
    for (std::size_t k = 0; k < feats.size(); ++k) {
      auto& b = buckets_[k];
      double z0 = W0, z1 = W1;
      for (const auto& e : b) {
        z0 -= e.w0;
        z1 -= e.w1;
      }
      if (z0 > 1e-9 * W || z1 > 1e-9 * W) b.push_back({0.0, std::max(0.0, z0), std::max(0.0, z1)});
      std::sort(b.begin(), b.end(), [](const Entry& a, const Entry& c) { return a.value < c.value; });
      double L0 = 0.0, L1 = 0.0;
      for (std::size_t j = 0; j < b.size(); ++j) {
        L0 += b[j].w0;
        L1 += b[j].w1;
        if (j + 1 == b.size() || b[j + 1].value == b[j].value) continue;
        double R0 = W0 - L0, R1 = W1 - L1;
        double child = ((L0 + L1) * gini(L0, L1) + (R0 + R1) * gini(R0, R1)) / W;
        double gain = parent - child;
        if (gain > kMinGain && gain > best.gain + kMinGain) {
          double a = b[j].value, c = b[j + 1].value;
          double mid = a + (c - a) / 2.0;
          if (!(mid >= a && mid < c)) mid = a;
          best = {feats[k], mid, gain};
        }
      }
    }
    for (int f : feats) slot_[f] = -1;
  }

  const Dataset& data_;
  const std::vector<double>& w0_;
  const std::vector<double>& w1_;
  TreeParams params_;
  Rng* rng_;
  std::vector<int> slot_;
  std::vector<std::vector<Entry>> buckets_;
};

}  // namespace

DecisionTree fit_cart(const Dataset& data, const TreeParams& params, Rng* rng) {
  return Builder(data, data.w0, data.w1, params, rng).build();
}

int RandomForest::votes(std::span<const double> x) const {
  int v = 0;
  for (const auto& t : trees) v += t.predict(x);
  return v;
}

RandomForest fit_forest(const Dataset& data, const ForestParams& params) {
  RandomForest forest;
  forest.features = data.features;
  TreeParams tp;
  tp.min_split = params.min_split;
  tp.max_features = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(data.features)))));
  tp.max_depth = 1000;
  // Resampling visits rows in content order so the forest does not depend on row order.
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = data.row(a), rb = data.row(b);
    if (!std::equal(ra.begin(), ra.end(), rb.begin(), rb.end()))
      return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    return std::make_pair(data.w0[a], data.w1[a]) < std::make_pair(data.w0[b], data.w1[b]);
  });
  std::vector<double> w0(data.rows()), w1(data.rows());
  for (int t = 0; t < params.trees; ++t) {
    Rng rng = Rng::substream(params.seed, {stream_key("tree"), static_cast<std::uint64_t>(t)});
    for (std::size_t i : order) {
      w0[i] = data.w0[i] > 0.0 ? rng.poisson(data.w0[i]) : 0.0;
      w1[i] = data.w1[i] > 0.0 ? rng.poisson(data.w1[i]) : 0.0;
    }
    forest.trees.push_back(Builder(data, w0, w1, tp, &rng).build());
  }
  return forest;
}

Dataset forgetting_dataset(std::span<const ForgettingWindow> windows, const LabelTrack& labels) {
  if (static_cast<std::int64_t>(windows.size()) != labels.length)
    throw std::invalid_argument("feature windows and labels differ in length");
  Dataset d;
  d.features = 2;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    double row[2] = {windows[k].f1(), windows[k].f2()};
    bool y = labels.at(static_cast<std::int64_t>(k));
    d.add_dense_row(row, y ? 0.0 : 1.0, y ? 1.0 : 0.0);
  }
  return d;
}

DecisionTree fit_forgetting_tree(std::span<const ForgettingWindow> windows, const LabelTrack& labels,
                                 double min_split) {
  if (labels.intervals.empty()) throw std::invalid_argument("no forgetting windows in the training labels");
  TreeParams p;
  p.min_split = min_split;
  return fit_cart(forgetting_dataset(windows, labels), p);
}

LabelTrack predict_forgetting(const DecisionTree& tree, std::span<const ForgettingWindow> windows) {
  LabelTrack y;
  y.unit_seconds = kUnitTwoHours;
  y.length = static_cast<std::int64_t>(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k) {
    double row[2] = {windows[k].f1(), windows[k].f2()};
    if (tree.predict(row)) y.append({static_cast<std::int64_t>(k), static_cast<std::int64_t>(k)});
  }
  return y;
}

Dataset nrd_dataset(const NrdMatrix& nrd, const LabelTrack& labels, std::int64_t window_days) {
  if (labels.length != nrd.columns) throw std::invalid_argument("NRD columns and labels differ in length");
  if (labels.intervals.empty()) throw std::invalid_argument("no falls in the training labels");
  const std::int64_t pad = window_days * 86400 / labels.unit_seconds;
  std::vector<Interval> windows;
  for (const auto& iv : labels.intervals) {
    Interval w{std::max<std::int64_t>(0, iv.start - pad), std::min(nrd.columns - 1, iv.end + pad)};
    if (!windows.empty() && w.start <= windows.back().end + 1) windows.back().end = std::max(windows.back().end, w.end);
    else windows.push_back(w);
  }

  // key: row * (cap + 1) + value, value 0 shared by all rows
  std::unordered_map<std::int64_t, std::pair<double, double>> counts;
  const std::int64_t stride = kNrdCap + 1;
  std::size_t ri = 0, li = 0;
  for (const auto& w : windows) {
    for (std::int64_t t = w.start; t <= w.end; ++t) {
      while (ri < nrd.runs.size() && nrd.runs[ri].last() < t) ++ri;
      while (li < labels.intervals.size() && labels.intervals[li].end < t) ++li;
      std::int64_t key = 0;
      if (ri < nrd.runs.size() && nrd.runs[ri].first <= t) {
        std::int64_t v = nrd.runs[ri].value_at(t);
        if (v != 0) key = nrd.runs[ri].row * stride + v;
      }
      bool y = li < labels.intervals.size() && labels.intervals[li].start <= t;
      auto& c = counts[key];
      (y ? c.second : c.first) += 1.0;
    }
  }
  std::vector<std::int64_t> keys;
  keys.reserve(counts.size());
  for (const auto& kv : counts) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  Dataset d;
  d.features = nrd.rows();
  for (auto key : keys) {
    const auto& c = counts[key];
    if (key == 0) {
      d.add_row({}, c.first, c.second);
    } else {
      std::pair<int, double> e{static_cast<int>(key / stride), static_cast<double>(key % stride)};
      d.add_row(std::span(&e, 1), c.first, c.second);
    }
  }
  return d;
}

RandomForest fit_fall_forest(const NrdMatrix& nrd, const LabelTrack& labels, const ForestParams& params,
                             std::int64_t window_days) {
  return fit_forest(nrd_dataset(nrd, labels, window_days), params);
}

namespace {

int tree_on_row(const DecisionTree& tree, int row, double v) {
  int n = 0;
  while (tree.nodes[n].feature >= 0) {
    double x = tree.nodes[n].feature == row ? v : 0.0;
    n = x <= tree.nodes[n].threshold ? tree.nodes[n].left : tree.nodes[n].right;
  }
  return tree.nodes[n].label;
}

int forest_on_row(const RandomForest& forest, int row, double v) {
  int votes = 0;
  for (const auto& t : forest.trees) votes += tree_on_row(t, row, v);
  return 2 * votes > static_cast<int>(forest.trees.size()) ? 1 : 0;
}

}  // namespace

NrdStepPredictor::NrdStepPredictor(const RandomForest& forest, int rows) : steps_(rows) {
  if (forest.features != rows) throw std::invalid_argument("forest feature count differs from NRD rows");
  zero_label_ = forest_on_row(forest, 0, 0.0);
  for (int r = 0; r < rows; ++r) {
    auto& s = steps_[r];
    for (const auto& t : forest.trees)
      for (const auto& n : t.nodes)
        if (n.feature == r) s.cuts.push_back(n.threshold);
    std::sort(s.cuts.begin(), s.cuts.end());
    s.cuts.erase(std::unique(s.cuts.begin(), s.cuts.end()), s.cuts.end());
    for (double c : s.cuts) s.labels.push_back(static_cast<char>(forest_on_row(forest, r, c)));
    s.labels.push_back(static_cast<char>(forest_on_row(forest, r, s.cuts.empty() ? 0.0 : s.cuts.back() + 1.0)));
  }
}

int NrdStepPredictor::predict(int row, std::int64_t value) const {
  if (value == 0) return zero_label_;
  const auto& s = steps_.at(row);
  auto i = std::lower_bound(s.cuts.begin(), s.cuts.end(), static_cast<double>(value)) - s.cuts.begin();
  return s.labels[i];
}

LabelTrack NrdStepPredictor::predict(const NrdMatrix& nrd) const {
  LabelTrack y;
  y.unit_seconds = kUnitSecond;
  y.length = nrd.columns;
  std::int64_t cursor = 0;
  auto fill = [&](std::int64_t a, std::int64_t b, int label) {
    if (a <= b && label) y.append({a, b});
  };
  for (const auto& run : nrd.runs) {
    fill(cursor, run.first - 1, zero_label_);
    const auto& s = steps_.at(run.row);
    if (run.slope == 0) {
      fill(run.first, run.last(), predict(run.row, run.c0));
    } else {
      std::int64_t t = run.first;
      while (t <= run.last()) {
        std::int64_t v = run.value_at(t);
        int label = predict(run.row, v);
        // last column whose value keeps the same label
        std::int64_t until = run.last();
        if (v == 0 || run.slope < 0) {
          until = t;
        } else {
          auto i = std::lower_bound(s.cuts.begin(), s.cuts.end(), static_cast<double>(v)) - s.cuts.begin();
          if (i < static_cast<std::ptrdiff_t>(s.cuts.size())) {
            auto vmax = static_cast<std::int64_t>(std::floor(s.cuts[i]));
            if (run.slope > 0) until = std::min(until, run.first + (vmax - run.c0) / run.slope);
          }
        }
        until = std::max(until, t);
        fill(t, until, label);
        t = until + 1;
      }
    }
    cursor = run.last() + 1;
  }
  fill(cursor, nrd.columns - 1, zero_label_);
  return y;
}

}  // namespace homesense
