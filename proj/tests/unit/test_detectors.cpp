#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "../oracles.hpp"
#include "homesense/cart.hpp"
#include "homesense/rng.hpp"
#include "homesense/sequence_model.hpp"
#include "homesense/threshold.hpp"

using namespace homesense;

namespace {

LabelTrack day_track(std::int64_t length, std::vector<Interval> ivs) {
  LabelTrack y;
  y.unit_seconds = kUnitDay;
  y.length = length;
  for (auto iv : ivs) y.append(iv);
  return y;
}

ThresholdDetector fixed(double theta, Direction dir) {
  ThresholdDetector d;
  d.theta = theta;
  d.direction = dir;
  return d;
}

}  // namespace

TEST_CASE("threshold arithmetic") {
  CHECK(std::abs(ThresholdDetector::theta_for(8.02, 1.15, 0.10, Direction::Above) - 8.135) < 1e-9);
  CHECK(std::abs(ThresholdDetector::theta_for(3.95, 2.12, 1.80, Direction::Below) - 0.134) < 1e-9);
  CHECK(grid_value(0) == -1.0);
  CHECK(grid_value(kGridSteps) == 3.0);
  CHECK(grid_value(22) == doctest::Approx(0.10));
  CHECK(grid_value(56) == doctest::Approx(1.80));
}

TEST_CASE("run rule needs seven consecutive exceeding days") {
  auto d = fixed(10.0, Direction::Above);
  std::vector<double> six(20, 8.0), ten(20, 8.0);
  for (int i = 5; i < 11; ++i) six[i] = 11.0;
  for (int i = 5; i < 15; ++i) ten[i] = 11.0;
  CHECK(d.classify(six).intervals.empty());
  CHECK(d.classify(ten).intervals == std::vector<Interval>{{5, 14}});
}

TEST_CASE("run monitor emits a run retroactively at its seventh day") {
  RunMonitor m(7);
  for (int day = 0; day < 6; ++day) CHECK(m.observe(day, true).empty());
  CHECK(m.observe(6, true) == std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK(m.observe(7, true) == std::vector<std::int64_t>{7});
  CHECK(m.observe(8, false).empty());
  CHECK(m.observe(9, true).empty());
}

TEST_CASE("semi-bedridden days are never also housebound") {
  std::vector<double> sleep(40, 8.0), outs(40, 4.0);
  for (int i = 0; i < 20; ++i) outs[i] = 0.0;
  for (int i = 10; i < 30; ++i) sleep[i] = 11.0;
  auto p = detect_weeksscale(sleep, outs, fixed(10.0, Direction::Above), fixed(0.5, Direction::Below));
  CHECK(p.semi_bedridden.intervals == std::vector<Interval>{{10, 29}});
  CHECK(p.housebound.intervals == std::vector<Interval>{{0, 9}});
  for (std::int64_t d = 0; d < 40; ++d) CHECK_FALSE((p.semi_bedridden.at(d) && p.housebound.at(d)));
}

TEST_CASE("fit_threshold needs positive labels") {
  std::vector<double> v(30, 8.0);
  CHECK_THROWS_AS(fit_threshold(v, day_track(30, {}), Direction::Above), std::invalid_argument);
}

TEST_CASE("fit_threshold attains the grid maximum F1") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal(8.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 200;
    std::vector<double> v(n);
    for (auto& x : v) x = normal(gen);
    std::vector<Interval> ivs;
    for (int s = static_cast<int>(gen() % 30); s < n - 10; s += 40 + static_cast<int>(gen() % 40)) {
      const int len = 5 + static_cast<int>(gen() % 15);
      ivs.push_back({s, std::min(n - 1, s + len - 1)});
      for (int d = s; d < s + len && d < n; ++d) v[d] += 1.0 + 2.0 * (trial % 3);
    }
    auto labels = day_track(n, ivs);
    const Direction dir = trial % 2 ? Direction::Above : Direction::Below;
    if (dir == Direction::Below)
      for (auto& x : v) x = 16.0 - x;
    auto d = fit_threshold(v, labels, dir);
    const double mu = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    CHECK(d.mu == doctest::Approx(mu));
    CHECK(d.sigma == doctest::Approx(std::sqrt(ss / (n - 1))));
    // Exhaustive re-scan with an independent F1 count.
    double best = -1.0, best_c = 0.0;
    for (int k = 0; k <= 80; ++k) {
      const double c = -1.0 + 0.05 * k;
      const double theta = dir == Direction::Above ? mu + c * d.sigma : mu - c * d.sigma;
      std::vector<int> exceed(n), pred(n, 0);
      for (int i = 0; i < n; ++i) exceed[i] = dir == Direction::Above ? v[i] > theta : v[i] < theta;
      for (int i = 0; i < n;) {
        int j = i;
        while (j < n && exceed[j]) ++j;
        if (j - i >= 7)
          for (int q = i; q < j; ++q) pred[q] = 1;
        i = std::max(j, i + 1);
      }
      int tp = 0, fp = 0, fn = 0;
      for (int i = 0; i < n; ++i) {
        tp += pred[i] && labels.at(i);
        fp += pred[i] && !labels.at(i);
        fn += !pred[i] && labels.at(i);
      }
      const double f1 = tp ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
      if (f1 > best + 1e-12) {
        best = f1;
        best_c = c;
      }
    }
    CHECK(d.c == doctest::Approx(best_c));
    CHECK(f1_score(labels, d.classify(v)) == doctest::Approx(best));
  }
}

TEST_CASE("gini impurity") {
  CHECK(gini(5, 5) == doctest::Approx(0.5));
  CHECK(gini(4, 0) == 0.0);
  CHECK(gini(0, 0) == 0.0);
}

namespace {

double accuracy(const DecisionTree& t, const Dataset& d) {
  double ok = 0, all = 0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    std::vector<double> x(d.features, 0.0);
    for (const auto& [f, v] : d.row(i)) x[f] = v;
    const int label = d.w1[i] > d.w0[i] ? 1 : 0;
    ok += t.predict(x) == label;
    all += 1;
  }
  return ok / all;
}

void check_gini_decreases(const DecisionTree& t) {
  for (const auto& n : t.nodes) {
    if (n.feature < 0) continue;
    const auto& l = t.nodes[n.left];
    const auto& r = t.nodes[n.right];
    const double W = n.w0 + n.w1;
    const double child = ((l.w0 + l.w1) * gini(l.w0, l.w1) + (r.w0 + r.w1) * gini(r.w0, r.w1)) / W;
    CHECK(child < gini(n.w0, n.w1));
  }
}

}  // namespace

TEST_CASE("tree on separable data is a single split") {
  Dataset d;
  d.features = 1;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x{static_cast<double>(i)};
    d.add_dense_row(x, i < 20 ? 1.0 : 0.0, i < 20 ? 0.0 : 1.0);
  }
  auto t = fit_cart(d, {});
  CHECK(t.depth() == 1);
  CHECK(accuracy(t, d) == 1.0);
  check_gini_decreases(t);
}

TEST_CASE("tree learns an XOR pattern") {
  Dataset d;
  d.features = 2;
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 203; ++i) {
    std::vector<double> x{u(gen), u(gen)};
    const bool one = (x[0] > 0.5) != (x[1] > 0.5);
    d.add_dense_row(x, one ? 0.0 : 1.0, one ? 1.0 : 0.0);
  }
  auto t = fit_cart(d, {});
  CHECK(t.depth() >= 2);
  CHECK(accuracy(t, d) >= 0.95);
  check_gini_decreases(t);
}

TEST_CASE("tree predictions do not depend on row order") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  for (int i = 0; i < 300; ++i) {
    xs.push_back({u(gen), u(gen), u(gen)});
    ys.push_back(xs.back()[0] + xs.back()[2] * 0.5 + u(gen) * 0.3 > 8.0);
  }
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  Dataset a, b;
  a.features = b.features = 3;
  for (std::size_t i = 0; i < xs.size(); ++i) a.add_dense_row(xs[i], ys[i] ? 0 : 1, ys[i] ? 1 : 0);
  std::shuffle(order.begin(), order.end(), gen);
  for (auto i : order) b.add_dense_row(xs[i], ys[i] ? 0 : 1, ys[i] ? 1 : 0);
  auto ta = fit_cart(a, {});
  auto tb = fit_cart(b, {});
  ForestParams fp;
  fp.trees = 25;
  fp.seed = 3;
  auto fa = fit_forest(a, fp);
  auto fb = fit_forest(b, fp);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> x{u(gen), u(gen), u(gen)};
    CHECK(ta.predict(x) == tb.predict(x));
    CHECK(fa.votes(x) == fb.votes(x));
  }
}

TEST_CASE("forest separates falls marked by a long nonresponse") {
  Dataset d;
  d.features = 6;
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<int> value(0, 60), row(0, 5);
  std::vector<std::pair<std::vector<double>, int>> samples;
  for (int i = 0; i < 600; ++i) {
    std::vector<double> x(6, 0.0);
    const int r = row(gen);
    x[r] = value(gen);
    const int label = r == 2 && x[r] > 25 ? 1 : 0;
    d.add_dense_row(x, label ? 0.0 : 1.0, label ? 1.0 : 0.0);
    samples.emplace_back(x, label);
  }
  ForestParams fp;
  fp.seed = 5;
  auto f = fit_forest(d, fp);
  CHECK(f.trees.size() == 100);
  int tp = 0, pos = 0;
  for (const auto& [x, y] : samples) {
    if (!y) continue;
    ++pos;
    tp += f.predict(x);
  }
  REQUIRE(pos > 0);
  CHECK(tp == pos);
  CHECK(f.predict(std::vector<double>(6, 0.0)) == 0);
  NrdStepPredictor step(f, 6);
  for (int r = 0; r < 6; ++r) {
    for (std::int64_t v = 0; v <= 200; ++v) {
      std::vector<double> x(6, 0.0);
      x[r] = static_cast<double>(v);
      CHECK(step.predict(r, v) == f.predict(x));
    }
  }
}

TEST_CASE("forgetting tree on window features") {
  std::vector<ForgettingWindow> w;
  LabelTrack y;
  y.unit_seconds = kUnitTwoHours;
  y.length = 120;
  for (int i = 0; i < 120; ++i) {
    const bool pos = i % 10 == 3;
    w.push_back({pos ? 70000 : (i % 4) * 3000, pos ? 7.5 : 0.8});
    if (pos) y.append({i, i});
  }
  auto t = fit_forgetting_tree(w, y);
  auto p = predict_forgetting(t, w);
  CHECK(p.intervals == y.intervals);
}

namespace {

DataMatrix matrix_of(const std::vector<std::vector<int>>& cols, int S) {
  DataMatrix m(S, static_cast<std::int64_t>(cols.size()));
  for (int s = 0; s < S; ++s)
    for (std::size_t t = 0; t < cols.size(); ++t)
      if (cols[t][s]) m.add_run(s, {static_cast<std::int64_t>(t), static_cast<std::int64_t>(t)});
  return m;
}

}  // namespace

TEST_CASE("posterior decoding matches enumeration over all state paths") {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int trial = 0; trial < 300; ++trial) {
    const int T = 1 + trial % 8, S = 3;
    SequenceModel m;
    m.variant = trial % 2 ? SequenceVariant::HiddenMarkov : SequenceVariant::DynamicNaiveBayes;
    const double p = u(gen);
    m.pi = {p, 1.0 - p};
    const double a = u(gen), b = u(gen);
    m.A = {{{a, 1.0 - a}, {b, 1.0 - b}}};
    if (m.variant == SequenceVariant::DynamicNaiveBayes) m.A[1] = m.A[0];
    for (int z = 0; z < 2; ++z) {
      m.B[z].resize(S);
      for (auto& x : m.B[z]) x = u(gen);
    }
    std::vector<std::vector<int>> cols(T, std::vector<int>(S));
    for (auto& c : cols)
      for (auto& x : c) x = static_cast<int>(gen() & 1);
    auto X = matrix_of(cols, S);
    auto post = posterior_anomalous(m, X);
    auto want = oracle::posterior_by_enumeration(m, cols);
    REQUIRE(post.size() == want.size());
    for (int t = 0; t < T; ++t) CHECK(std::abs(post[t] - want[t]) <= 1e-9);
    std::vector<double> p0(T), p1(T);
    forward_backward(m, X, [&](std::int64_t t, double a0, double a1) {
      p0[t] = a0;
      p1[t] = a1;
    }, 3);
    for (int t = 0; t < T; ++t) {
      CHECK(std::abs(p0[t] + p1[t] - 1.0) <= 1e-9);
      CHECK(std::abs(p1[t] - want[t]) <= 1e-9);
    }
  }
}

TEST_CASE("fitted transition rows sum to one") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int T = 50 + static_cast<int>(gen() % 500), S = 4;
    std::vector<std::vector<int>> cols(T, std::vector<int>(S));
    for (auto& c : cols)
      for (auto& x : c) x = (gen() % 5) == 0;
    std::vector<std::uint8_t> y(T);
    bool on = false;
    for (auto& v : y) {
      if (gen() % 20 == 0) on = !on;
      v = on;
    }
    y[0] = 0;
    y[T - 1] = 1;
    auto labels = LabelTrack::from_dense(y);
    for (auto variant : {SequenceVariant::HiddenMarkov, SequenceVariant::DynamicNaiveBayes}) {
      auto m = fit_sequence(matrix_of(cols, S), labels, variant);
      for (int z = 0; z < 2; ++z) {
        CHECK(std::abs(m.A[z][0] + m.A[z][1] - 1.0) <= 1e-12);
        for (double b : m.B[z]) CHECK((b > 0.0 && b < 1.0));
      }
      CHECK(std::abs(m.pi[0] + m.pi[1] - 1.0) <= 1e-12);
      if (variant == SequenceVariant::DynamicNaiveBayes) CHECK(m.A[0] == m.A[1]);
    }
  }
}

TEST_CASE("fit_sequence needs both states") {
  DataMatrix X(2, 10);
  LabelTrack y;
  y.length = 10;
  CHECK_THROWS_AS(fit_sequence(X, y, SequenceVariant::HiddenMarkov), std::invalid_argument);
}

TEST_CASE("symmetric degenerate model ties to the normal state") {
  SequenceModel m;
  m.B[0] = {0.3, 0.6};
  m.B[1] = {0.3, 0.6};
  DataMatrix X(2, 20);
  X.add_run(1, {3, 8});
  auto post = posterior_anomalous(m, X);
  for (double p : post) CHECK(p == doctest::Approx(0.5));
  CHECK(predict_sequence(m, X).intervals.empty());
}

TEST_CASE("a sensor that fires only during the anomaly is recovered exactly") {
  const std::int64_t T = 2000;
  DataMatrix X(3, T);
  std::vector<Interval> ivs{{100, 160}, {700, 730}, {1500, 1620}};
  for (const auto& iv : ivs) X.add_run(1, {iv.start, iv.end});
  X.add_run(0, {0, 50});
  X.add_run(0, {900, 1000});
  LabelTrack y;
  y.length = T;
  for (const auto& iv : ivs) y.append(iv);
  for (auto variant : {SequenceVariant::HiddenMarkov, SequenceVariant::DynamicNaiveBayes}) {
    auto m = fit_sequence(X, y, variant);
    CHECK(predict_sequence(m, X).intervals == y.intervals);
    CHECK(viterbi(m, X).intervals == y.intervals);
  }
}

TEST_CASE("training likelihood does not decrease as smoothing shrinks on noiseless data") {
  const std::int64_t T = 500;
  DataMatrix X(2, T);
  X.add_run(0, {100, 199});
  X.add_run(1, {300, 349});
  LabelTrack y;
  y.length = T;
  y.append({100, 199});
  auto m = fit_sequence(X, y, SequenceVariant::HiddenMarkov);
  double prev = complete_log_likelihood(m, X, y);
  // Smoothing weight k replaces add-one: probabilities move toward the empirical frequencies.
  for (double k : {0.5, 0.1, 0.01, 0.001}) {
    SequenceModel s = m;
    const double n1 = 100, n0 = 400;
    s.B[1][0] = (100 + k) / (n1 + 2 * k);
    s.B[0][0] = (0 + k) / (n0 + 2 * k);
    s.B[1][1] = (0 + k) / (n1 + 2 * k);
    s.B[0][1] = (50 + k) / (n0 + 2 * k);
    s.pi = {(n0 + k) / (T + 2 * k), (n1 + k) / (T + 2 * k)};
    // Transitions: 0->0 398, 0->1 1, 1->0 1, 1->1 99.
    s.A[0] = {(398 + k) / (399 + 2 * k), (1 + k) / (399 + 2 * k)};
    s.A[1] = {(1 + k) / (100 + 2 * k), (99 + k) / (100 + 2 * k)};
    const double ll = complete_log_likelihood(s, X, y);
    CHECK(ll >= prev);
    prev = ll;
  }
}
