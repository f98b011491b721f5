#include "homesense/sequence_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homesense {

namespace {

struct Segment {
  std::int64_t first;
  std::int64_t last;
  std::array<double, 2> e;  // emission probabilities scaled by a common per-segment factor
  std::array<double, 2> log_e;
};

std::vector<Segment> segments_of(const SequenceModel& model, const DataMatrix& matrix) {
  if (matrix.sensors() != model.sensors()) throw std::invalid_argument("sensor count differs from the model");
  std::vector<Segment> out;
  matrix.for_each_segment([&](std::int64_t first, std::int64_t last, std::span<const int> active) {
    auto le = emission_log(model, active);
    double m = std::max(le[0], le[1]);
    out.push_back({first, last, {std::exp(le[0] - m), std::exp(le[1] - m)}, le});
  });
  return out;
}

std::int64_t overlap(const std::vector<ColumnRun>& runs, const std::vector<Interval>& ivs) {
  std::int64_t total = 0;
  std::size_t j = 0;
  for (const auto& r : runs) {
    while (j < ivs.size() && ivs[j].end < r.first) ++j;
    for (std::size_t k = j; k < ivs.size() && ivs[k].start <= r.last; ++k)
      total += std::min(r.last, ivs[k].end) - std::max(r.first, ivs[k].start) + 1;
  }
  return total;
}

}  // namespace

SequenceModel fit_sequence(const DataMatrix& matrix, const LabelTrack& labels, SequenceVariant variant) {
  const std::int64_t T = matrix.columns();
  if (labels.length != T) throw std::invalid_argument("matrix columns and labels differ in length");
  const std::int64_t n1 = labels.ones();
  const std::int64_t n0 = T - n1;
  if (n1 == 0 || n0 == 0) throw std::invalid_argument("both states must appear in the training labels");

  SequenceModel m;
  m.variant = variant;
  m.pi = {(n0 + 1.0) / (T + 2.0), (n1 + 1.0) / (T + 2.0)};

  std::int64_t n01 = 0, n10 = 0, n11 = 0;
  for (const auto& iv : labels.intervals) {
    if (iv.start > 0) ++n01;
    if (iv.end < T - 1) ++n10;
    n11 += iv.end - iv.start;
  }
  const std::int64_t n00 = (T - 1) - n01 - n10 - n11;
  if (variant == SequenceVariant::HiddenMarkov) {
    double r0 = static_cast<double>(n00 + n01) + 2.0, r1 = static_cast<double>(n10 + n11) + 2.0;
    m.A[0] = {(n00 + 1.0) / r0, (n01 + 1.0) / r0};
    m.A[1] = {(n10 + 1.0) / r1, (n11 + 1.0) / r1};
  } else {
    m.A[0] = m.pi;
    m.A[1] = m.pi;
  }

  const int S = matrix.sensors();
  m.B[0].resize(S);
  m.B[1].resize(S);
  for (int s = 0; s < S; ++s) {
    std::int64_t on = 0;
    for (const auto& r : matrix.runs(s)) on += r.last - r.first + 1;
    std::int64_t on1 = overlap(matrix.runs(s), labels.intervals);
    m.B[0][s] = (static_cast<double>(on - on1) + 1.0) / (n0 + 2.0);
    m.B[1][s] = (static_cast<double>(on1) + 1.0) / (n1 + 2.0);
  }
  return m;
}

std::array<double, 2> emission_log(const SequenceModel& model, std::span<const int> active) {
  std::array<double, 2> out{};
  for (int z = 0; z < 2; ++z) {
    double acc = 0.0;
    std::size_t k = 0;
    for (int s = 0; s < model.sensors(); ++s) {
      bool on = k < active.size() && active[k] == s;
      if (on) ++k;
      acc += on ? std::log(model.B[z][s]) : std::log1p(-model.B[z][s]);
    }
    out[z] = acc;
  }
  return out;
}

void forward_backward(const SequenceModel& model, const DataMatrix& matrix,
                      const std::function<void(std::int64_t, double, double)>& visit, std::int64_t block) {
  const std::int64_t T = matrix.columns();
  if (T == 0) return;
  const auto segs = segments_of(model, matrix);
  const auto& A = model.A;

  auto seg_at = [&](std::size_t& si, std::int64_t t) -> const Segment& {
    while (segs[si].last < t) ++si;
    while (segs[si].first > t) --si;
    return segs[si];
  };
  auto step = [&](std::array<double, 2> a, const Segment& s) {
    std::array<double, 2> n{s.e[0] * (a[0] * A[0][0] + a[1] * A[1][0]), s.e[1] * (a[0] * A[0][1] + a[1] * A[1][1])};
    double z = n[0] + n[1];
    return std::array<double, 2>{n[0] / z, n[1] / z};
  };

  // Forward pass keeping the normalized alpha at each block start.
  const std::int64_t blocks = (T + block - 1) / block;
  std::vector<std::array<double, 2>> checkpoints(blocks);
  std::size_t si = 0;
  std::array<double, 2> alpha{};
  for (std::int64_t t = 0; t < T; ++t) {
    const Segment& s = seg_at(si, t);
    if (t == 0) {
      double a0 = model.pi[0] * s.e[0], a1 = model.pi[1] * s.e[1];
      alpha = {a0 / (a0 + a1), a1 / (a0 + a1)};
    } else {
      alpha = step(alpha, s);
    }
    if (t % block == 0) checkpoints[t / block] = alpha;
  }

  std::vector<std::array<double, 2>> buf(static_cast<std::size_t>(std::min(block, T)));
  std::array<double, 2> beta{1.0, 1.0};
  std::size_t bi = segs.size() - 1;
  std::size_t fi = 0;
  for (std::int64_t b = blocks - 1; b >= 0; --b) {
    const std::int64_t start = b * block;
    const std::int64_t end = std::min(T, start + block);
    buf[0] = checkpoints[b];
    fi = static_cast<std::size_t>(
        std::partition_point(segs.begin(), segs.end(), [&](const Segment& g) { return g.last < start; }) -
        segs.begin());
    for (std::int64_t t = start + 1; t < end; ++t) buf[t - start] = step(buf[t - start - 1], seg_at(fi, t));
    for (std::int64_t t = end - 1; t >= start; --t) {
      const auto& a = buf[t - start];
      double g0 = a[0] * beta[0], g1 = a[1] * beta[1];
      double z = g0 + g1;
      visit(t, g0 / z, g1 / z);
      if (t > 0) {
        const Segment& s = seg_at(bi, t);
        double b0 = A[0][0] * s.e[0] * beta[0] + A[0][1] * s.e[1] * beta[1];
        double b1 = A[1][0] * s.e[0] * beta[0] + A[1][1] * s.e[1] * beta[1];
        double zb = b0 + b1;
        beta = {b0 / zb, b1 / zb};
      }
    }
  }
}

std::vector<double> posterior_anomalous(const SequenceModel& model, const DataMatrix& matrix) {
  std::vector<double> out(static_cast<std::size_t>(matrix.columns()));
  forward_backward(model, matrix, [&](std::int64_t t, double, double p1) { out[t] = p1; });
  return out;
}

namespace {

LabelTrack from_reversed(std::vector<Interval> rev, std::int64_t length) {
  LabelTrack y;
  y.unit_seconds = kUnitSecond;
  y.length = length;
  std::reverse(rev.begin(), rev.end());
  for (const auto& iv : rev) y.append(iv);
  return y;
}

void push_reversed(std::vector<Interval>& rev, std::int64_t t) {
  if (!rev.empty() && rev.back().start == t + 1) rev.back().start = t;
  else rev.push_back({t, t});
}

}  // namespace

LabelTrack predict_sequence(const SequenceModel& model, const DataMatrix& matrix) {
  std::vector<Interval> rev;
  forward_backward(model, matrix, [&](std::int64_t t, double p0, double p1) {
    if (p1 > p0) push_reversed(rev, t);
  });
  return from_reversed(std::move(rev), matrix.columns());
}

LabelTrack viterbi(const SequenceModel& model, const DataMatrix& matrix) {
  const std::int64_t T = matrix.columns();
  if (T == 0) return from_reversed({}, 0);
  const auto segs = segments_of(model, matrix);
  double lA[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) lA[i][j] = std::log(model.A[i][j]);
  // two bits per column: bit z holds the best predecessor of state z
  std::vector<std::uint64_t> back(static_cast<std::size_t>((2 * T + 63) / 64), 0);
  std::array<double, 2> d{};
  std::size_t si = 0;
  for (std::int64_t t = 0; t < T; ++t) {
    while (segs[si].last < t) ++si;
    const auto& le = segs[si].log_e;
    if (t == 0) {
      d = {std::log(model.pi[0]) + le[0], std::log(model.pi[1]) + le[1]};
      continue;
    }
    std::array<double, 2> n{};
    for (int z = 0; z < 2; ++z) {
      double from0 = d[0] + lA[0][z], from1 = d[1] + lA[1][z];
      bool one = from1 > from0;
      n[z] = (one ? from1 : from0) + le[z];
      if (one) back[(2 * t + z) / 64] |= std::uint64_t{1} << ((2 * t + z) % 64);
    }
    double m = std::max(n[0], n[1]);
    d = {n[0] - m, n[1] - m};
  }
  int z = d[1] > d[0] ? 1 : 0;
  std::vector<Interval> rev;
  for (std::int64_t t = T - 1; t >= 0; --t) {
    if (z) push_reversed(rev, t);
    if (t > 0) z = static_cast<int>((back[(2 * t + z) / 64] >> ((2 * t + z) % 64)) & 1U);
  }
  return from_reversed(std::move(rev), T);
}

double complete_log_likelihood(const SequenceModel& model, const DataMatrix& matrix, const LabelTrack& labels) {
  if (labels.length != matrix.columns()) throw std::invalid_argument("matrix columns and labels differ in length");
  const auto segs = segments_of(model, matrix);
  double ll = 0.0;
  int prev = -1;
  std::size_t si = 0;
  for (std::int64_t t = 0; t < matrix.columns(); ++t) {
    while (segs[si].last < t) ++si;
    int z = labels.at(t) ? 1 : 0;
    ll += (prev < 0 ? std::log(model.pi[z]) : std::log(model.A[prev][z])) + segs[si].log_e[z];
    prev = z;
  }
  return ll;
}

}  // namespace homesense
