#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "homesense/data_matrix.hpp"
#include "homesense/label_track.hpp"

namespace homesense {

enum class SequenceVariant { DynamicNaiveBayes, HiddenMarkov };

// Two hidden states (0 normal, 1 anomalous) with independent Bernoulli emissions per sensor.
struct SequenceModel {
  SequenceVariant variant = SequenceVariant::HiddenMarkov;
  std::array<double, 2> pi{0.5, 0.5};
  std::array<std::array<double, 2>, 2> A{{{0.5, 0.5}, {0.5, 0.5}}};
  std::array<std::vector<double>, 2> B;  // B[z][s] = P(sensor s ON | state z)

  int sensors() const { return static_cast<int>(B[0].size()); }
};

// Supervised fit with add-one smoothing on transitions, initial state and emissions.
SequenceModel fit_sequence(const DataMatrix& matrix, const LabelTrack& labels, SequenceVariant variant);

// Log of P(column | state) for each state, for a column with the given sorted active sensors.
std::array<double, 2> emission_log(const SequenceModel& model, std::span<const int> active);

// Visits the posterior P(state | all columns) at every column in decreasing column order.
// Memory is bounded by storing the forward state only at block boundaries.
void forward_backward(const SequenceModel& model, const DataMatrix& matrix,
                      const std::function<void(std::int64_t t, double p0, double p1)>& visit,
                      std::int64_t block = 4096);

std::vector<double> posterior_anomalous(const SequenceModel& model, const DataMatrix& matrix);

// Per-column argmax of the smoothed posterior; ties go to state 0.
LabelTrack predict_sequence(const SequenceModel& model, const DataMatrix& matrix);

// Most likely state path.
LabelTrack viterbi(const SequenceModel& model, const DataMatrix& matrix);

// Joint log-likelihood of columns and labels under the model.
double complete_log_likelihood(const SequenceModel& model, const DataMatrix& matrix, const LabelTrack& labels);

}  // namespace homesense
