#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "breathline/core.hpp"
#include "breathline/features.hpp"
#include "breathline/rng.hpp"

namespace breathline {

/// Linear max-margin classifier over standardized features. The decision is
/// sign(w . standardize(x) + b) with +1 mapped to Exhalation; a score of
/// exactly zero reads as Inhalation, mirroring the strict "exceeds"
/// convention of the audio thresholder.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> feature_means;
  std::vector<double> feature_stds;
  int trained_epochs = 0;
  double lambda = 1e-4;
  double learning_rate = 0.001;
  std::vector<double> epoch_loss;  // full-set objective after each accepted epoch
};

struct TrainOptions {
  int epochs = 50;
  double learning_rate = 0.001;
  double lambda = 1e-4;
  std::uint64_t seed = 0;
};

using LabeledFeatures = std::vector<std::pair<FeatureVector, BreathState>>;

namespace detail {

inline double hinge_objective(const std::vector<std::vector<double>>& xs,
                              const std::vector<double>& ys,
                              const std::vector<double>& w, double b,
                              double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double margin = b;
    for (std::size_t d = 0; d < w.size(); ++d) margin += w[d] * xs[i][d];
    loss += std::max(0.0, 1.0 - ys[i] * margin);
  }
  loss /= static_cast<double>(xs.size());
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return loss + 0.5 * lambda * reg;
}

}  // namespace detail

/// Trains by epoch-shuffled subgradient descent on L2-regularized hinge loss
/// at a fixed learning rate. After every epoch the full-set objective is
/// evaluated; an epoch that worsened it is rolled back before continuing, so
/// the recorded loss curve is non-increasing. Deterministic for a given
/// (dataset, options) pair, bit for bit.
inline LinearModel train_linear(const LabeledFeatures& dataset,
                                const TrainOptions& options = {}) {
  if (dataset.empty()) throw InvalidInputError("training set is empty");
  if (options.epochs <= 0) throw InvalidInputError("epochs must be positive");
  if (!(options.learning_rate > 0.0))
    throw InvalidInputError("learning rate must be positive");
  if (!(options.lambda > 0.0)) throw InvalidInputError("lambda must be positive");

  const std::size_t dim = FeatureVector::kSize;
  const std::size_t n = dataset.size();
  bool saw_pos = false, saw_neg = false;
  for (const auto& [fv, label] : dataset) {
    (label == BreathState::Exhalation ? saw_pos : saw_neg) = true;
  }
  if (!saw_pos || !saw_neg)
    throw InvalidInputError(
        "degenerate dataset: training requires both breath states");

  // standardize with training-set statistics; near-constant features pass
  // through with unit scale
  std::vector<double> means(dim, 0.0), stds(dim, 0.0);
  for (const auto& [fv, label] : dataset)
    for (std::size_t d = 0; d < dim; ++d) means[d] += fv.values[d];
  for (double& m : means) m /= static_cast<double>(n);
  for (const auto& [fv, label] : dataset)
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = fv.values[d] - means[d];
      stds[d] += c * c;
    }
  for (double& s : stds) {
    s = std::sqrt(s / static_cast<double>(n));
    if (s < 1e-12) s = 1.0;
  }

  std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d)
      xs[i][d] = (dataset[i].first.values[d] - means[d]) / stds[d];
    ys[i] = dataset[i].second == BreathState::Exhalation ? 1.0 : -1.0;
  }

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<double> best_w = w;
  double best_b = b;
  double best_obj = detail::hinge_objective(xs, ys, w, b, options.lambda);

  Rng rng(options.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(options.epochs));

  const double lr = options.learning_rate;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    // Fisher-Yates with the deterministic source
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(order[i], order[j]);
    }
    for (std::size_t idx : order) {
      const auto& x = xs[idx];
      const double y = ys[idx];
      double margin = b;
      for (std::size_t d = 0; d < dim; ++d) margin += w[d] * x[d];
      const double shrink = 1.0 - lr * options.lambda;
      if (y * margin < 1.0) {
        for (std::size_t d = 0; d < dim; ++d)
          w[d] = w[d] * shrink + lr * y * x[d];
        b += lr * y;
      } else {
        for (std::size_t d = 0; d < dim; ++d) w[d] *= shrink;
      }
    }
    const double obj = detail::hinge_objective(xs, ys, w, b, options.lambda);
    if (obj <= best_obj) {
      best_obj = obj;
      best_w = w;
      best_b = b;
    } else {
      w = best_w;  // roll back a non-improving epoch
      b = best_b;
    }
    losses.push_back(best_obj);
  }

  LinearModel model;
  model.weights = std::move(best_w);
  model.bias = best_b;
  model.feature_means = std::move(means);
  model.feature_stds = std::move(stds);
  model.trained_epochs = options.epochs;
  model.lambda = options.lambda;
  model.learning_rate = options.learning_rate;
  model.epoch_loss = std::move(losses);
  return model;
}

/// Score and label for one feature vector.
inline std::pair<BreathState, double> predict(const LinearModel& model,
                                              const FeatureVector& features) {
  if (model.weights.size() != FeatureVector::kSize ||
      model.feature_means.size() != model.weights.size() ||
      model.feature_stds.size() != model.weights.size())
    throw InvalidInputError("model/feature length mismatch");
  double score = model.bias;
  for (std::size_t d = 0; d < model.weights.size(); ++d)
    score += model.weights[d] *
             ((features.values[d] - model.feature_means[d]) /
              model.feature_stds[d]);
  return {score > 0.0 ? BreathState::Exhalation : BreathState::Inhalation,
          score};
}

}  // namespace breathline
