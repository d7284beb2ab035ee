#pragma once

// One-vs-rest linear SVMs on z-scored features.
//
// Each binary problem minimises the primal L2-regularised hinge objective
//   J(w) = 1/2 |w|^2 + C sum_i max(0, 1 - y_i w.x_i)
// where x carries a trailing constant 1 (so the bias is the last weight).
// Optimisation is full-batch subgradient descent with the Pegasos step
// 1/(lambda t), lambda = 1/(C n), keeping the iterate with the lowest
// objective. No sampling is involved, so training is bit-reproducible.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gaitlab/aesi.hpp"
#include "gaitlab/error.hpp"
#include "gaitlab/features.hpp"

namespace gaitlab {

struct TrainConfig {
  double c = 1.0;
  int max_iterations = 1000;
  double convergence_tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(c > 0.0)) throw Error(ErrorKind::Parameter, "SVM regularisation C must be positive");
    if (max_iterations < 1) throw Error(ErrorKind::Parameter, "SVM max_iterations must be >= 1");
  }
};

inline constexpr double kStdFloor = 1e-9;

struct StandardizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t dim() const noexcept { return mean.size(); }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != mean.size()) throw Error(ErrorKind::Dimension, "feature dimension does not match the standardization");
    std::vector<double> out(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) out[d] = (x[d] - mean[d]) / stddev[d];
    return out;
  }
  friend bool operator==(const StandardizationStats&, const StandardizationStats&) = default;
};

/// Per-dimension mean and population standard deviation (floored).
inline StandardizationStats fit_standardization(std::span<const FusedFeature> features) {
  if (features.empty()) throw Error(ErrorKind::Parameter, "cannot standardize zero features");
  const std::size_t dim = features.front().values.size();
  StandardizationStats st{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (const auto& f : features) {
    if (f.values.size() != dim) throw Error(ErrorKind::Parameter, "features differ in dimension");
    for (std::size_t d = 0; d < dim; ++d) st.mean[d] += f.values[d];
  }
  const double n = static_cast<double>(features.size());
  for (auto& m : st.mean) m /= n;
  for (const auto& f : features)
    for (std::size_t d = 0; d < dim; ++d) st.stddev[d] += (f.values[d] - st.mean[d]) * (f.values[d] - st.mean[d]);
  for (auto& s : st.stddev) s = std::max(std::sqrt(s / n), kStdFloor);
  return st;
}

struct ClassWeights {
  std::string label;
  double bias = 0.0;
  std::vector<double> weights;
  friend bool operator==(const ClassWeights&, const ClassWeights&) = default;
};

struct SvmModel {
  PartSet combination;
  std::vector<ClassWeights> classes;
  StandardizationStats stats;
  std::size_t feature_dim = 0;

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& c : classes) out.push_back(c.label);
    return out;
  }
  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

/// Trained models keyed by part-set bitmask.
struct ModelBank {
  std::map<std::uint8_t, SvmModel> models;

  const SvmModel& at(PartSet set) const {
    auto it = models.find(set.bits());
    if (it == models.end()) throw Error(ErrorKind::Parameter, "no model for combination " + set.to_string());
    return it->second;
  }
  bool contains(PartSet set) const { return models.count(set.bits()) > 0; }
  void insert(SvmModel model) {
    const auto key = model.combination.bits();
    models.insert_or_assign(key, std::move(model));
  }
  friend bool operator==(const ModelBank&, const ModelBank&) = default;
};

namespace detail {

/// Binary hinge SVM on rows of `x` (bias column appended internally).
inline std::vector<double> train_binary_svm(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                                            const TrainConfig& cfg) {
  const std::size_t n = x.size();
  const std::size_t dim = x.front().size() + 1;
  const double lambda = 1.0 / (cfg.c * static_cast<double>(n));

  std::vector<double> w(dim, 0.0), best(dim, 0.0), grad(dim);
  auto margin = [&](std::size_t i, const std::vector<double>& wt) {
    double s = wt[dim - 1];
    for (std::size_t d = 0; d + 1 < dim; ++d) s += wt[d] * x[i][d];
    return y[i] * s;
  };
  auto objective = [&](const std::vector<double>& wt) {
    double reg = 0.0;
    for (double v : wt) reg += v * v;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += std::max(0.0, 1.0 - margin(i, wt));
    return 0.5 * lambda * reg + loss / static_cast<double>(n);
  };

  double best_obj = objective(w);
  double window_start_obj = best_obj;
  constexpr int kWindow = 50;
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (margin(i, w) >= 1.0) continue;
      for (std::size_t d = 0; d + 1 < dim; ++d) grad[d] += y[i] * x[i][d];
      grad[dim - 1] += y[i];
    }
    const double eta = 1.0 / (lambda * t);
    const double shrink = 1.0 - eta * lambda;
    const double step = eta / static_cast<double>(n);
    for (std::size_t d = 0; d < dim; ++d) w[d] = shrink * w[d] + step * grad[d];

    const double obj = objective(w);
    if (obj < best_obj) {
      best_obj = obj;
      best = w;
    }
    if (t % kWindow == 0) {
      if (window_start_obj - best_obj <= cfg.convergence_tol * std::max(1.0, std::abs(best_obj))) break;
      window_start_obj = best_obj;
    }
  }
  return best;
}

}  // namespace detail

/// One-vs-rest training. Classes are ordered lexicographically by label.
inline SvmModel train_ovr_svm(std::span<const FusedFeature> features, std::span<const std::string> labels,
                              const TrainConfig& cfg = {}) {
  cfg.validate();
  if (features.size() != labels.size()) throw Error(ErrorKind::Parameter, "features and labels differ in count");
  const std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw Error(ErrorKind::InsufficientClasses, "need at least 2 distinct subjects to train");

  SvmModel model;
  model.combination = features.front().combination;
  model.stats = fit_standardization(features);
  model.feature_dim = model.stats.dim();

  std::vector<std::vector<double>> x;
  x.reserve(features.size());
  for (const auto& f : features) x.push_back(model.stats.apply(f.values));

  for (const auto& label : distinct) {
    std::vector<double> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == label ? 1.0 : -1.0;
    auto w = detail::train_binary_svm(x, y, cfg);
    ClassWeights cw;
    cw.label = label;
    cw.bias = w.back();
    w.pop_back();
    cw.weights = std::move(w);
    model.classes.push_back(std::move(cw));
  }
  return model;
}

/// score_c = w_c . standardize(x) + b_c, in class order.
inline std::vector<double> decision_scores(const SvmModel& model, std::span<const double> feature) {
  if (feature.size() != model.feature_dim) throw Error(ErrorKind::Dimension, "feature dimension does not match the model");
  const auto z = model.stats.apply(feature);
  std::vector<double> scores;
  scores.reserve(model.classes.size());
  for (const auto& c : model.classes) {
    scores.push_back(std::inner_product(z.begin(), z.end(), c.weights.begin(), c.bias));
  }
  return scores;
}

inline std::vector<double> decision_scores(const SvmModel& model, const FusedFeature& feature) {
  return decision_scores(model, std::span<const double>(feature.values));
}

struct RankedClass {
  std::string label;
  double score = 0.0;
};

/// Descending score; equal scores keep class order.
inline std::vector<RankedClass> rank_list(std::span<const double> scores, std::span<const std::string> classes) {
  if (scores.empty()) throw Error(ErrorKind::Parameter, "no scores to rank");
  if (scores.size() != classes.size()) throw Error(ErrorKind::Parameter, "scores and classes differ in count");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<RankedClass> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back({classes[i], scores[i]});
  return out;
}

}  // namespace gaitlab
