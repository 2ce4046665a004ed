#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lpbias/embedding.hpp"
#include "lpbias/graph.hpp"

namespace lpbias {

/// Maps a node pair to a fixed-length real feature vector.
class PairFeaturizer {
 public:
  virtual ~PairFeaturizer() = default;
  virtual std::size_t dim() const = 0;
  virtual void featurize(NodeId u, NodeId v, std::span<double> out) const = 0;
  virtual std::string name() const = 0;
};

/// cn, aa, pa, jaccard, ra, deg_lo, deg_hi on a fixed graph.
class HeuristicFeaturizer final : public PairFeaturizer {
 public:
  explicit HeuristicFeaturizer(const Graph& graph) : graph_(&graph) {}
  std::size_t dim() const override;
  void featurize(NodeId u, NodeId v, std::span<double> out) const override;
  std::string name() const override { return "heuristics"; }

 private:
  const Graph* graph_;
};

/// Edge vector of an embedding under one combination operator.
class EdgeEmbeddingFeaturizer final : public PairFeaturizer {
 public:
  EdgeEmbeddingFeaturizer(const EmbeddingMatrix& matrix, EdgeOperator op) : matrix_(&matrix), op_(op) {}
  std::size_t dim() const override { return matrix_->dim(); }
  void featurize(NodeId u, NodeId v, std::span<double> out) const override;
  std::string name() const override;

 private:
  const EmbeddingMatrix* matrix_;
  EdgeOperator op_;
};

/// Balanced labelled pairs drawn from the learning graph. Row-major features.
struct TrainingSet {
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<std::uint8_t> labels;
  std::vector<NodePair> pairs;
  double positive_fraction_of_edges = 0.25;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }
};

/// floor(positive_fraction * |E|) uniformly chosen edges as positives and as
/// many uniformly chosen distinct non-adjacent pairs as negatives. Positive
/// edges stay in the graph while they are featurized.
TrainingSet build_training_set(const Graph& learning, const PairFeaturizer& featurizer, std::uint64_t seed,
                               double positive_fraction = 0.25);

/// Appends a copy of every row, used to check per-row loss averaging.
TrainingSet duplicate_rows(const TrainingSet& set);

struct FitOptions {
  double l2_lambda = 1e-4;
  double tolerance = 1e-6;  ///< on the max-norm of the gradient
  std::size_t max_iters = 5000;
};

/// Logistic regression on standardized features.
struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> feature_means;
  std::vector<double> feature_stds;
  double l2_lambda = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double final_loss = 0.0;
  double gradient_norm = 0.0;

  /// Pre-sigmoid score w . standardize(x) + b.
  double decision_score(std::span<const double> x) const;
  double probability(std::span<const double> x) const;
};

struct Standardization {
  std::vector<double> means;
  std::vector<double> stds;  ///< population std, constant features get 1
};

Standardization compute_standardization(const TrainingSet& set);
/// Standardized copy of the training features (row-major).
std::vector<double> standardize(const TrainingSet& set, const Standardization& s);

struct ObjectiveValue {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

/// Mean logistic loss plus (lambda/2)|w|^2 (bias unpenalized) and its gradient.
ObjectiveValue logistic_objective(std::span<const double> features, std::span<const std::uint8_t> labels,
                                  std::size_t dim, std::span<const double> weights, double bias, double l2_lambda);

/// Full-batch gradient descent with Armijo backtracking. `initial` optionally
/// holds dim weights followed by the bias.
LogisticModel fit_logistic(const TrainingSet& set, const FitOptions& options = {},
                           std::span<const double> initial = {}, std::vector<double>* loss_trace = nullptr);

std::string model_to_json(const LogisticModel& model);
LogisticModel model_from_json(const std::string& text);

}  // namespace lpbias
