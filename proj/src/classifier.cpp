#include "lpbias/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "lpbias/error.hpp"
#include "lpbias/heuristics.hpp"
#include "lpbias/random.hpp"

namespace lpbias {

std::size_t HeuristicFeaturizer::dim() const { return HeuristicVector::kDim; }

void HeuristicFeaturizer::featurize(NodeId u, NodeId v, std::span<double> out) const {
  const auto f = feature_vector(*graph_, u, v).as_features();
  std::copy(f.begin(), f.end(), out.begin());
}

void EdgeEmbeddingFeaturizer::featurize(NodeId u, NodeId v, std::span<double> out) const {
  edge_vector(*matrix_, u, v, op_, out);
}

std::string EdgeEmbeddingFeaturizer::name() const {
  return "embedding:" + std::string(to_string(op_));
}

TrainingSet build_training_set(const Graph& learning, const PairFeaturizer& featurizer, std::uint64_t seed,
                               double positive_fraction) {
  if (learning.empty() || learning.edge_count() == 0) throw DataError("learning graph has no edges");
  if (!(positive_fraction > 0.0 && positive_fraction <= 1.0)) {
    throw ConfigError("positive fraction must lie in (0, 1]");
  }
  const double n = static_cast<double>(learning.node_count());
  const double pairs_total = n * (n - 1.0) / 2.0;
  const double density = static_cast<double>(learning.edge_count()) / pairs_total;
  if (density > 0.5) throw DataError("learning graph too dense for rejection sampling of non-edges");

  Rng rng = make_rng(seed);
  auto edges = learning.edges();
  const auto count = static_cast<std::size_t>(std::floor(positive_fraction * static_cast<double>(edges.size()) + 1e-9));
  // partial Fisher-Yates: the first `count` entries become a uniform sample
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, edges.size() - 1);
    std::swap(edges[i], edges[pick(rng)]);
  }

  TrainingSet set;
  set.dim = featurizer.dim();
  set.positive_fraction_of_edges = positive_fraction;
  set.seed = seed;
  set.pairs.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(count));
  set.labels.assign(count, 1);

  std::unordered_set<std::uint64_t> drawn;
  drawn.reserve(count * 2);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(learning.node_count() - 1));
  while (set.pairs.size() < 2 * count) {
    const NodeId u = node(rng);
    const NodeId v = node(rng);
    if (u == v || learning.has_edge(u, v)) continue;
    if (!drawn.insert(pair_key(u, v)).second) continue;
    set.pairs.push_back(canonical(u, v));
    set.labels.push_back(0);
  }

  set.features.resize(set.pairs.size() * set.dim);
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    featurizer.featurize(set.pairs[i].first, set.pairs[i].second,
                         std::span<double>(set.features.data() + i * set.dim, set.dim));
  }
  return set;
}

TrainingSet duplicate_rows(const TrainingSet& set) {
  TrainingSet out = set;
  out.features.insert(out.features.end(), set.features.begin(), set.features.end());
  out.labels.insert(out.labels.end(), set.labels.begin(), set.labels.end());
  out.pairs.insert(out.pairs.end(), set.pairs.begin(), set.pairs.end());
  return out;
}

double LogisticModel::decision_score(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw ContractViolation("feature dimension " + std::to_string(x.size()) + " does not match model dimension " +
                            std::to_string(weights.size()));
  }
  double s = bias;
  for (std::size_t j = 0; j < x.size(); ++j) s += weights[j] * (x[j] - feature_means[j]) / feature_stds[j];
  return s;
}

double LogisticModel::probability(std::span<const double> x) const {
  return 1.0 / (1.0 + std::exp(-decision_score(x)));
}

Standardization compute_standardization(const TrainingSet& set) {
  const std::size_t d = set.dim;
  const auto n = static_cast<double>(set.size());
  Standardization s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto r = set.row(i);
    for (std::size_t j = 0; j < d; ++j) s.means[j] += r[j];
  }
  for (auto& m : s.means) m /= n;
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto r = set.row(i);
    for (std::size_t j = 0; j < d; ++j) s.stds[j] += (r[j] - s.means[j]) * (r[j] - s.means[j]);
  }
  for (auto& sd : s.stds) {
    sd = std::sqrt(sd / n);
    if (!(sd > 0.0)) sd = 1.0;
  }
  return s;
}

std::vector<double> standardize(const TrainingSet& set, const Standardization& s) {
  std::vector<double> z(set.features.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = 0; j < set.dim; ++j) {
      z[i * set.dim + j] = (set.features[i * set.dim + j] - s.means[j]) / s.stds[j];
    }
  }
  return z;
}

namespace {

// log(1 + e^s), stable for large |s|
double softplus(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

double sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double objective_loss(std::span<const double> z, std::span<const std::uint8_t> y, std::size_t dim,
                      std::span<const double> w, double b, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double s = b;
    for (std::size_t j = 0; j < dim; ++j) s += w[j] * z[i * dim + j];
    loss += softplus(s) - (y[i] ? s : 0.0);
  }
  loss /= static_cast<double>(y.size());
  double reg = 0.0;
  for (double wj : w) reg += wj * wj;
  return loss + 0.5 * lambda * reg;
}

}  // namespace

ObjectiveValue logistic_objective(std::span<const double> z, std::span<const std::uint8_t> y, std::size_t dim,
                                  std::span<const double> w, double b, double lambda) {
  ObjectiveValue out;
  out.grad_weights.assign(dim, 0.0);
  const auto n = static_cast<double>(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double* row = z.data() + i * dim;
    double s = b;
    for (std::size_t j = 0; j < dim; ++j) s += w[j] * row[j];
    out.loss += softplus(s) - (y[i] ? s : 0.0);
    const double r = sigmoid(s) - (y[i] ? 1.0 : 0.0);
    for (std::size_t j = 0; j < dim; ++j) out.grad_weights[j] += r * row[j];
    out.grad_bias += r;
  }
  out.loss /= n;
  out.grad_bias /= n;
  double reg = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    out.grad_weights[j] = out.grad_weights[j] / n + lambda * w[j];
    reg += w[j] * w[j];
  }
  out.loss += 0.5 * lambda * reg;
  return out;
}

LogisticModel fit_logistic(const TrainingSet& set, const FitOptions& options, std::span<const double> initial,
                           std::vector<double>* loss_trace) {
  const std::size_t d = set.dim;
  if (set.features.size() != set.size() * d) throw ContractViolation("training set shape mismatch");
  std::size_t positives = 0;
  for (auto y : set.labels) positives += y;
  if (positives < 2 || set.size() - positives < 2) throw DataError("logistic fit needs at least 2 rows per class");
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto r = set.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(r[j])) {
        throw DataError("non-finite feature " + std::to_string(j) + " in training row " + std::to_string(i));
      }
    }
  }
  if (!(options.l2_lambda >= 0.0)) throw ConfigError("l2 lambda must be non-negative");
  if (!initial.empty() && initial.size() != d + 1) throw ConfigError("initial parameters need dim + 1 entries");

  const auto stdz = compute_standardization(set);
  const auto z = standardize(set, stdz);

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  if (!initial.empty()) {
    std::copy(initial.begin(), initial.begin() + static_cast<std::ptrdiff_t>(d), w.begin());
    b = initial[d];
  }

  constexpr double kArmijo = 1e-4;
  double step = 1.0;
  auto obj = logistic_objective(z, set.labels, d, w, b, options.l2_lambda);
  std::vector<double> w_next(d);
  LogisticModel model;
  std::size_t iter = 0;
  auto max_norm = [&](const ObjectiveValue& o) {
    double m = std::abs(o.grad_bias);
    for (double g : o.grad_weights) m = std::max(m, std::abs(g));
    return m;
  };
  if (loss_trace) loss_trace->push_back(obj.loss);
  while (max_norm(obj) >= options.tolerance && iter < options.max_iters) {
    double g2 = obj.grad_bias * obj.grad_bias;
    for (double g : obj.grad_weights) g2 += g * g;
    step = std::min(step * 2.0, 1e6);
    double b_next = b;
    double next_loss = 0.0;
    for (;;) {
      for (std::size_t j = 0; j < d; ++j) w_next[j] = w[j] - step * obj.grad_weights[j];
      b_next = b - step * obj.grad_bias;
      next_loss = objective_loss(z, set.labels, d, w_next, b_next, options.l2_lambda);
      if (next_loss <= obj.loss - kArmijo * step * g2) break;
      step *= 0.5;
      if (step < 1e-20) break;
    }
    if (step < 1e-20) break;  // no further decrease representable
    w.swap(w_next);
    b = b_next;
    obj = logistic_objective(z, set.labels, d, w, b, options.l2_lambda);
    if (loss_trace) loss_trace->push_back(obj.loss);
    ++iter;
  }

  model.weights = std::move(w);
  model.bias = b;
  model.feature_means = stdz.means;
  model.feature_stds = stdz.stds;
  model.l2_lambda = options.l2_lambda;
  model.iterations = iter;
  model.final_loss = obj.loss;
  model.gradient_norm = max_norm(obj);
  model.converged = model.gradient_norm < options.tolerance;
  return model;
}

std::string model_to_json(const LogisticModel& m) {
  nlohmann::ordered_json j;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  j["feature_means"] = m.feature_means;
  j["feature_stds"] = m.feature_stds;
  j["l2_lambda"] = m.l2_lambda;
  j["converged"] = m.converged;
  j["iterations"] = m.iterations;
  j["final_loss"] = m.final_loss;
  j["gradient_max_norm"] = m.gradient_norm;
  return j.dump(2);
}

LogisticModel model_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    LogisticModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.feature_means = j.at("feature_means").get<std::vector<double>>();
    m.feature_stds = j.at("feature_stds").get<std::vector<double>>();
    m.l2_lambda = j.at("l2_lambda").get<double>();
    m.converged = j.value("converged", false);
    m.iterations = j.value("iterations", std::size_t{0});
    m.final_loss = j.value("final_loss", 0.0);
    m.gradient_norm = j.value("gradient_max_norm", 0.0);
    if (m.feature_means.size() != m.weights.size() || m.feature_stds.size() != m.weights.size()) {
      throw DataError("model vectors have inconsistent dimensions");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model json: ") + e.what());
  }
}

}  // namespace lpbias
