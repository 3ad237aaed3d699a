#include "newstrend/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "newstrend/rng.hpp"

namespace newstrend {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow; mean BCE is softplus(z) - y*z.
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

constexpr double kVarianceFloor = 1e-9;

void require_both_classes(const Dataset& data, const char* trainer) {
  bool has0 = false, has1 = false;
  for (int label : data.y) (label == 1 ? has1 : has0) = true;
  if (!has0 || !has1) {
    throw std::runtime_error(std::string(trainer) + ": degenerate class distribution");
  }
}

// Deterministic in-place Fisher-Yates.
void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.index(i)]);
  }
}

}  // namespace

void Dataset::validate() const {
  if (X.empty()) throw std::runtime_error("dataset: empty");
  if (X.size() != y.size()) throw std::runtime_error("dataset: X/y size mismatch");
  const std::size_t d = X.front().size();
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].size() != d) throw std::runtime_error("dataset: inconsistent feature width");
    for (double v : X[i]) {
      if (!std::isfinite(v)) throw std::runtime_error("dataset: non-finite feature value");
    }
    if (y[i] != 0 && y[i] != 1) throw std::runtime_error("dataset: label outside {0,1}");
  }
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::logreg: return "logreg";
    case ModelKind::lda: return "lda";
    case ModelKind::knn: return "knn";
    case ModelKind::dtree: return "dtree";
    case ModelKind::svm: return "svm";
    case ModelKind::rforest: return "rforest";
    case ModelKind::gnb: return "gnb";
    case ModelKind::mlp: return "mlp";
  }
  return "?";
}

std::optional<ModelKind> model_kind_from_string(const std::string& name) {
  if (name == "logreg") return ModelKind::logreg;
  if (name == "lda") return ModelKind::lda;
  if (name == "knn") return ModelKind::knn;
  if (name == "dtree") return ModelKind::dtree;
  if (name == "svm") return ModelKind::svm;
  if (name == "rforest") return ModelKind::rforest;
  if (name == "gnb") return ModelKind::gnb;
  if (name == "mlp") return ModelKind::mlp;
  return std::nullopt;
}

// ---- losses -----------------------------------------------------------------

std::pair<double, LogregGradients> logreg_loss_and_grad(std::span<const double> weights,
                                                        double bias, const Dataset& data,
                                                        double l2) {
  const std::size_t n = data.rows();
  const std::size_t d = weights.size();
  if (data.cols() != d) throw std::runtime_error("logreg_loss_and_grad: dimension mismatch");

  LogregGradients grads;
  grads.weights.assign(d, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = dot(weights, data.X[i]) + bias;
    loss += softplus(z) - static_cast<double>(data.y[i]) * z;
    const double coeff = sigmoid(z) - static_cast<double>(data.y[i]);
    for (std::size_t j = 0; j < d; ++j) grads.weights[j] += coeff * data.X[i][j];
    grads.bias += coeff;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  grads.bias *= inv_n;
  for (std::size_t j = 0; j < d; ++j) {
    grads.weights[j] = grads.weights[j] * inv_n + l2 * weights[j];
    loss += 0.5 * l2 * weights[j] * weights[j];
  }
  return {loss, std::move(grads)};
}

std::pair<double, LogregGradients> svm_loss_and_subgrad(std::span<const double> weights,
                                                        double bias, const Dataset& data,
                                                        double l2) {
  const std::size_t n = data.rows();
  const std::size_t d = weights.size();
  if (data.cols() != d) throw std::runtime_error("svm_loss_and_subgrad: dimension mismatch");

  LogregGradients grads;
  grads.weights.assign(d, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y_pm = data.y[i] == 1 ? 1.0 : -1.0;
    const double margin = y_pm * (dot(weights, data.X[i]) + bias);
    if (margin < 1.0) {
      loss += 1.0 - margin;
      for (std::size_t j = 0; j < d; ++j) grads.weights[j] -= y_pm * data.X[i][j];
      grads.bias -= y_pm;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  grads.bias *= inv_n;
  for (std::size_t j = 0; j < d; ++j) {
    grads.weights[j] = grads.weights[j] * inv_n + l2 * weights[j];
    loss += 0.5 * l2 * weights[j] * weights[j];
  }
  return {loss, std::move(grads)};
}

namespace {

// Forward/backward over a subset of rows; loss and gradients are means over
// that subset.
std::pair<double, MlpModel> mlp_subset_grad(const MlpModel& p, const Dataset& data,
                                            std::span<const std::size_t> rows) {
  const std::size_t d = p.input_dim;
  const std::size_t h = p.hidden;
  MlpModel g;
  g.input_dim = d;
  g.hidden = h;
  g.w1.assign(h * d, 0.0);
  g.b1.assign(h, 0.0);
  g.w2.assign(h, 0.0);
  g.b2 = 0.0;

  std::vector<double> pre(h), act(h);
  double loss = 0.0;
  for (const std::size_t i : rows) {
    const auto& x = data.X[i];
    for (std::size_t u = 0; u < h; ++u) {
      double s = p.b1[u];
      const double* w_row = p.w1.data() + u * d;
      for (std::size_t j = 0; j < d; ++j) s += w_row[j] * x[j];
      pre[u] = s;
      act[u] = s > 0.0 ? s : 0.0;
    }
    double z = p.b2;
    for (std::size_t u = 0; u < h; ++u) z += p.w2[u] * act[u];
    loss += softplus(z) - static_cast<double>(data.y[i]) * z;

    const double dz = sigmoid(z) - static_cast<double>(data.y[i]);
    g.b2 += dz;
    for (std::size_t u = 0; u < h; ++u) {
      g.w2[u] += dz * act[u];
      if (pre[u] > 0.0) {  // ReLU gate; subgradient 0 at exactly 0
        const double dpre = dz * p.w2[u];
        g.b1[u] += dpre;
        double* g_row = g.w1.data() + u * d;
        for (std::size_t j = 0; j < d; ++j) g_row[j] += dpre * x[j];
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  loss *= inv_n;
  for (double& v : g.w1) v *= inv_n;
  for (double& v : g.b1) v *= inv_n;
  for (double& v : g.w2) v *= inv_n;
  g.b2 *= inv_n;
  return {loss, std::move(g)};
}

}  // namespace

std::pair<double, MlpModel> mlp_loss_and_grad(const MlpModel& params, const Dataset& data) {
  if (data.cols() != params.input_dim) throw std::runtime_error("mlp_loss_and_grad: dimension mismatch");
  std::vector<std::size_t> all(data.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return mlp_subset_grad(params, data, all);
}

// ---- trainers ---------------------------------------------------------------

Model train_logreg(const Dataset& data, const LogregConfig& config) {
  data.validate();
  if (!(config.learning_rate > 0.0)) throw std::runtime_error("train_logreg: learning rate must be positive");
  const std::size_t d = data.cols();
  LogregModel m;
  m.weights.assign(d, 0.0);

  if (config.batch_size <= 0) {
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      auto [loss, grads] = logreg_loss_and_grad(m.weights, m.bias, data, config.l2);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("train_logreg: loss diverged; use a smaller learning rate");
      }
      double norm_sq = grads.bias * grads.bias;
      for (double gw : grads.weights) norm_sq += gw * gw;
      if (std::sqrt(norm_sq) < config.tolerance) break;
      for (std::size_t j = 0; j < d; ++j) m.weights[j] -= config.learning_rate * grads.weights[j];
      m.bias -= config.learning_rate * grads.bias;
    }
  } else {
    Rng rng(derive_seed(config.seed, "logreg-shuffle"));
    std::vector<std::size_t> order(data.rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto batch = static_cast<std::size_t>(config.batch_size);
    Dataset view;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      shuffle_indices(order, rng);
      for (std::size_t start = 0; start < order.size(); start += batch) {
        const std::size_t stop = std::min(order.size(), start + batch);
        view.X.clear();
        view.y.clear();
        for (std::size_t i = start; i < stop; ++i) {
          view.X.push_back(data.X[order[i]]);
          view.y.push_back(data.y[order[i]]);
        }
        auto [loss, grads] = logreg_loss_and_grad(m.weights, m.bias, view, config.l2);
        if (!std::isfinite(loss)) {
          throw std::runtime_error("train_logreg: loss diverged; use a smaller learning rate");
        }
        for (std::size_t j = 0; j < d; ++j) m.weights[j] -= config.learning_rate * grads.weights[j];
        m.bias -= config.learning_rate * grads.bias;
      }
    }
  }
  return Model{ModelKind::logreg, d, std::move(m)};
}

Model train_gnb(const Dataset& data) {
  data.validate();
  require_both_classes(data, "train_gnb");
  const std::size_t d = data.cols();
  const std::size_t n = data.rows();

  GnbModel m;
  m.mean0.assign(d, 0.0);
  m.var0.assign(d, 0.0);
  m.mean1.assign(d, 0.0);
  m.var1.assign(d, 0.0);

  std::size_t n1 = 0;
  for (int label : data.y) n1 += static_cast<std::size_t>(label);
  const std::size_t n0 = n - n1;
  m.log_prior[0] = std::log(static_cast<double>(n0) / static_cast<double>(n));
  m.log_prior[1] = std::log(static_cast<double>(n1) / static_cast<double>(n));

  for (std::size_t i = 0; i < n; ++i) {
    auto& mean = data.y[i] == 1 ? m.mean1 : m.mean0;
    for (std::size_t j = 0; j < d; ++j) mean[j] += data.X[i][j];
  }
  for (std::size_t j = 0; j < d; ++j) {
    m.mean0[j] /= static_cast<double>(n0);
    m.mean1[j] /= static_cast<double>(n1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mean = data.y[i] == 1 ? m.mean1 : m.mean0;
    auto& var = data.y[i] == 1 ? m.var1 : m.var0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = data.X[i][j] - mean[j];
      var[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    m.var0[j] = std::max(m.var0[j] / static_cast<double>(n0), kVarianceFloor);
    m.var1[j] = std::max(m.var1[j] / static_cast<double>(n1), kVarianceFloor);
  }
  return Model{ModelKind::gnb, d, std::move(m)};
}

Model train_lda(const Dataset& data) {
  data.validate();
  require_both_classes(data, "train_lda");
  const std::size_t d = data.cols();
  const std::size_t n = data.rows();

  LdaModel m;
  m.mean0.assign(d, 0.0);
  m.mean1.assign(d, 0.0);
  m.pooled_var.assign(d, 0.0);

  std::size_t n1 = 0;
  for (int label : data.y) n1 += static_cast<std::size_t>(label);
  const std::size_t n0 = n - n1;
  m.log_prior[0] = std::log(static_cast<double>(n0) / static_cast<double>(n));
  m.log_prior[1] = std::log(static_cast<double>(n1) / static_cast<double>(n));

  for (std::size_t i = 0; i < n; ++i) {
    auto& mean = data.y[i] == 1 ? m.mean1 : m.mean0;
    for (std::size_t j = 0; j < d; ++j) mean[j] += data.X[i][j];
  }
  for (std::size_t j = 0; j < d; ++j) {
    m.mean0[j] /= static_cast<double>(n0);
    m.mean1[j] /= static_cast<double>(n1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mean = data.y[i] == 1 ? m.mean1 : m.mean0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = data.X[i][j] - mean[j];
      m.pooled_var[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    m.pooled_var[j] = std::max(m.pooled_var[j] / static_cast<double>(n), kVarianceFloor);
  }
  return Model{ModelKind::lda, d, std::move(m)};
}

Model train_knn(const Dataset& data, const KnnConfig& config) {
  data.validate();
  if (config.k < 1) throw std::runtime_error("train_knn: k must be >= 1");
  if (static_cast<std::size_t>(config.k) > data.rows()) {
    throw std::runtime_error("train_knn: k exceeds training size");
  }
  KnnModel m{config.k, data.X, data.y};
  return Model{ModelKind::knn, data.cols(), std::move(m)};
}

// ---- CART ------------------------------------------------------------------

namespace {

struct TreeBuilder {
  const Dataset& data;
  int max_depth;
  int min_leaf;
  Rng* rng = nullptr;             // feature subsampling source (forest)
  std::size_t n_sub_features = 0;  // 0 or >= D means all features
  std::vector<TreeNode> nodes;

  int make_leaf(const std::vector<std::size_t>& idx) {
    std::size_t c1 = 0;
    for (std::size_t i : idx) c1 += static_cast<std::size_t>(data.y[i]);
    TreeNode leaf;
    leaf.label = c1 * 2 > idx.size() ? 1 : 0;  // tie -> 0
    leaf.fraction = static_cast<double>(c1) / static_cast<double>(idx.size());
    nodes.push_back(leaf);
    return static_cast<int>(nodes.size() - 1);
  }

  std::vector<std::size_t> candidate_features() const {
    const std::size_t d = data.cols();
    std::vector<std::size_t> features(d);
    for (std::size_t j = 0; j < d; ++j) features[j] = j;
    if (rng == nullptr || n_sub_features == 0 || n_sub_features >= d) return features;
    // Partial Fisher-Yates, then ascending order so impurity ties still
    // resolve to the lowest feature index.
    for (std::size_t i = 0; i < n_sub_features; ++i) {
      std::swap(features[i], features[i + rng->index(d - i)]);
    }
    features.resize(n_sub_features);
    std::sort(features.begin(), features.end());
    return features;
  }

  int build(std::vector<std::size_t>& idx, int depth) {
    std::size_t c1 = 0;
    for (std::size_t i : idx) c1 += static_cast<std::size_t>(data.y[i]);
    const bool pure = c1 == 0 || c1 == idx.size();
    if (pure || depth >= max_depth || idx.size() < 2 * static_cast<std::size_t>(min_leaf)) {
      return make_leaf(idx);
    }

    const std::size_t n = idx.size();
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = std::numeric_limits<double>::infinity();

    std::vector<std::pair<double, int>> vals(n);
    for (const std::size_t f : candidate_features()) {
      for (std::size_t i = 0; i < n; ++i) {
        vals[i] = {data.X[idx[i]][f], data.y[idx[i]]};
      }
      std::sort(vals.begin(), vals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      std::size_t left_n = 0, left_1 = 0;
      for (std::size_t i = 1; i < n; ++i) {
        ++left_n;
        left_1 += static_cast<std::size_t>(vals[i - 1].second);
        if (vals[i].first == vals[i - 1].first) continue;  // not a boundary
        const std::size_t right_n = n - left_n;
        if (left_n < static_cast<std::size_t>(min_leaf) ||
            right_n < static_cast<std::size_t>(min_leaf)) {
          continue;
        }
        const std::size_t right_1 = c1 - left_1;
        const double pl = static_cast<double>(left_1) / static_cast<double>(left_n);
        const double pr = static_cast<double>(right_1) / static_cast<double>(right_n);
        const double gini_l = 2.0 * pl * (1.0 - pl);
        const double gini_r = 2.0 * pr * (1.0 - pr);
        const double weighted =
            static_cast<double>(left_n) * gini_l + static_cast<double>(right_n) * gini_r;
        if (weighted < best_impurity) {  // strict: first found wins ties
          best_impurity = weighted;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (vals[i - 1].first + vals[i].first);
        }
      }
    }

    if (best_feature < 0) return make_leaf(idx);

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
      (data.X[i][static_cast<std::size_t>(best_feature)] < best_threshold ? left_idx : right_idx)
          .push_back(i);
    }
    // All candidate thresholds are strictly inside the value range, so both
    // sides are non-empty.
    const int node_pos = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[static_cast<std::size_t>(node_pos)].feature = best_feature;
    nodes[static_cast<std::size_t>(node_pos)].threshold = best_threshold;
    const int left = build(left_idx, depth + 1);
    const int right = build(right_idx, depth + 1);
    nodes[static_cast<std::size_t>(node_pos)].left = left;
    nodes[static_cast<std::size_t>(node_pos)].right = right;
    return node_pos;
  }
};

const TreeNode& tree_leaf_for(const DtreeModel& tree, std::span<const double> x) {
  const TreeNode* node = &tree.nodes[0];
  while (node->feature >= 0) {
    node = x[static_cast<std::size_t>(node->feature)] < node->threshold
               ? &tree.nodes[static_cast<std::size_t>(node->left)]
               : &tree.nodes[static_cast<std::size_t>(node->right)];
  }
  return *node;
}

DtreeModel build_tree(const Dataset& data, const std::vector<std::size_t>& indices,
                      const DtreeConfig& config, Rng* rng, std::size_t n_sub) {
  TreeBuilder builder{data, config.max_depth, config.min_leaf, rng, n_sub, {}};
  std::vector<std::size_t> idx = indices;
  builder.build(idx, 0);
  return DtreeModel{std::move(builder.nodes)};
}

}  // namespace

Model train_dtree(const Dataset& data, const DtreeConfig& config) {
  data.validate();
  if (config.max_depth < 1) throw std::runtime_error("train_dtree: max_depth must be >= 1");
  if (config.min_leaf < 1) throw std::runtime_error("train_dtree: min_leaf must be >= 1");
  std::vector<std::size_t> all(data.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return Model{ModelKind::dtree, data.cols(), build_tree(data, all, config, nullptr, 0)};
}

Model train_svm(const Dataset& data, const SvmConfig& config) {
  data.validate();
  if (!(config.learning_rate > 0.0)) throw std::runtime_error("train_svm: learning rate must be positive");
  const std::size_t d = data.cols();
  SvmModel m;
  m.weights.assign(d, 0.0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    auto [loss, grads] = svm_loss_and_subgrad(m.weights, m.bias, data, config.l2);
    if (!std::isfinite(loss)) throw std::runtime_error("train_svm: non-finite parameters");
    for (std::size_t j = 0; j < d; ++j) m.weights[j] -= config.learning_rate * grads.weights[j];
    m.bias -= config.learning_rate * grads.bias;
  }
  for (double w : m.weights) {
    if (!std::isfinite(w)) throw std::runtime_error("train_svm: non-finite parameters");
  }
  return Model{ModelKind::svm, d, std::move(m)};
}

Model train_rforest(const Dataset& data, const RforestConfig& config) {
  data.validate();
  if (config.n_trees < 1) throw std::runtime_error("train_rforest: n_trees must be >= 1");
  if (!(config.feature_fraction > 0.0 && config.feature_fraction <= 1.0)) {
    throw std::runtime_error("train_rforest: feature_fraction must be in (0,1]");
  }
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  const auto n_sub = std::min(
      d, static_cast<std::size_t>(std::ceil(config.feature_fraction * static_cast<double>(d))));

  const DtreeConfig tree_config{config.max_depth, config.min_leaf};
  RforestModel m;
  m.trees.reserve(static_cast<std::size_t>(config.n_trees));
  for (int t = 0; t < config.n_trees; ++t) {
    Rng tree_rng(derive_seed(config.seed, "forest-tree-" + std::to_string(t)));
    std::vector<std::size_t> indices(n);
    if (config.bootstrap) {
      for (std::size_t i = 0; i < n; ++i) indices[i] = tree_rng.index(n);
    } else {
      for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    }
    m.trees.push_back(build_tree(data, indices, tree_config, &tree_rng, n_sub));
  }
  return Model{ModelKind::rforest, d, std::move(m)};
}

Model train_mlp(const Dataset& data, const MlpConfig& config) {
  data.validate();
  if (config.hidden_size < 1) throw std::runtime_error("train_mlp: hidden_size must be >= 1");
  const std::size_t d = data.cols();
  const auto h = static_cast<std::size_t>(config.hidden_size);

  MlpModel m;
  m.input_dim = d;
  m.hidden = h;
  m.w1.resize(h * d);
  m.b1.assign(h, 0.0);
  m.w2.resize(h);
  m.b2 = 0.0;

  Rng rng(derive_seed(config.seed, "mlp-init"));
  const double bound1 = std::sqrt(6.0 / static_cast<double>(d + h));
  for (double& w : m.w1) w = rng.uniform(-bound1, bound1);
  const double bound2 = std::sqrt(6.0 / static_cast<double>(h + 1));
  for (double& w : m.w2) w = rng.uniform(-bound2, bound2);

  Rng shuffle_rng(derive_seed(config.seed, "mlp-shuffle"));
  std::vector<std::size_t> order(data.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t batch = config.batch_size <= 0
                                ? data.rows()
                                : std::min(data.rows(), static_cast<std::size_t>(config.batch_size));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_indices(order, shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      auto [loss, g] =
          mlp_subset_grad(m, data, std::span<const std::size_t>(order).subspan(start, stop - start));
      epoch_loss += loss * static_cast<double>(stop - start);
      const double lr = config.learning_rate;
      for (std::size_t i = 0; i < m.w1.size(); ++i) m.w1[i] -= lr * g.w1[i];
      for (std::size_t i = 0; i < m.b1.size(); ++i) m.b1[i] -= lr * g.b1[i];
      for (std::size_t i = 0; i < m.w2.size(); ++i) m.w2[i] -= lr * g.w2[i];
      m.b2 -= lr * g.b2;
    }
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error("train_mlp: loss diverged; use a smaller learning rate");
    }
  }
  return Model{ModelKind::mlp, d, std::move(m)};
}

// ---- prediction --------------------------------------------------------------

namespace {

double mlp_forward(const MlpModel& m, std::span<const double> x) {
  double z = m.b2;
  for (std::size_t u = 0; u < m.hidden; ++u) {
    double s = m.b1[u];
    const double* row = m.w1.data() + u * m.input_dim;
    for (std::size_t j = 0; j < m.input_dim; ++j) s += row[j] * x[j];
    if (s > 0.0) z += m.w2[u] * s;
  }
  return sigmoid(z);
}

double gaussian_log_likelihood(std::span<const double> x, const std::vector<double>& mean,
                               const std::vector<double>& var) {
  constexpr double kLog2Pi = 1.8378770664093453;
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double diff = x[j] - mean[j];
    s += -0.5 * (kLog2Pi + std::log(var[j]) + diff * diff / var[j]);
  }
  return s;
}

double lda_discriminant(std::span<const double> x, const std::vector<double>& mean,
                        const std::vector<double>& var, double log_prior) {
  double s = log_prior;
  for (std::size_t j = 0; j < x.size(); ++j) {
    s += (x[j] * mean[j] - 0.5 * mean[j] * mean[j]) / var[j];
  }
  return s;
}

int knn_predict(const KnnModel& m, std::span<const double> x) {
  const std::size_t n = m.X.size();
  std::vector<std::pair<double, std::size_t>> distances(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - m.X[i][j];
      d2 += diff * diff;
    }
    distances[i] = {d2, i};
  }
  // Pair ordering breaks distance ties by the lower training index.
  std::sort(distances.begin(), distances.end());
  std::size_t votes1 = 0;
  const auto k = static_cast<std::size_t>(m.k);
  for (std::size_t i = 0; i < k; ++i) votes1 += static_cast<std::size_t>(m.y[distances[i].second]);
  if (2 * votes1 == k) return m.y[distances[0].second];  // vote tie -> nearest neighbor
  return 2 * votes1 > k ? 1 : 0;
}

}  // namespace

int Model::predict_one(std::span<const double> x) const {
  if (x.size() != feature_dim) throw std::runtime_error("predict: feature width mismatch");
  switch (kind) {
    case ModelKind::logreg: {
      const auto& m = std::get<LogregModel>(params);
      return sigmoid(dot(m.weights, x) + m.bias) >= 0.5 ? 1 : 0;
    }
    case ModelKind::svm: {
      const auto& m = std::get<SvmModel>(params);
      return dot(m.weights, x) + m.bias >= 0.0 ? 1 : 0;
    }
    case ModelKind::lda: {
      const auto& m = std::get<LdaModel>(params);
      const double d0 = lda_discriminant(x, m.mean0, m.pooled_var, m.log_prior[0]);
      const double d1 = lda_discriminant(x, m.mean1, m.pooled_var, m.log_prior[1]);
      return d1 > d0 ? 1 : 0;  // tie -> 0
    }
    case ModelKind::gnb: {
      const auto& m = std::get<GnbModel>(params);
      const double s0 = m.log_prior[0] + gaussian_log_likelihood(x, m.mean0, m.var0);
      const double s1 = m.log_prior[1] + gaussian_log_likelihood(x, m.mean1, m.var1);
      return s1 > s0 ? 1 : 0;  // tie -> 0
    }
    case ModelKind::knn:
      return knn_predict(std::get<KnnModel>(params), x);
    case ModelKind::dtree:
      return tree_leaf_for(std::get<DtreeModel>(params), x).label;
    case ModelKind::rforest: {
      const auto& m = std::get<RforestModel>(params);
      std::size_t votes1 = 0;
      for (const auto& tree : m.trees) {
        votes1 += static_cast<std::size_t>(tree_leaf_for(tree, x).label);
      }
      return 2 * votes1 > m.trees.size() ? 1 : 0;  // tie -> 0
    }
    case ModelKind::mlp:
      return mlp_forward(std::get<MlpModel>(params), x) >= 0.5 ? 1 : 0;
  }
  throw std::runtime_error("predict: unknown model kind");
}

bool Model::has_proba() const {
  switch (kind) {
    case ModelKind::logreg:
    case ModelKind::lda:
    case ModelKind::gnb:
    case ModelKind::rforest:
    case ModelKind::mlp:
      return true;
    default:
      return false;
  }
}

std::optional<double> Model::predict_proba_one(std::span<const double> x) const {
  if (x.size() != feature_dim) throw std::runtime_error("predict_proba: feature width mismatch");
  switch (kind) {
    case ModelKind::logreg: {
      const auto& m = std::get<LogregModel>(params);
      return sigmoid(dot(m.weights, x) + m.bias);
    }
    case ModelKind::lda: {
      const auto& m = std::get<LdaModel>(params);
      const double d0 = lda_discriminant(x, m.mean0, m.pooled_var, m.log_prior[0]);
      const double d1 = lda_discriminant(x, m.mean1, m.pooled_var, m.log_prior[1]);
      return sigmoid(d1 - d0);
    }
    case ModelKind::gnb: {
      const auto& m = std::get<GnbModel>(params);
      const double s0 = m.log_prior[0] + gaussian_log_likelihood(x, m.mean0, m.var0);
      const double s1 = m.log_prior[1] + gaussian_log_likelihood(x, m.mean1, m.var1);
      return sigmoid(s1 - s0);
    }
    case ModelKind::rforest: {
      const auto& m = std::get<RforestModel>(params);
      std::size_t votes1 = 0;
      for (const auto& tree : m.trees) {
        votes1 += static_cast<std::size_t>(tree_leaf_for(tree, x).label);
      }
      return static_cast<double>(votes1) / static_cast<double>(m.trees.size());
    }
    case ModelKind::mlp:
      return mlp_forward(std::get<MlpModel>(params), x);
    default:
      return std::nullopt;
  }
}

std::vector<int> predict(const Model& model, const std::vector<std::vector<double>>& X) {
  std::vector<int> out;
  out.reserve(X.size());
  for (const auto& row : X) out.push_back(model.predict_one(row));
  return out;
}

std::vector<double> predict_proba(const Model& model, const std::vector<std::vector<double>>& X) {
  if (!model.has_proba()) {
    throw std::runtime_error("predict_proba: not defined for " + to_string(model.kind));
  }
  std::vector<double> out;
  out.reserve(X.size());
  for (const auto& row : X) out.push_back(*model.predict_proba_one(row));
  return out;
}

}  // namespace newstrend
