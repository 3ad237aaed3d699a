#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace newstrend {

struct Dataset {
  std::vector<std::vector<double>> X;  // N rows x D features
  std::vector<int> y;                  // {0,1}

  std::size_t rows() const { return X.size(); }
  std::size_t cols() const { return X.empty() ? 0 : X.front().size(); }
  void validate() const;  // finite entries, matching sizes, consistent width
};

enum class ModelKind { logreg, lda, knn, dtree, svm, rforest, gnb, mlp };

std::string to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_string(const std::string& name);

// ---- per-kind hyperparameters -------------------------------------------

struct LogregConfig {
  double learning_rate = 0.1;
  int epochs = 300;
  double l2 = 0.0;
  double tolerance = 1e-8;  // stop when the gradient norm falls below this
  int batch_size = 0;       // 0 = full batch
  std::uint64_t seed = 0;
};

struct KnnConfig {
  int k = 5;
};

struct DtreeConfig {
  int max_depth = 10;
  int min_leaf = 1;
};

struct SvmConfig {
  double learning_rate = 0.01;
  int epochs = 300;
  double l2 = 1e-3;
  std::uint64_t seed = 0;  // reserved; the full-batch path draws nothing
};

struct RforestConfig {
  int n_trees = 50;
  double feature_fraction = 0.3;  // per-split subsample, ceil(fraction * D)
  bool bootstrap = true;
  int max_depth = 10;
  int min_leaf = 1;
  std::uint64_t seed = 0;
};

struct MlpConfig {
  int hidden_size = 16;
  double learning_rate = 0.05;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 0;
};

// ---- learned parameters ---------------------------------------------------

struct LogregModel {
  std::vector<double> weights;
  double bias = 0.0;
};

struct LdaModel {
  std::array<double, 2> log_prior{};
  std::vector<double> mean0, mean1;
  std::vector<double> pooled_var;  // floored
};

struct KnnModel {
  int k = 1;
  std::vector<std::vector<double>> X;
  std::vector<int> y;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;          // leaf majority, ties to 0
  double fraction = 0.0;  // leaf share of class 1
};

struct DtreeModel {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
};

struct RforestModel {
  std::vector<DtreeModel> trees;
};

struct GnbModel {
  std::array<double, 2> log_prior{};
  std::vector<double> mean0, var0;
  std::vector<double> mean1, var1;
};

struct MlpModel {
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x input, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;
};

struct Model {
  ModelKind kind = ModelKind::logreg;
  std::size_t feature_dim = 0;
  std::variant<LogregModel, LdaModel, KnnModel, DtreeModel, SvmModel, RforestModel, GnbModel,
               MlpModel>
      params;

  int predict_one(std::span<const double> x) const;
  // Defined for logreg, gnb, lda, mlp and rforest (vote fraction).
  std::optional<double> predict_proba_one(std::span<const double> x) const;
  bool has_proba() const;
};

// labels in {0,1}; label = 1 iff probability >= 0.5 where probabilities exist
std::vector<int> predict(const Model& model, const std::vector<std::vector<double>>& X);
std::vector<double> predict_proba(const Model& model, const std::vector<std::vector<double>>& X);

// ---- losses exposed for gradient checking ---------------------------------

struct LogregGradients {
  std::vector<double> weights;
  double bias = 0.0;
};
// Mean binary cross-entropy + (l2/2)||w||^2.
std::pair<double, LogregGradients> logreg_loss_and_grad(std::span<const double> weights,
                                                        double bias, const Dataset& data,
                                                        double l2);

// (l2/2)||w||^2 + mean hinge loss max(0, 1 - y(w.x + b)), labels in {-1,+1}.
std::pair<double, LogregGradients> svm_loss_and_subgrad(std::span<const double> weights,
                                                        double bias, const Dataset& data,
                                                        double l2);

// Mean binary cross-entropy of sigmoid(w2 . relu(W1 x + b1) + b2) with
// backpropagation gradients in the same layout as the parameters.
std::pair<double, MlpModel> mlp_loss_and_grad(const MlpModel& params, const Dataset& data);

// ---- trainers --------------------------------------------------------------

Model train_logreg(const Dataset& data, const LogregConfig& config);
Model train_gnb(const Dataset& data);
Model train_lda(const Dataset& data);
Model train_knn(const Dataset& data, const KnnConfig& config);
Model train_dtree(const Dataset& data, const DtreeConfig& config);
Model train_svm(const Dataset& data, const SvmConfig& config);
Model train_rforest(const Dataset& data, const RforestConfig& config);
Model train_mlp(const Dataset& data, const MlpConfig& config);

// ---- serialization ----------------------------------------------------------

// Versioned, self-describing text format with 17-significant-digit reals, so
// a round trip reproduces the exact model on any platform.
std::string serialize_model(const Model& model);
Model deserialize_model(const std::string& text);

}  // namespace newstrend
