#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "newstrend/corpus.hpp"
#include "newstrend/models.hpp"
#include "newstrend/vectorize.hpp"

namespace newstrend {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  std::int64_t correct() const { return tp + tn; }
};

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels);
Confusion confusion_matrix(const std::vector<int>& preds, const std::vector<int>& labels);

// Accuracy on test of always predicting the training-majority class (tie -> 1).
double majority_baseline(const std::vector<int>& train_labels,
                         const std::vector<int>& test_labels);
int majority_class(const std::vector<int>& labels);

struct EvalResult {
  double accuracy = 0.0;
  Confusion confusion;
  std::int64_t n_test = 0;
  double majority_baseline_accuracy = 0.0;
};

EvalResult evaluate_predictions(const std::vector<int>& preds, const std::vector<int>& test_labels,
                                const std::vector<int>& train_labels);

// ---- experiment grid ---------------------------------------------------------

struct ModelHyperparams {
  LogregConfig logreg;
  KnnConfig knn;
  DtreeConfig dtree;
  SvmConfig svm;
  RforestConfig rforest;
  MlpConfig mlp;
};

// Trains one kind with its hyperparameters; `seed` overrides the per-kind
// config seed so grid cells get independent deterministic streams.
Model train_model(ModelKind kind, const Dataset& train, const ModelHyperparams& hp,
                  std::uint64_t seed);

struct SplitSpec {
  enum class Mode { fraction, boundary, walk_forward };
  Mode mode = Mode::fraction;
  double fraction = 0.8;
  std::optional<Date> boundary;
  int train_months = 9;
  int test_months = 3;
  int step_months = 3;
};

struct GridConfig {
  std::vector<FeatureSpec> embeddings;
  std::vector<ModelKind> models;
  ModelHyperparams hyperparams;
  PreprocessConfig preprocess;
  std::optional<SentimentLexicon> lexicon;
  SplitSpec split;
  std::uint64_t seed = 0;
  std::string config_digest = "0000000000000000";
};

struct ReportRow {
  std::string embedding;
  std::string model;
  std::optional<EvalResult> result;  // empty on cell failure
  std::string error;
};

struct ExperimentReport {
  std::string split_description;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::int64_t n_train = 0;
  std::int64_t n_test = 0;
  double baseline_accuracy = 0.0;
  Confusion baseline_confusion;  // of the constant majority prediction
  std::vector<ReportRow> rows;   // sorted by (embedding, model)
};

// Fits every train-side artifact on the train split only, vectorizes both
// sides, trains each grid cell and scores it on the test split. A failing
// cell becomes an errored row; the grid continues.
ExperimentReport run_experiment(const LabeledCorpus& corpus, const GridConfig& grid);

struct BacktestResult {
  std::vector<WindowSplit> windows;
  std::vector<ExperimentReport> window_reports;
  ExperimentReport aggregate;  // pooled over all test days of all windows
};

// run_experiment per sliding window; the aggregate pools correct counts over
// all test days before dividing (micro accuracy).
BacktestResult walk_forward_backtest(const LabeledCorpus& corpus, const GridConfig& grid);

// The train-side state of one grid cell, fitted through the same path
// run_experiment uses. Exists so tests can prove that mutating test-side data
// leaves the trained state untouched.
struct FittedCell {
  FeaturePipeline pipeline;
  Model model;
};
FittedCell fit_grid_cell(const LabeledCorpus& corpus, const GridConfig& grid,
                         std::size_t embedding_index, ModelKind kind);

// Deterministic per-embedding seed, shared by every consumer of the grid.
std::uint64_t grid_embedding_seed(const GridConfig& grid, const FeatureSpec& spec);

// ---- report rendering ----------------------------------------------------------

// Table-1-style aligned text, no timestamps, byte-stable for a fixed config.
std::string render_text_report(const ExperimentReport& report);
// `embedding,model,accuracy,tp,fp,tn,fn,n_test,baseline,config_digest`
std::string render_csv_report(const ExperimentReport& report);
std::string render_windows_table(const std::vector<WindowSplit>& windows);

}  // namespace newstrend
