#include "newstrend/eval.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "newstrend/rng.hpp"

namespace newstrend {

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels) {
  if (preds.empty() || labels.empty()) throw std::runtime_error("accuracy: empty input");
  if (preds.size() != labels.size()) throw std::runtime_error("accuracy: length mismatch");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

Confusion confusion_matrix(const std::vector<int>& preds, const std::vector<int>& labels) {
  if (preds.empty() || labels.empty()) throw std::runtime_error("confusion_matrix: empty input");
  if (preds.size() != labels.size()) throw std::runtime_error("confusion_matrix: length mismatch");
  Confusion c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] == 1) {
      preds[i] == 1 ? ++c.tp : ++c.fn;
    } else {
      preds[i] == 1 ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

int majority_class(const std::vector<int>& labels) {
  if (labels.empty()) throw std::runtime_error("majority_class: empty input");
  std::size_t ones = 0;
  for (int y : labels) ones += static_cast<std::size_t>(y);
  return 2 * ones >= labels.size() ? 1 : 0;  // tie -> 1
}

double majority_baseline(const std::vector<int>& train_labels,
                         const std::vector<int>& test_labels) {
  if (test_labels.empty()) throw std::runtime_error("majority_baseline: empty input");
  const int majority = majority_class(train_labels);
  const std::vector<int> preds(test_labels.size(), majority);
  return accuracy(preds, test_labels);
}

EvalResult evaluate_predictions(const std::vector<int>& preds, const std::vector<int>& test_labels,
                                const std::vector<int>& train_labels) {
  EvalResult r;
  r.accuracy = accuracy(preds, test_labels);
  r.confusion = confusion_matrix(preds, test_labels);
  r.n_test = static_cast<std::int64_t>(test_labels.size());
  r.majority_baseline_accuracy = majority_baseline(train_labels, test_labels);
  return r;
}

Model train_model(ModelKind kind, const Dataset& train, const ModelHyperparams& hp,
                  std::uint64_t seed) {
  switch (kind) {
    case ModelKind::logreg: {
      LogregConfig c = hp.logreg;
      c.seed = seed;
      return train_logreg(train, c);
    }
    case ModelKind::lda:
      return train_lda(train);
    case ModelKind::knn:
      return train_knn(train, hp.knn);
    case ModelKind::dtree:
      return train_dtree(train, hp.dtree);
    case ModelKind::svm: {
      SvmConfig c = hp.svm;
      c.seed = seed;
      return train_svm(train, c);
    }
    case ModelKind::rforest: {
      RforestConfig c = hp.rforest;
      c.seed = seed;
      return train_rforest(train, c);
    }
    case ModelKind::gnb:
      return train_gnb(train);
    case ModelKind::mlp: {
      MlpConfig c = hp.mlp;
      c.seed = seed;
      return train_mlp(train, c);
    }
  }
  throw std::runtime_error("train_model: unknown kind");
}

namespace {

std::vector<std::vector<Token>> preprocess_corpus(const LabeledCorpus& corpus,
                                                  const PreprocessConfig& config) {
  std::vector<std::vector<Token>> docs;
  docs.reserve(corpus.size());
  for (const auto& day : corpus.days) docs.push_back(preprocess_day(day, config));
  return docs;
}

struct SplitIndices {
  IndexRange train;
  IndexRange test;
  std::string description;
};

SplitIndices resolve_chronological_split(const LabeledCorpus& corpus, const SplitSpec& split) {
  if (corpus.empty()) throw std::runtime_error("split: empty corpus");
  std::size_t n_train = 0;
  std::string description;
  if (split.mode == SplitSpec::Mode::boundary) {
    if (!split.boundary) throw std::runtime_error("split: boundary date missing");
    while (n_train < corpus.size() && corpus.days[n_train].date <= *split.boundary) ++n_train;
    description = "chronological, boundary " + split.boundary->to_string();
  } else {
    n_train = static_cast<std::size_t>(split.fraction * static_cast<double>(corpus.size()));
    description = "chronological, fraction " + std::to_string(split.fraction);
  }
  if (n_train == 0) throw std::runtime_error("split: empty train side");
  if (n_train >= corpus.size()) throw std::runtime_error("split: empty test side");
  return SplitIndices{IndexRange{0, n_train}, IndexRange{n_train, corpus.size()}, description};
}

std::uint64_t cell_seed(const GridConfig& grid, const FeatureSpec& spec, ModelKind kind) {
  return derive_seed(grid.seed, "cell|" + spec.name() + "|" + to_string(kind));
}

FeaturePipeline fit_pipeline_on_train(const GridConfig& grid, const FeatureSpec& spec,
                                      const std::vector<std::vector<Token>>& docs,
                                      IndexRange train_range) {
  std::vector<std::vector<Token>> train_docs(
      docs.begin() + static_cast<std::ptrdiff_t>(train_range.begin),
      docs.begin() + static_cast<std::ptrdiff_t>(train_range.end));
  FeatureSpec seeded = spec;
  seeded.sgns.seed = grid_embedding_seed(grid, spec);
  return fit_feature_pipeline(seeded, train_docs, grid.lexicon);
}

Dataset vectorize_range(const std::vector<std::vector<Token>>& docs, const LabeledCorpus& corpus,
                        IndexRange range, const FeaturePipeline& pipeline) {
  Dataset out;
  out.X.reserve(range.size());
  out.y.reserve(range.size());
  const std::size_t want = pipeline.dimension();
  for (std::size_t i = range.begin; i < range.end; ++i) {
    FeatureVector v = assemble_features(docs[i], pipeline);
    if (v.size() != want) {
      throw std::runtime_error("assemble_features: inconsistent dimensionality across days");
    }
    out.X.push_back(std::move(v));
    out.y.push_back(corpus.days[i].label);
  }
  return out;
}

std::vector<ReportRow> run_cells(const LabeledCorpus& corpus,
                                 const std::vector<std::vector<Token>>& docs,
                                 const GridConfig& grid, IndexRange train_range,
                                 IndexRange test_range) {
  std::vector<int> train_labels, test_labels;
  for (std::size_t i = train_range.begin; i < train_range.end; ++i) {
    train_labels.push_back(corpus.days[i].label);
  }
  for (std::size_t i = test_range.begin; i < test_range.end; ++i) {
    test_labels.push_back(corpus.days[i].label);
  }

  std::vector<ReportRow> rows;
  for (const auto& spec : grid.embeddings) {
    std::optional<FeaturePipeline> pipeline;
    std::optional<Dataset> train_data, test_data;
    std::string embedding_error;
    try {
      pipeline = fit_pipeline_on_train(grid, spec, docs, train_range);
      train_data = vectorize_range(docs, corpus, train_range, *pipeline);
      test_data = vectorize_range(docs, corpus, test_range, *pipeline);
    } catch (const std::exception& e) {
      embedding_error = e.what();
    }

    for (const ModelKind kind : grid.models) {
      ReportRow row;
      row.embedding = spec.name();
      row.model = to_string(kind);
      if (!embedding_error.empty()) {
        row.error = embedding_error;
        rows.push_back(std::move(row));
        continue;
      }
      try {
        const Model model = train_model(kind, *train_data, grid.hyperparams,
                                        cell_seed(grid, spec, kind));
        const std::vector<int> preds = predict(model, test_data->X);
        row.result = evaluate_predictions(preds, test_labels, train_labels);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.embedding != b.embedding) return a.embedding < b.embedding;
    return a.model < b.model;
  });
  return rows;
}

std::string range_description(const LabeledCorpus& corpus, IndexRange range) {
  if (range.empty()) return "(empty)";
  return corpus.days[range.begin].date.to_string() + ".." +
         corpus.days[range.end - 1].date.to_string() + " (" + std::to_string(range.size()) +
         " days)";
}

}  // namespace

std::uint64_t grid_embedding_seed(const GridConfig& grid, const FeatureSpec& spec) {
  return derive_seed(grid.seed, "embedding|" + spec.name());
}

ExperimentReport run_experiment(const LabeledCorpus& corpus, const GridConfig& grid) {
  if (grid.embeddings.empty() || grid.models.empty()) {
    throw std::runtime_error("run_experiment: grid needs at least one embedding and one model");
  }
  if (grid.split.mode == SplitSpec::Mode::walk_forward) {
    throw std::runtime_error("run_experiment: walk-forward split belongs to walk_forward_backtest");
  }
  const auto docs = preprocess_corpus(corpus, grid.preprocess);
  const SplitIndices split = resolve_chronological_split(corpus, grid.split);

  ExperimentReport report;
  report.seed = grid.seed;
  report.config_digest = grid.config_digest;
  report.split_description = split.description + ": train " +
                             range_description(corpus, split.train) + ", test " +
                             range_description(corpus, split.test);
  report.n_train = static_cast<std::int64_t>(split.train.size());
  report.n_test = static_cast<std::int64_t>(split.test.size());

  std::vector<int> train_labels, test_labels;
  for (std::size_t i = split.train.begin; i < split.train.end; ++i) {
    train_labels.push_back(corpus.days[i].label);
  }
  for (std::size_t i = split.test.begin; i < split.test.end; ++i) {
    test_labels.push_back(corpus.days[i].label);
  }
  report.baseline_accuracy = majority_baseline(train_labels, test_labels);
  const std::vector<int> baseline_preds(test_labels.size(), majority_class(train_labels));
  report.baseline_confusion = confusion_matrix(baseline_preds, test_labels);
  report.rows = run_cells(corpus, docs, grid, split.train, split.test);
  return report;
}

FittedCell fit_grid_cell(const LabeledCorpus& corpus, const GridConfig& grid,
                         std::size_t embedding_index, ModelKind kind) {
  if (embedding_index >= grid.embeddings.size()) {
    throw std::runtime_error("fit_grid_cell: embedding index out of range");
  }
  const auto docs = preprocess_corpus(corpus, grid.preprocess);
  const SplitIndices split = resolve_chronological_split(corpus, grid.split);
  const FeatureSpec& spec = grid.embeddings[embedding_index];
  FittedCell cell{fit_pipeline_on_train(grid, spec, docs, split.train), Model{}};
  const Dataset train_data = vectorize_range(docs, corpus, split.train, cell.pipeline);
  cell.model = train_model(kind, train_data, grid.hyperparams, cell_seed(grid, spec, kind));
  return cell;
}

BacktestResult walk_forward_backtest(const LabeledCorpus& corpus, const GridConfig& grid) {
  if (grid.embeddings.empty() || grid.models.empty()) {
    throw std::runtime_error("walk_forward_backtest: grid needs >= 1 embedding and model");
  }
  BacktestResult result;
  result.windows = sliding_windows(corpus, grid.split.train_months, grid.split.test_months,
                                   grid.split.step_months);
  const auto docs = preprocess_corpus(corpus, grid.preprocess);

  struct CellTotals {
    std::int64_t correct = 0;
    Confusion confusion;
    std::int64_t n = 0;
    std::int64_t baseline_correct = 0;
    std::size_t errored_windows = 0;
  };
  std::map<std::pair<std::string, std::string>, CellTotals> totals;
  std::int64_t pooled_train = 0;
  std::int64_t pooled_baseline_correct = 0;
  Confusion agg_baseline;

  for (std::size_t w = 0; w < result.windows.size(); ++w) {
    const WindowSplit& window = result.windows[w];
    ExperimentReport report;
    report.seed = grid.seed;
    report.config_digest = grid.config_digest;
    report.split_description =
        "walk-forward window " + std::to_string(w + 1) + ": train " +
        window.train_start.to_string() + ".." + window.train_end.to_string() + " (" +
        std::to_string(window.train_days.size()) + " days), test " +
        window.test_start.to_string() + ".." + window.test_end.to_string() + " (" +
        std::to_string(window.test_days.size()) + " days)" +
        (window.short_test ? " [short test span: < 2 months]" : "");
    report.n_train = static_cast<std::int64_t>(window.train_days.size());
    report.n_test = static_cast<std::int64_t>(window.test_days.size());
    pooled_train += report.n_train;

    std::vector<int> train_labels, test_labels;
    for (std::size_t i = window.train_days.begin; i < window.train_days.end; ++i) {
      train_labels.push_back(corpus.days[i].label);
    }
    for (std::size_t i = window.test_days.begin; i < window.test_days.end; ++i) {
      test_labels.push_back(corpus.days[i].label);
    }
    report.baseline_accuracy = majority_baseline(train_labels, test_labels);
    const int baseline_label = majority_class(train_labels);
    const std::vector<int> baseline_preds(test_labels.size(), baseline_label);
    report.baseline_confusion = confusion_matrix(baseline_preds, test_labels);
    report.rows = run_cells(corpus, docs, grid, window.train_days, window.test_days);

    agg_baseline.tp += report.baseline_confusion.tp;
    agg_baseline.fp += report.baseline_confusion.fp;
    agg_baseline.tn += report.baseline_confusion.tn;
    agg_baseline.fn += report.baseline_confusion.fn;
    std::int64_t baseline_correct = 0;
    for (int y : test_labels) baseline_correct += (y == baseline_label) ? 1 : 0;
    pooled_baseline_correct += baseline_correct;

    for (const auto& row : report.rows) {
      auto& cell = totals[{row.embedding, row.model}];
      if (row.result) {
        cell.correct += row.result->confusion.correct();
        cell.confusion.tp += row.result->confusion.tp;
        cell.confusion.fp += row.result->confusion.fp;
        cell.confusion.tn += row.result->confusion.tn;
        cell.confusion.fn += row.result->confusion.fn;
        cell.n += row.result->n_test;
        cell.baseline_correct += baseline_correct;
      } else {
        ++cell.errored_windows;
      }
    }
    result.window_reports.push_back(std::move(report));
  }

  ExperimentReport& agg = result.aggregate;
  agg.seed = grid.seed;
  agg.config_digest = grid.config_digest;
  agg.split_description =
      "walk-forward aggregate over " + std::to_string(result.windows.size()) + " windows (" +
      std::to_string(grid.split.train_months) + "+" + std::to_string(grid.split.test_months) +
      " months, step " + std::to_string(grid.split.step_months) + "), pooled test days";
  agg.n_train = pooled_train;

  std::int64_t pooled_test = 0;
  for (const auto& window : result.windows) {
    pooled_test += static_cast<std::int64_t>(window.test_days.size());
  }
  agg.n_test = pooled_test;
  agg.baseline_accuracy =
      pooled_test > 0 ? static_cast<double>(pooled_baseline_correct) / static_cast<double>(pooled_test)
                      : 0.0;
  agg.baseline_confusion = agg_baseline;

  for (const auto& [key, cell] : totals) {
    ReportRow row;
    row.embedding = key.first;
    row.model = key.second;
    if (cell.n > 0) {
      EvalResult r;
      r.accuracy = static_cast<double>(cell.correct) / static_cast<double>(cell.n);
      r.confusion = cell.confusion;
      r.n_test = cell.n;
      r.majority_baseline_accuracy =
          static_cast<double>(cell.baseline_correct) / static_cast<double>(cell.n);
      row.result = r;
      if (cell.errored_windows > 0) {
        row.error = std::to_string(cell.errored_windows) + " window(s) errored; pooled over the rest";
      }
    } else {
      row.error = "errored in every window";
    }
    agg.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace newstrend
