// Acceptance suite: one test case per criterion, each printing a single
// [PASS]/[FAIL]/[SKIP] line with its runtime.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "newstrend/commands.hpp"
#include "newstrend/config.hpp"
#include "newstrend/eval.hpp"

using namespace newstrend;
using nlohmann::json;

namespace {

class Criterion {
 public:
  Criterion(int number, std::string name)
      : number_(number), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  double elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void finish(bool pass) const {
    std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", number_,
                name_.c_str(), elapsed_seconds());
    std::fflush(stdout);
  }

  void skip(const std::string& reason) const {
    std::printf("[SKIP] criterion %d: %s (%s)\n", number_, name_.c_str(), reason.c_str());
    std::fflush(stdout);
  }

 private:
  int number_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

double logreg_trial(std::uint64_t seed) {
  const std::size_t d = 10;
  const Dataset data = testutil::make_blobs(20, d, 1.0, seed);
  Rng rng(derive_seed(seed, "logreg-params"));
  std::vector<double> flat(d + 1);
  for (auto& v : flat) v = rng.uniform(-1.0, 1.0);
  const double l2 = seed % 2 == 0 ? 0.0 : 0.05;

  const std::vector<double> w(flat.begin(), flat.end() - 1);
  const auto [loss, grads] = logreg_loss_and_grad(w, flat.back(), data, l2);
  std::vector<double> analytic = grads.weights;
  analytic.push_back(grads.bias);

  const auto numeric = testutil::numeric_gradient(
      [&](const std::vector<double>& p) {
        const std::vector<double> pw(p.begin(), p.end() - 1);
        return logreg_loss_and_grad(pw, p.back(), data, l2).first;
      },
      flat, 1e-5);
  (void)loss;
  return testutil::max_grad_rel_error(analytic, numeric);
}

double mlp_trial(std::uint64_t seed) {
  const std::size_t d = 6;
  const std::size_t h = 4;
  const Dataset data = testutil::make_blobs(10, d, 1.0, seed);
  Rng rng(derive_seed(seed, "mlp-params"));

  MlpModel params;
  params.input_dim = d;
  params.hidden = h;
  params.w1.resize(h * d);
  params.b1.resize(h);
  params.w2.resize(h);
  for (auto& v : params.w1) v = rng.uniform(-1.0, 1.0);
  for (auto& v : params.b1) v = rng.uniform(-1.0, 1.0);
  for (auto& v : params.w2) v = rng.uniform(-1.0, 1.0);
  params.b2 = rng.uniform(-1.0, 1.0);

  const auto [loss, grads] = mlp_loss_and_grad(params, data);
  (void)loss;
  std::vector<double> analytic = grads.w1;
  analytic.insert(analytic.end(), grads.b1.begin(), grads.b1.end());
  analytic.insert(analytic.end(), grads.w2.begin(), grads.w2.end());
  analytic.push_back(grads.b2);

  std::vector<double> flat = params.w1;
  flat.insert(flat.end(), params.b1.begin(), params.b1.end());
  flat.insert(flat.end(), params.w2.begin(), params.w2.end());
  flat.push_back(params.b2);

  const auto numeric = testutil::numeric_gradient(
      [&](const std::vector<double>& p) {
        MlpModel m = params;
        std::size_t off = 0;
        for (auto& v : m.w1) v = p[off++];
        for (auto& v : m.b1) v = p[off++];
        for (auto& v : m.w2) v = p[off++];
        m.b2 = p[off];
        return mlp_loss_and_grad(m, data).first;
      },
      flat, 1e-5);
  return testutil::max_grad_rel_error(analytic, numeric);
}

double sgns_trial(std::uint64_t seed, std::size_t d) {
  const std::size_t k = 3;
  Rng rng(derive_seed(seed, "sgns-params"));
  std::vector<double> center(d), context(d);
  std::vector<std::vector<double>> negatives(k, std::vector<double>(d));
  for (auto& v : center) v = rng.uniform(-1.0, 1.0);
  for (auto& v : context) v = rng.uniform(-1.0, 1.0);
  for (auto& row : negatives) {
    for (auto& v : row) v = rng.uniform(-1.0, 1.0);
  }

  const auto [loss, grads] = sgns_loss_and_grad(center, context, negatives);
  (void)loss;
  std::vector<double> analytic = grads.center;
  analytic.insert(analytic.end(), grads.context.begin(), grads.context.end());
  for (const auto& g : grads.negatives) analytic.insert(analytic.end(), g.begin(), g.end());

  std::vector<double> flat = center;
  flat.insert(flat.end(), context.begin(), context.end());
  for (const auto& row : negatives) flat.insert(flat.end(), row.begin(), row.end());

  const auto numeric = testutil::numeric_gradient(
      [&](const std::vector<double>& p) {
        const std::vector<double> pc(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(d));
        const std::vector<double> px(p.begin() + static_cast<std::ptrdiff_t>(d),
                                     p.begin() + static_cast<std::ptrdiff_t>(2 * d));
        std::vector<std::vector<double>> pn(k);
        for (std::size_t i = 0; i < k; ++i) {
          pn[i].assign(p.begin() + static_cast<std::ptrdiff_t>((2 + i) * d),
                       p.begin() + static_cast<std::ptrdiff_t>((3 + i) * d));
        }
        return sgns_loss_and_grad(pc, px, pn).first;
      },
      flat, 1e-5);
  return testutil::max_grad_rel_error(analytic, numeric);
}

std::string table1_dataset_path() {
  if (const char* env = std::getenv("NEWSTREND_DJIA_CSV")) return env;
  return std::string(NEWSTREND_DATA_DIR) + "/Combined_News_DJIA.csv";
}

}  // namespace

TEST_CASE("criterion 1: gradient oracles (logreg, mlp, sgns)") {
  Criterion criterion(1, "gradient oracles at rel. error <= 1e-4, 100 trials each");
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    worst = std::max(worst, logreg_trial(1000 + trial));
    worst = std::max(worst, mlp_trial(2000 + trial));
    worst = std::max(worst, sgns_trial(3000 + trial, trial % 2 == 0 ? 4 : 16));
  }
  const bool pass = worst <= 1e-4 && criterion.elapsed_seconds() < 60.0;
  criterion.finish(pass);
  CHECK(worst <= 1e-4);
  CHECK(criterion.elapsed_seconds() < 60.0);
}

TEST_CASE("criterion 2: separability suite, all eight classifiers") {
  Criterion criterion(2, "two-blob holdout accuracy >= 0.95 for every classifier");
  const Dataset blobs = testutil::make_blobs(500, 10, 3.0, 20240801);
  const auto [train, test] = testutil::prefix_split(blobs, 0.8);

  ModelHyperparams hp;  // shipped defaults
  bool pass = true;
  for (const ModelKind kind :
       {ModelKind::logreg, ModelKind::lda, ModelKind::knn, ModelKind::dtree, ModelKind::svm,
        ModelKind::rforest, ModelKind::gnb, ModelKind::mlp}) {
    const Model model = train_model(kind, train, hp, 7);
    const auto preds = predict(model, test.X);
    const double acc = accuracy(preds, test.y);
    if (acc < 0.95) {
      std::printf("  %s: %.3f below 0.95\n", to_string(kind).c_str(), acc);
      pass = false;
    }
    CHECK(acc >= 0.95);
  }
  pass = pass && criterion.elapsed_seconds() < 120.0;
  criterion.finish(pass);
  CHECK(criterion.elapsed_seconds() < 120.0);
}

TEST_CASE("criterion 3: vectorizer oracle equivalence on a 20-day mini corpus") {
  Criterion criterion(3, "bow and tfidf_paper match an independent recount");
  const LabeledCorpus corpus =
      testutil::make_calendar_corpus(Date(2012, 3, 1), Date(2012, 3, 28), 31);
  REQUIRE(corpus.size() == 20);

  PreprocessConfig pre;
  pre.stopwords = default_stopword_list();
  std::vector<std::vector<Token>> docs;
  for (const auto& day : corpus.days) docs.push_back(preprocess_day(day, pre));
  const Vocabulary vocab = build_vocabulary(docs, 1);

  // Brute-force recount, fully independent of the vectorizer path.
  std::map<std::string, long long> corpus_totals;
  for (const auto& doc : docs) {
    for (const auto& tok : doc) ++corpus_totals[tok];
  }

  bool pass = true;
  for (const auto& doc : docs) {
    std::map<std::string, long long> day_counts;
    for (const auto& tok : doc) ++day_counts[tok];

    const FeatureVector bow = bow_vector(doc, vocab);
    const FeatureVector paper = tfidf_paper_vector(doc, vocab);
    for (std::size_t t = 0; t < vocab.size(); ++t) {
      const long long count =
          day_counts.count(vocab.terms[t]) ? day_counts.at(vocab.terms[t]) : 0;
      if (bow[t] != static_cast<double>(count)) pass = false;
      CHECK(bow[t] == static_cast<double>(count));  // exact integer equality

      const double expected =
          count == 0 ? 0.0
                     : std::min(1.0, static_cast<double>(count) /
                                         static_cast<double>(corpus_totals.at(vocab.terms[t])));
      if (std::abs(paper[t] - expected) > 1e-12) pass = false;
      CHECK(paper[t] == doctest::Approx(expected).epsilon(1e-12));
      if (paper[t] < 0.0 || paper[t] > 1.0) pass = false;
      CHECK(paper[t] >= 0.0);
      CHECK(paper[t] <= 1.0);
    }
  }
  criterion.finish(pass);
}

TEST_CASE("criterion 4: embedding context property on a 50k-token corpus") {
  Criterion criterion(4, "interchangeable tokens: cos(A,B) > 0.8 and margin 0.3 over probes");
  const auto docs = testutil::make_context_corpus(10000, 404);  // 10k sentences x 5 tokens
  std::size_t total_tokens = 0;
  for (const auto& doc : docs) total_tokens += doc.size();
  REQUIRE(total_tokens == 50000);

  const Vocabulary vocab = build_vocabulary(docs, 1);
  SgnsParams params;  // shipped defaults: d=50, window 5, k=5, 5 epochs
  params.seed = 404;
  const EmbeddingMatrix emb = train_word2vec(docs, vocab, params);

  const auto vec = [&](const std::string& term) {
    return emb.input_vectors[*vocab.find(term)];
  };
  const double ab = cosine_similarity(vec("alpha"), vec("beta"));
  std::printf("  cos(alpha, beta) = %.3f\n", ab);
  bool pass = ab > 0.8;
  CHECK(ab > 0.8);
  for (int k = 0; k < 10; ++k) {
    const double az = cosine_similarity(vec("alpha"), vec("probe" + std::to_string(k)));
    if (!(ab > az + 0.3)) {
      std::printf("  probe%d: cos(A,B)=%.3f vs cos(A,Z)=%.3f\n", k, ab, az);
      pass = false;
    }
    CHECK(ab > az + 0.3);
  }
  pass = pass && criterion.elapsed_seconds() < 180.0;
  criterion.finish(pass);
  CHECK(criterion.elapsed_seconds() < 180.0);
}

TEST_CASE("criterion 5: walk-forward window schedule and pooled accuracy") {
  Criterion criterion(5, "hand-computed 9+3 windows and pooled recount");
  const LabeledCorpus corpus =
      testutil::make_calendar_corpus(Date(2010, 1, 1), Date(2011, 6, 30), 17);

  const auto windows = sliding_windows(corpus);
  bool pass = windows.size() == 3;
  REQUIRE(windows.size() == 3);

  const Date expected[3][4] = {
      {Date(2010, 1, 1), Date(2010, 9, 30), Date(2010, 10, 1), Date(2010, 12, 31)},
      {Date(2010, 4, 1), Date(2010, 12, 31), Date(2011, 1, 1), Date(2011, 3, 31)},
      {Date(2010, 7, 1), Date(2011, 3, 31), Date(2011, 4, 1), Date(2011, 6, 30)}};
  for (std::size_t w = 0; w < 3; ++w) {
    pass = pass && windows[w].train_start == expected[w][0] &&
           windows[w].train_end == expected[w][1] && windows[w].test_start == expected[w][2] &&
           windows[w].test_end == expected[w][3];
    CHECK(windows[w].train_start == expected[w][0]);
    CHECK(windows[w].train_end == expected[w][1]);
    CHECK(windows[w].test_start == expected[w][2]);
    CHECK(windows[w].test_end == expected[w][3]);
    CHECK(windows[w].train_end < windows[w].test_start);
    CHECK(windows[w].train_start.add_months(9).add_days(-1) == windows[w].train_end);
  }

  GridConfig grid;
  grid.seed = 99;
  grid.preprocess.stopwords = default_stopword_list();
  FeatureSpec bow;
  grid.embeddings = {bow};
  grid.models = {ModelKind::logreg};
  grid.hyperparams.logreg.epochs = 50;
  grid.split.mode = SplitSpec::Mode::walk_forward;

  const BacktestResult result = walk_forward_backtest(corpus, grid);
  std::int64_t correct = 0, total = 0;
  for (const auto& report : result.window_reports) {
    REQUIRE(report.rows.size() == 1);
    REQUIRE(report.rows[0].result.has_value());
    correct += report.rows[0].result->confusion.correct();
    total += report.rows[0].result->n_test;
  }
  REQUIRE(result.aggregate.rows.size() == 1);
  const double pooled = result.aggregate.rows[0].result->accuracy;
  const double recount = static_cast<double>(correct) / static_cast<double>(total);
  pass = pass && pooled == recount && result.aggregate.rows[0].result->n_test == total;
  CHECK(pooled == doctest::Approx(recount).epsilon(1e-15));
  CHECK(result.aggregate.rows[0].result->n_test == total);
  criterion.finish(pass);
}

TEST_CASE("criterion 6: reduction identities") {
  Criterion criterion(6, "forest-of-one == dtree; GNB scale and LDA shift invariance");
  bool pass = true;

  for (std::uint64_t seed = 600; seed < 610; ++seed) {
    const Dataset data = testutil::make_blobs(60, 5, 0.8, seed);
    const Dataset probes = testutil::make_blobs(40, 5, 0.8, seed + 10000);

    RforestConfig forest_config;
    forest_config.n_trees = 1;
    forest_config.bootstrap = false;
    forest_config.feature_fraction = 1.0;
    forest_config.max_depth = 6;
    forest_config.seed = seed;
    const Model forest = train_rforest(data, forest_config);
    const Model tree = train_dtree(data, DtreeConfig{6, 1});
    if (predict(forest, probes.X) != predict(tree, probes.X)) pass = false;
    CHECK(predict(forest, probes.X) == predict(tree, probes.X));

    Dataset scaled = data;
    for (auto& row : scaled.X) {
      for (double& v : row) v *= 10.0;
    }
    const Model gnb_base = train_gnb(data);
    const Model gnb_scaled = train_gnb(scaled);
    for (const auto& x : probes.X) {
      std::vector<double> x10 = x;
      for (double& v : x10) v *= 10.0;
      if (gnb_base.predict_one(x) != gnb_scaled.predict_one(x10)) pass = false;
      CHECK(gnb_base.predict_one(x) == gnb_scaled.predict_one(x10));
    }

    Dataset shifted = data;
    const std::vector<double> shift = {3.5, -1.0, 42.0, 0.125, -7.75};
    for (auto& row : shifted.X) {
      for (std::size_t j = 0; j < row.size(); ++j) row[j] += shift[j];
    }
    const Model lda_base = train_lda(data);
    const Model lda_shifted = train_lda(shifted);
    for (const auto& x : probes.X) {
      std::vector<double> xs = x;
      for (std::size_t j = 0; j < xs.size(); ++j) xs[j] += shift[j];
      if (lda_base.predict_one(x) != lda_shifted.predict_one(xs)) pass = false;
      CHECK(lda_base.predict_one(x) == lda_shifted.predict_one(xs));
    }
  }
  criterion.finish(pass);
}

TEST_CASE("criterion 7: run determinism and full-grid runtime on the 100-day fixture") {
  Criterion criterion(7, "cmd_run byte-identical twice; 5x8 grid under 5 minutes");
  testutil::TempDir dir("acceptance7");
  const LabeledCorpus corpus = testutil::make_fixture_corpus(100, 777);
  testutil::write_file(dir.file("headlines.csv"), testutil::fixture_headline_csv(corpus));

  json cfg;
  cfg["data"]["headline_csv"] = dir.file("headlines.csv");
  cfg["features"]["embeddings"] = {"bow", "tfidf_paper", "tfidf_standard", "w2v_sum", "w2v_mean"};
  cfg["models"]["kinds"] = {"logreg", "lda", "knn", "dtree", "svm", "rforest", "gnb", "mlp"};
  cfg["split"]["mode"] = "chronological";
  cfg["split"]["fraction"] = 0.8;
  cfg["seed"] = 20152008;
  cfg["output_dir"] = dir.file("out");
  testutil::write_file(dir.file("cfg.json"), cfg.dump(2));

  std::ostringstream out1, err1;
  const int code1 = cmd_run(dir.file("cfg.json"), out1, err1);
  if (code1 != 0) std::printf("  first run stderr: %s\n", err1.str().c_str());
  const std::string report1 = testutil::read_file(dir.file("out/report.txt"));
  const std::string csv1 = testutil::read_file(dir.file("out/report.csv"));

  std::ostringstream out2, err2;
  const int code2 = cmd_run(dir.file("cfg.json"), out2, err2);
  const std::string report2 = testutil::read_file(dir.file("out/report.txt"));
  const std::string csv2 = testutil::read_file(dir.file("out/report.csv"));

  bool pass = code1 == 0 && code2 == 0 && report1 == report2 && csv1 == csv2;
  CHECK(code1 == 0);
  CHECK(code2 == 0);
  CHECK(report1 == report2);
  CHECK(csv1 == csv2);

  // 40 grid rows + baseline row in the CSV.
  std::size_t lines = 0;
  for (char c : csv1) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 42);  // header + baseline + 40 cells
  pass = pass && lines == 42 && criterion.elapsed_seconds() < 300.0;
  criterion.finish(pass);
  CHECK(criterion.elapsed_seconds() < 300.0);
}

TEST_CASE("criterion 8: Table 1 replication band (dataset-dependent)") {
  Criterion criterion(8, "BoW + logreg accuracy in [0.50, 0.62] on the real dataset");
  const std::string dataset = table1_dataset_path();
  if (!std::filesystem::exists(dataset)) {
    criterion.skip("dataset not supplied: " + dataset);
    return;
  }

  // The full Table-1-style grid: five embeddings by eight algorithms on the
  // 2008-2014 / 2015 chronological split, matching the shipped replication
  // config. The band row is the grid's (bow, logreg) cell.
  testutil::TempDir dir("acceptance8");
  json cfg;
  cfg["data"]["headline_csv"] = dataset;
  cfg["features"]["embeddings"] = {"bow", "tfidf_paper", "tfidf_standard", "w2v_sum", "w2v_mean"};
  cfg["features"]["vocabulary"] = {{"min_df", 2}, {"max_size", 5000}};
  cfg["models"]["kinds"] = {"logreg", "lda", "knn", "dtree", "svm", "rforest", "gnb", "mlp"};
  cfg["models"]["dtree"] = {{"max_depth", 10}, {"min_leaf", 5}};
  cfg["models"]["rforest"] = {{"n_trees", 50}, {"feature_fraction", 0.3}, {"bootstrap", true},
                              {"max_depth", 10}, {"min_leaf", 5}};
  cfg["models"]["mlp"] = {{"hidden_size", 16}, {"learning_rate", 0.05}, {"epochs", 100},
                          {"batch_size", 32}};
  cfg["split"]["mode"] = "chronological";
  cfg["split"]["boundary"] = "2014-12-31";
  cfg["seed"] = 57;
  cfg["output_dir"] = dir.file("out");
  testutil::write_file(dir.file("cfg.json"), cfg.dump(2));

  std::ostringstream out, err;
  const int code = cmd_run(dir.file("cfg.json"), out, err);
  CHECK(code == 0);
  if (code != 0) {
    std::printf("  run failed: %s\n", err.str().c_str());
    criterion.finish(false);
    return;
  }
  const double grid_seconds = criterion.elapsed_seconds();
  std::printf("  full 5x8 grid completed in %.0f s\n", grid_seconds);
  CHECK(grid_seconds < 1800.0);

  const std::string csv = testutil::read_file(dir.file("out/report.csv"));
  std::istringstream lines(csv);
  std::string line;
  double acc = -1.0, baseline = -1.0;
  while (std::getline(lines, line)) {
    if (line.rfind("bow,logreg,", 0) == 0) {
      std::sscanf(line.c_str(), "bow,logreg,%lf", &acc);
    }
    if (line.rfind("(baseline),majority,", 0) == 0) {
      std::sscanf(line.c_str(), "(baseline),majority,%lf", &baseline);
    }
  }
  std::printf("  bow+logreg validation accuracy: %.4f (majority baseline %.4f)\n", acc, baseline);
  const bool in_band = acc >= 0.50 && acc <= 0.62;
  if (!in_band) {
    // The band is reported, not fatal, when the property suites pass.
    std::printf("  note: accuracy outside the replication band [0.50, 0.62]\n");
  }
  criterion.finish(in_band && grid_seconds < 1800.0);
}
