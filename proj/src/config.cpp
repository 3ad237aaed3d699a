#include "newstrend/config.hpp"

#include <cstdio>
#include <filesystem>

#include "newstrend/rng.hpp"

namespace newstrend {

using nlohmann::json;

namespace {

// Typed getters that record a diagnostic and keep the default on a type
// mismatch, so one bad field does not mask the rest of the config.
template <typename T>
T get_or(const json& obj, const std::string& path, const char* key, T fallback,
         std::vector<std::string>& diags) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw json::type_error::create(302, "expected string", &v);
    }
    return v.get<T>();
  } catch (const std::exception&) {
    diags.push_back(path + "." + key + ": wrong type");
    return fallback;
  }
}

std::optional<std::string> get_optional_string(const json& obj, const std::string& path,
                                               const char* key,
                                               std::vector<std::string>& diags) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  if (!obj.at(key).is_string()) {
    diags.push_back(path + "." + key + ": wrong type (expected string or null)");
    return std::nullopt;
  }
  return obj.at(key).get<std::string>();
}

const json& section(const json& obj, const char* key) {
  static const json empty = json::object();
  if (obj.is_object() && obj.contains(key) && obj.at(key).is_object()) return obj.at(key);
  return empty;
}

}  // namespace

json default_config_json() {
  json j;
  j["data"] = {{"headline_csv", nullptr}, {"price_csv", nullptr},
               {"price_column", "close"}, {"stopword_file", nullptr},
               {"gazetteer_file", nullptr}, {"lexicon_file", nullptr}};
  j["preprocess"] = {{"lowercase", true}, {"remove_stopwords", true}, {"ner_mode", "off"}};
  j["features"] = {
      {"embeddings", json::array({"bow"})},
      {"ngram", {{"n", 1}, {"combine_with_unigrams", false}}},
      {"sentiment", false},
      {"vocabulary", {{"min_df", 1}, {"max_size", 5000}}},
      {"word2vec",
       {{"dimension", 50},
        {"window", 5},
        {"negatives", 5},
        {"epochs", 5},
        {"learning_rate", 0.025},
        {"min_learning_rate", 1e-4},
        {"smoothing_exponent", 0.75}}}};
  j["models"] = {
      {"kinds", json::array({"logreg"})},
      {"logreg",
       {{"learning_rate", 0.1}, {"epochs", 300}, {"l2", 0.0}, {"tolerance", 1e-8}, {"batch_size", 0}}},
      {"knn", {{"k", 5}}},
      {"dtree", {{"max_depth", 10}, {"min_leaf", 1}}},
      {"svm", {{"learning_rate", 0.01}, {"epochs", 300}, {"l2", 1e-3}}},
      {"rforest",
       {{"n_trees", 50},
        {"feature_fraction", 0.3},
        {"bootstrap", true},
        {"max_depth", 10},
        {"min_leaf", 1}}},
      {"mlp",
       {{"hidden_size", 16}, {"learning_rate", 0.05}, {"epochs", 200}, {"batch_size", 32}}}};
  j["split"] = {{"mode", "chronological"}, {"fraction", 0.8},       {"boundary", nullptr},
                {"train_months", 9},       {"test_months", 3},      {"step_months", 3}};
  j["seed"] = nullptr;
  j["output_dir"] = nullptr;
  return j;
}

RunConfig parse_run_config(const json& doc, std::vector<std::string>& diags) {
  RunConfig c;
  if (!doc.is_object()) {
    diags.push_back("$: config must be a JSON object");
    return c;
  }

  const json& data = section(doc, "data");
  c.headline_csv = get_or<std::string>(data, "$.data", "headline_csv", "", diags);
  c.price_csv = get_optional_string(data, "$.data", "price_csv", diags);
  const std::string price_column =
      get_or<std::string>(data, "$.data", "price_column", "close", diags);
  if (price_column == "adjusted_close") c.price_column = PriceColumn::adjusted_close;
  else if (price_column != "close") diags.push_back("$.data.price_column: must be close or adjusted_close");
  c.stopword_file = get_optional_string(data, "$.data", "stopword_file", diags);
  c.gazetteer_file = get_optional_string(data, "$.data", "gazetteer_file", diags);
  c.lexicon_file = get_optional_string(data, "$.data", "lexicon_file", diags);

  const json& pre = section(doc, "preprocess");
  c.lowercase = get_or<bool>(pre, "$.preprocess", "lowercase", true, diags);
  c.remove_stopwords_flag = get_or<bool>(pre, "$.preprocess", "remove_stopwords", true, diags);
  c.ner_mode = get_or<std::string>(pre, "$.preprocess", "ner_mode", "off", diags);

  const json& features = section(doc, "features");
  if (features.contains("embeddings")) {
    if (features.at("embeddings").is_array()) {
      c.embeddings.clear();
      for (const auto& e : features.at("embeddings")) {
        if (e.is_string()) c.embeddings.push_back(e.get<std::string>());
        else diags.push_back("$.features.embeddings: entries must be strings");
      }
    } else {
      diags.push_back("$.features.embeddings: wrong type (expected array)");
    }
  }
  const json& ngram = section(features, "ngram");
  c.ngram.n = get_or<int>(ngram, "$.features.ngram", "n", 1, diags);
  c.ngram.combine_with_unigrams =
      get_or<bool>(ngram, "$.features.ngram", "combine_with_unigrams", false, diags);
  c.sentiment = get_or<bool>(features, "$.features", "sentiment", false, diags);
  const json& vocabulary = section(features, "vocabulary");
  c.min_df = get_or<std::int64_t>(vocabulary, "$.features.vocabulary", "min_df", 1, diags);
  c.max_vocab = static_cast<std::size_t>(
      get_or<std::int64_t>(vocabulary, "$.features.vocabulary", "max_size", 5000, diags));
  const json& w2v = section(features, "word2vec");
  c.sgns.dimension = get_or<int>(w2v, "$.features.word2vec", "dimension", 50, diags);
  c.sgns.window = get_or<int>(w2v, "$.features.word2vec", "window", 5, diags);
  c.sgns.negatives = get_or<int>(w2v, "$.features.word2vec", "negatives", 5, diags);
  c.sgns.epochs = get_or<int>(w2v, "$.features.word2vec", "epochs", 5, diags);
  c.sgns.learning_rate = get_or<double>(w2v, "$.features.word2vec", "learning_rate", 0.025, diags);
  c.sgns.min_learning_rate =
      get_or<double>(w2v, "$.features.word2vec", "min_learning_rate", 1e-4, diags);
  c.sgns.smoothing_exponent =
      get_or<double>(w2v, "$.features.word2vec", "smoothing_exponent", 0.75, diags);

  const json& models = section(doc, "models");
  if (models.contains("kinds")) {
    if (models.at("kinds").is_array()) {
      c.models.clear();
      for (const auto& m : models.at("kinds")) {
        if (m.is_string()) c.models.push_back(m.get<std::string>());
        else diags.push_back("$.models.kinds: entries must be strings");
      }
    } else {
      diags.push_back("$.models.kinds: wrong type (expected array)");
    }
  }
  const json& logreg = section(models, "logreg");
  c.hyperparams.logreg.learning_rate =
      get_or<double>(logreg, "$.models.logreg", "learning_rate", 0.1, diags);
  c.hyperparams.logreg.epochs = get_or<int>(logreg, "$.models.logreg", "epochs", 300, diags);
  c.hyperparams.logreg.l2 = get_or<double>(logreg, "$.models.logreg", "l2", 0.0, diags);
  c.hyperparams.logreg.tolerance =
      get_or<double>(logreg, "$.models.logreg", "tolerance", 1e-8, diags);
  c.hyperparams.logreg.batch_size = get_or<int>(logreg, "$.models.logreg", "batch_size", 0, diags);
  const json& knn = section(models, "knn");
  c.hyperparams.knn.k = get_or<int>(knn, "$.models.knn", "k", 5, diags);
  const json& dtree = section(models, "dtree");
  c.hyperparams.dtree.max_depth = get_or<int>(dtree, "$.models.dtree", "max_depth", 10, diags);
  c.hyperparams.dtree.min_leaf = get_or<int>(dtree, "$.models.dtree", "min_leaf", 1, diags);
  const json& svm = section(models, "svm");
  c.hyperparams.svm.learning_rate =
      get_or<double>(svm, "$.models.svm", "learning_rate", 0.01, diags);
  c.hyperparams.svm.epochs = get_or<int>(svm, "$.models.svm", "epochs", 300, diags);
  c.hyperparams.svm.l2 = get_or<double>(svm, "$.models.svm", "l2", 1e-3, diags);
  const json& rforest = section(models, "rforest");
  c.hyperparams.rforest.n_trees = get_or<int>(rforest, "$.models.rforest", "n_trees", 50, diags);
  c.hyperparams.rforest.feature_fraction =
      get_or<double>(rforest, "$.models.rforest", "feature_fraction", 0.3, diags);
  c.hyperparams.rforest.bootstrap =
      get_or<bool>(rforest, "$.models.rforest", "bootstrap", true, diags);
  c.hyperparams.rforest.max_depth =
      get_or<int>(rforest, "$.models.rforest", "max_depth", 10, diags);
  c.hyperparams.rforest.min_leaf = get_or<int>(rforest, "$.models.rforest", "min_leaf", 1, diags);
  const json& mlp = section(models, "mlp");
  c.hyperparams.mlp.hidden_size = get_or<int>(mlp, "$.models.mlp", "hidden_size", 16, diags);
  c.hyperparams.mlp.learning_rate =
      get_or<double>(mlp, "$.models.mlp", "learning_rate", 0.05, diags);
  c.hyperparams.mlp.epochs = get_or<int>(mlp, "$.models.mlp", "epochs", 200, diags);
  c.hyperparams.mlp.batch_size = get_or<int>(mlp, "$.models.mlp", "batch_size", 32, diags);

  const json& split = section(doc, "split");
  c.split_mode = get_or<std::string>(split, "$.split", "mode", "chronological", diags);
  c.fraction = get_or<double>(split, "$.split", "fraction", 0.8, diags);
  c.boundary = get_optional_string(split, "$.split", "boundary", diags);
  c.train_months = get_or<int>(split, "$.split", "train_months", 9, diags);
  c.test_months = get_or<int>(split, "$.split", "test_months", 3, diags);
  c.step_months = get_or<int>(split, "$.split", "step_months", 3, diags);

  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    const json& seed = doc.at("seed");
    if (seed.is_number_unsigned()) {
      c.seed = seed.get<std::uint64_t>();
      c.seed_present = true;
    } else if (seed.is_number_integer() && seed.get<std::int64_t>() >= 0) {
      c.seed = static_cast<std::uint64_t>(seed.get<std::int64_t>());
      c.seed_present = true;
    } else {
      diags.push_back("$.seed: wrong type (expected non-negative integer)");
    }
  }
  c.output_dir = get_or<std::string>(doc, "$", "output_dir", "", diags);
  return c;
}

std::vector<std::string> validate_run_config(const RunConfig& c) {
  std::vector<std::string> diags;
  auto file_exists = [](const std::string& p) { return std::filesystem::exists(p); };

  if (c.headline_csv.empty()) diags.push_back("$.data.headline_csv: required");
  else if (!file_exists(c.headline_csv)) diags.push_back("$.data.headline_csv: file not found: " + c.headline_csv);
  if (c.price_csv && !file_exists(*c.price_csv)) diags.push_back("$.data.price_csv: file not found: " + *c.price_csv);
  if (c.stopword_file && !file_exists(*c.stopword_file)) diags.push_back("$.data.stopword_file: file not found: " + *c.stopword_file);
  if (c.gazetteer_file && !file_exists(*c.gazetteer_file)) diags.push_back("$.data.gazetteer_file: file not found: " + *c.gazetteer_file);
  if (c.lexicon_file && !file_exists(*c.lexicon_file)) diags.push_back("$.data.lexicon_file: file not found: " + *c.lexicon_file);

  if (c.ner_mode != "off" && c.ner_mode != "remove" && c.ner_mode != "keep_only") {
    diags.push_back("$.preprocess.ner_mode: must be off, remove or keep_only");
  }

  if (c.embeddings.empty()) diags.push_back("$.features.embeddings: at least one embedding required");
  for (const auto& name : c.embeddings) {
    if (!base_vectorizer_from_string(name)) {
      diags.push_back("$.features.embeddings: unknown embedding '" + name + "'");
    }
  }
  if (c.ngram.n < 1 || c.ngram.n > kMaxNgramOrder) {
    diags.push_back("$.features.ngram.n: must be between 1 and " + std::to_string(kMaxNgramOrder));
  }
  if (c.sentiment && !c.lexicon_file) {
    diags.push_back("$.features.sentiment: requires $.data.lexicon_file");
  }
  if (c.min_df < 1) diags.push_back("$.features.vocabulary.min_df: must be >= 1");
  if (c.max_vocab < 1) diags.push_back("$.features.vocabulary.max_size: must be >= 1");
  if (c.sgns.dimension < 1) diags.push_back("$.features.word2vec.dimension: must be >= 1");
  if (c.sgns.window < 1) diags.push_back("$.features.word2vec.window: must be >= 1");
  if (c.sgns.negatives < 1) diags.push_back("$.features.word2vec.negatives: must be >= 1");
  if (c.sgns.epochs < 1) diags.push_back("$.features.word2vec.epochs: must be >= 1");
  if (!(c.sgns.learning_rate > 0.0)) diags.push_back("$.features.word2vec.learning_rate: must be > 0");
  if (!(c.sgns.smoothing_exponent > 0.0 && c.sgns.smoothing_exponent <= 1.0)) {
    diags.push_back("$.features.word2vec.smoothing_exponent: must be in (0,1]");
  }

  if (c.models.empty()) diags.push_back("$.models.kinds: at least one model required");
  for (const auto& name : c.models) {
    if (!model_kind_from_string(name)) {
      diags.push_back("$.models.kinds: unknown model '" + name + "'");
    }
  }
  if (!(c.hyperparams.logreg.learning_rate > 0.0)) diags.push_back("$.models.logreg.learning_rate: must be > 0");
  if (c.hyperparams.logreg.epochs < 1) diags.push_back("$.models.logreg.epochs: must be >= 1");
  if (c.hyperparams.logreg.l2 < 0.0) diags.push_back("$.models.logreg.l2: must be >= 0");
  if (c.hyperparams.knn.k < 1) diags.push_back("$.models.knn.k: must be >= 1");
  if (c.hyperparams.dtree.max_depth < 1) diags.push_back("$.models.dtree.max_depth: must be >= 1");
  if (c.hyperparams.dtree.min_leaf < 1) diags.push_back("$.models.dtree.min_leaf: must be >= 1");
  if (!(c.hyperparams.svm.learning_rate > 0.0)) diags.push_back("$.models.svm.learning_rate: must be > 0");
  if (c.hyperparams.svm.epochs < 1) diags.push_back("$.models.svm.epochs: must be >= 1");
  if (c.hyperparams.svm.l2 < 0.0) diags.push_back("$.models.svm.l2: must be >= 0");
  if (c.hyperparams.rforest.n_trees < 1) diags.push_back("$.models.rforest.n_trees: must be >= 1");
  if (!(c.hyperparams.rforest.feature_fraction > 0.0 && c.hyperparams.rforest.feature_fraction <= 1.0)) {
    diags.push_back("$.models.rforest.feature_fraction: must be in (0,1]");
  }
  if (c.hyperparams.mlp.hidden_size < 1) diags.push_back("$.models.mlp.hidden_size: must be >= 1");
  if (!(c.hyperparams.mlp.learning_rate > 0.0)) diags.push_back("$.models.mlp.learning_rate: must be > 0");
  if (c.hyperparams.mlp.epochs < 1) diags.push_back("$.models.mlp.epochs: must be >= 1");

  if (c.split_mode != "chronological" && c.split_mode != "walk_forward") {
    diags.push_back("$.split.mode: must be chronological or walk_forward");
  }
  if (c.split_mode == "chronological" && !c.boundary) {
    if (!(c.fraction > 0.0 && c.fraction < 1.0)) {
      diags.push_back("$.split.fraction: must be in (0,1)");
    }
  }
  if (c.boundary) {
    try {
      Date::parse(*c.boundary);
    } catch (const std::exception&) {
      diags.push_back("$.split.boundary: malformed date '" + *c.boundary + "'");
    }
  }
  if (c.train_months < 1) diags.push_back("$.split.train_months: must be >= 1");
  if (c.test_months < 1) diags.push_back("$.split.test_months: must be >= 1");
  if (c.step_months < 1) diags.push_back("$.split.step_months: must be >= 1");

  if (!c.seed_present) diags.push_back("$.seed: required (no wall-clock default)");
  if (c.output_dir.empty()) diags.push_back("$.output_dir: required");
  return diags;
}

nlohmann::json resolved_config_json(const RunConfig& c) {
  json j = default_config_json();
  j["data"]["headline_csv"] = c.headline_csv;
  j["data"]["price_csv"] = c.price_csv ? json(*c.price_csv) : json(nullptr);
  j["data"]["price_column"] =
      c.price_column == PriceColumn::adjusted_close ? "adjusted_close" : "close";
  j["data"]["stopword_file"] = c.stopword_file ? json(*c.stopword_file) : json(nullptr);
  j["data"]["gazetteer_file"] = c.gazetteer_file ? json(*c.gazetteer_file) : json(nullptr);
  j["data"]["lexicon_file"] = c.lexicon_file ? json(*c.lexicon_file) : json(nullptr);
  j["preprocess"]["lowercase"] = c.lowercase;
  j["preprocess"]["remove_stopwords"] = c.remove_stopwords_flag;
  j["preprocess"]["ner_mode"] = c.ner_mode;
  j["features"]["embeddings"] = c.embeddings;
  j["features"]["ngram"]["n"] = c.ngram.n;
  j["features"]["ngram"]["combine_with_unigrams"] = c.ngram.combine_with_unigrams;
  j["features"]["sentiment"] = c.sentiment;
  j["features"]["vocabulary"]["min_df"] = c.min_df;
  j["features"]["vocabulary"]["max_size"] = c.max_vocab;
  j["features"]["word2vec"]["dimension"] = c.sgns.dimension;
  j["features"]["word2vec"]["window"] = c.sgns.window;
  j["features"]["word2vec"]["negatives"] = c.sgns.negatives;
  j["features"]["word2vec"]["epochs"] = c.sgns.epochs;
  j["features"]["word2vec"]["learning_rate"] = c.sgns.learning_rate;
  j["features"]["word2vec"]["min_learning_rate"] = c.sgns.min_learning_rate;
  j["features"]["word2vec"]["smoothing_exponent"] = c.sgns.smoothing_exponent;
  j["models"]["kinds"] = c.models;
  j["models"]["logreg"]["learning_rate"] = c.hyperparams.logreg.learning_rate;
  j["models"]["logreg"]["epochs"] = c.hyperparams.logreg.epochs;
  j["models"]["logreg"]["l2"] = c.hyperparams.logreg.l2;
  j["models"]["logreg"]["tolerance"] = c.hyperparams.logreg.tolerance;
  j["models"]["logreg"]["batch_size"] = c.hyperparams.logreg.batch_size;
  j["models"]["knn"]["k"] = c.hyperparams.knn.k;
  j["models"]["dtree"]["max_depth"] = c.hyperparams.dtree.max_depth;
  j["models"]["dtree"]["min_leaf"] = c.hyperparams.dtree.min_leaf;
  j["models"]["svm"]["learning_rate"] = c.hyperparams.svm.learning_rate;
  j["models"]["svm"]["epochs"] = c.hyperparams.svm.epochs;
  j["models"]["svm"]["l2"] = c.hyperparams.svm.l2;
  j["models"]["rforest"]["n_trees"] = c.hyperparams.rforest.n_trees;
  j["models"]["rforest"]["feature_fraction"] = c.hyperparams.rforest.feature_fraction;
  j["models"]["rforest"]["bootstrap"] = c.hyperparams.rforest.bootstrap;
  j["models"]["rforest"]["max_depth"] = c.hyperparams.rforest.max_depth;
  j["models"]["rforest"]["min_leaf"] = c.hyperparams.rforest.min_leaf;
  j["models"]["mlp"]["hidden_size"] = c.hyperparams.mlp.hidden_size;
  j["models"]["mlp"]["learning_rate"] = c.hyperparams.mlp.learning_rate;
  j["models"]["mlp"]["epochs"] = c.hyperparams.mlp.epochs;
  j["models"]["mlp"]["batch_size"] = c.hyperparams.mlp.batch_size;
  j["split"]["mode"] = c.split_mode;
  j["split"]["fraction"] = c.fraction;
  j["split"]["boundary"] = c.boundary ? json(*c.boundary) : json(nullptr);
  j["split"]["train_months"] = c.train_months;
  j["split"]["test_months"] = c.test_months;
  j["split"]["step_months"] = c.step_months;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

std::string config_digest(const RunConfig& config) {
  const std::uint64_t h = fnv1a64(resolved_config_json(config).dump());
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GridConfig grid_from_config(const RunConfig& c) {
  GridConfig grid;
  grid.seed = c.seed;
  grid.config_digest = config_digest(c);

  grid.preprocess.lowercase = c.lowercase;
  grid.preprocess.remove_stopwords = c.remove_stopwords_flag;
  grid.preprocess.stopwords =
      c.stopword_file ? load_wordlist(*c.stopword_file) : default_stopword_list();
  if (c.ner_mode == "remove") grid.preprocess.ner_mode = NerMode::remove;
  else if (c.ner_mode == "keep_only") grid.preprocess.ner_mode = NerMode::keep_only;
  else grid.preprocess.ner_mode = NerMode::off;
  if (c.gazetteer_file) grid.preprocess.gazetteer = load_wordlist(*c.gazetteer_file);

  if (c.sentiment) {
    grid.lexicon = load_lexicon_csv(*c.lexicon_file);
  }

  for (const auto& name : c.embeddings) {
    FeatureSpec spec;
    spec.base = *base_vectorizer_from_string(name);
    spec.ngram = c.ngram;
    spec.sentiment = c.sentiment;
    spec.min_df = c.min_df;
    spec.max_vocab = c.max_vocab;
    spec.sgns = c.sgns;
    grid.embeddings.push_back(spec);
  }
  for (const auto& name : c.models) {
    grid.models.push_back(*model_kind_from_string(name));
  }
  grid.hyperparams = c.hyperparams;

  if (c.split_mode == "walk_forward") {
    grid.split.mode = SplitSpec::Mode::walk_forward;
  } else if (c.boundary) {
    grid.split.mode = SplitSpec::Mode::boundary;
    grid.split.boundary = Date::parse(*c.boundary);
  } else {
    grid.split.mode = SplitSpec::Mode::fraction;
    grid.split.fraction = c.fraction;
  }
  grid.split.train_months = c.train_months;
  grid.split.test_months = c.test_months;
  grid.split.step_months = c.step_months;
  return grid;
}

LabeledCorpus load_corpus(const RunConfig& c, std::size_t* mismatches) {
  const auto records = load_headline_csv(c.headline_csv);
  if (mismatches) *mismatches = 0;
  if (c.price_csv) {
    const auto prices = load_price_csv(*c.price_csv, c.price_column);
    const auto labels = derive_labels(prices);
    JoinResult joined = join_headlines_labels(records, labels);
    if (mismatches) *mismatches = joined.mismatches;
    return std::move(joined.corpus);
  }
  return corpus_from_records(records);
}

}  // namespace newstrend
