#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "newstrend/eval.hpp"

namespace newstrend {

// One run, as described by a config JSON document. Defaults live in
// default_config_json(); resolved_config_json() writes the fully expanded
// form back out so every reported number traces to a complete configuration.
struct RunConfig {
  // data
  std::string headline_csv;
  std::optional<std::string> price_csv;
  PriceColumn price_column = PriceColumn::close;
  std::optional<std::string> stopword_file;
  std::optional<std::string> gazetteer_file;
  std::optional<std::string> lexicon_file;

  // preprocess
  bool lowercase = true;
  bool remove_stopwords_flag = true;
  std::string ner_mode = "off";

  // features
  std::vector<std::string> embeddings{"bow"};
  NgramConfig ngram;
  bool sentiment = false;
  std::int64_t min_df = 1;
  std::size_t max_vocab = 5000;
  SgnsParams sgns;

  // models
  std::vector<std::string> models{"logreg"};
  ModelHyperparams hyperparams;

  // split
  std::string split_mode = "chronological";  // or "walk_forward"
  double fraction = 0.8;
  std::optional<std::string> boundary;
  int train_months = 9;
  int test_months = 3;
  int step_months = 3;

  std::uint64_t seed = 0;
  bool seed_present = false;
  std::string output_dir;
};

nlohmann::json default_config_json();

// Parses with defaults applied; structural problems (wrong types, unknown
// enum values) are reported as "path: message" diagnostics.
RunConfig parse_run_config(const nlohmann::json& doc, std::vector<std::string>& diagnostics);

// Cross-checks: required fields, ranges, referenced files.
std::vector<std::string> validate_run_config(const RunConfig& config);

nlohmann::json resolved_config_json(const RunConfig& config);

// FNV-1a of the resolved config dump, as 16 hex digits.
std::string config_digest(const RunConfig& config);

// Loads word lists / lexicon and assembles the experiment grid.
GridConfig grid_from_config(const RunConfig& config);

// Headline CSV (+ optional price CSV join). mismatches receives the count of
// CSV labels that disagreed with derived ones.
LabeledCorpus load_corpus(const RunConfig& config, std::size_t* mismatches = nullptr);

}  // namespace newstrend
