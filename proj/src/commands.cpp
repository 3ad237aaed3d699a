#include "newstrend/commands.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "newstrend/config.hpp"
#include "newstrend/eval.hpp"

namespace newstrend {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ANSI styling only for an interactive stdout; report files stay plain and
// NO_COLOR wins everywhere.
bool styling_enabled(const std::ostream& out) {
  return &out == &std::cout && ::isatty(STDOUT_FILENO) != 0 &&
         std::getenv("NO_COLOR") == nullptr;
}

std::string maybe_bold(const std::ostream& out, const std::string& text) {
  if (!styling_enabled(out)) return text;
  return "\x1b[1m" + text + "\x1b[0m";
}

struct LoadedConfig {
  RunConfig config;
  int exit_code = 0;
};

LoadedConfig load_and_validate(const std::string& config_path, std::ostream& err) {
  LoadedConfig result;
  std::ifstream in(config_path);
  if (!in) {
    err << "error: cannot read config file: " << config_path << "\n";
    result.exit_code = 1;
    return result;
  }
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    err << "error: invalid JSON in " << config_path << ": " << e.what() << "\n";
    result.exit_code = 1;
    return result;
  }

  std::vector<std::string> diags;
  result.config = parse_run_config(doc, diags);
  for (const auto& d : validate_run_config(result.config)) diags.push_back(d);
  if (!diags.empty()) {
    for (const auto& d : diags) err << d << "\n";
    result.exit_code = 1;
  }
  return result;
}

std::size_t count_errored_rows(const ExperimentReport& report) {
  std::size_t n = 0;
  for (const auto& row : report.rows) {
    if (!row.result) ++n;
  }
  return n;
}

void write_report_files(const fs::path& dir, const ExperimentReport& report) {
  fs::create_directories(dir);
  write_file_atomic((dir / "report.txt").string(), render_text_report(report));
  write_file_atomic((dir / "report.csv").string(), render_csv_report(report));
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  fs::rename(tmp, path);
}

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const LoadedConfig loaded = load_and_validate(config_path, err);
  if (loaded.exit_code != 0) return loaded.exit_code;
  out << "OK\n";
  return 0;
}

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const LoadedConfig loaded = load_and_validate(config_path, err);
  if (loaded.exit_code != 0) return loaded.exit_code;
  const RunConfig& config = loaded.config;

  try {
    std::size_t mismatches = 0;
    const LabeledCorpus corpus = load_corpus(config, &mismatches);
    if (mismatches > 0) {
      out << "note: " << mismatches << " CSV label(s) disagree with derived price labels"
          << " (CSV labels kept)\n";
    }
    const GridConfig grid = grid_from_config(config);

    const fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir);
    write_file_atomic((out_dir / "resolved-config.json").string(),
                      resolved_config_json(config).dump(2) + "\n");

    std::size_t errored = 0;
    if (grid.split.mode == SplitSpec::Mode::walk_forward) {
      const BacktestResult result = walk_forward_backtest(corpus, grid);
      write_report_files(out_dir, result.aggregate);
      write_file_atomic((out_dir / "windows.txt").string(), render_windows_table(result.windows));
      for (std::size_t w = 0; w < result.window_reports.size(); ++w) {
        char name[32];
        std::snprintf(name, sizeof(name), "window_%03zu", w + 1);
        write_report_files(out_dir / name, result.window_reports[w]);
        errored += count_errored_rows(result.window_reports[w]);
      }
      out << maybe_bold(out, "== walk-forward aggregate ==") << "\n";
      out << render_text_report(result.aggregate);
    } else {
      const ExperimentReport report = run_experiment(corpus, grid);
      write_report_files(out_dir, report);
      errored += count_errored_rows(report);
      out << maybe_bold(out, "== run summary ==") << "\n";
      out << render_text_report(report);
    }
    out << "reports written to " << out_dir.string() << "\n";

    if (errored > 0) {
      err << "error: " << errored << " grid cell(s) failed; see ERROR rows in the reports\n";
      return 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

namespace {

// Train-side day range under the configured split (first window for
// walk-forward), so inspection sees exactly what training would see.
std::pair<LabeledCorpus, std::optional<LabeledCorpus>> train_test_view(
    const LabeledCorpus& corpus, const GridConfig& grid) {
  if (grid.split.mode == SplitSpec::Mode::walk_forward) {
    const auto windows = sliding_windows(corpus, grid.split.train_months, grid.split.test_months,
                                         grid.split.step_months);
    return {slice_corpus(corpus, windows.front().train_days),
            slice_corpus(corpus, windows.front().test_days)};
  }
  if (grid.split.mode == SplitSpec::Mode::boundary) {
    auto [train, test] = chronological_split(corpus, *grid.split.boundary);
    return {std::move(train), std::move(test)};
  }
  auto [train, test] = chronological_split(corpus, grid.split.fraction);
  return {std::move(train), std::move(test)};
}

std::vector<std::vector<Token>> docs_of(const LabeledCorpus& corpus,
                                        const PreprocessConfig& config) {
  std::vector<std::vector<Token>> docs;
  docs.reserve(corpus.size());
  for (const auto& day : corpus.days) docs.push_back(preprocess_day(day, config));
  return docs;
}

}  // namespace

int cmd_inspect(const std::string& config_path, const InspectOptions& options, std::ostream& out,
                std::ostream& err) {
  const LoadedConfig loaded = load_and_validate(config_path, err);
  if (loaded.exit_code != 0) return loaded.exit_code;
  const RunConfig& config = loaded.config;

  try {
    const GridConfig grid = grid_from_config(config);
    const LabeledCorpus corpus = load_corpus(config);

    if (options.subcommand == "windows") {
      const auto windows = sliding_windows(corpus, grid.split.train_months,
                                           grid.split.test_months, grid.split.step_months);
      out << render_windows_table(windows);
      return 0;
    }

    if (options.subcommand == "vocab") {
      const auto [train, test] = train_test_view(corpus, grid);
      const FeatureSpec& spec = grid.embeddings.front();
      std::vector<std::vector<Token>> gram_docs;
      for (const auto& doc : docs_of(train, grid.preprocess)) {
        gram_docs.push_back(extract_ngrams(doc, spec.ngram));
      }
      const Vocabulary vocab = build_vocabulary(gram_docs, spec.min_df, spec.max_vocab);
      out << "vocabulary: " << vocab.size() << " terms (train split only, min_df=" << spec.min_df
          << ", max_size=" << spec.max_vocab << ")\n";
      out << "rank  term                        corpus_count  doc_freq\n";
      const auto top = std::min<std::size_t>(vocab.size(),
                                             options.top > 0 ? static_cast<std::size_t>(options.top)
                                                             : vocab.size());
      char line[128];
      for (std::size_t i = 0; i < top; ++i) {
        std::snprintf(line, sizeof(line), "%-4zu  %-26s  %12lld  %8lld\n", i + 1,
                      vocab.terms[i].c_str(), static_cast<long long>(vocab.corpus_count[i]),
                      static_cast<long long>(vocab.doc_freq[i]));
        out << line;
      }
      return 0;
    }

    if (options.subcommand == "features") {
      const auto [train, test] = train_test_view(corpus, grid);
      FeatureSpec spec = grid.embeddings.front();
      spec.sgns.seed = grid_embedding_seed(grid, spec);
      const FeaturePipeline pipeline =
          fit_feature_pipeline(spec, docs_of(train, grid.preprocess), grid.lexicon);

      const LabeledDay* day = nullptr;
      if (options.date) {
        const Date wanted = Date::parse(*options.date);
        for (const auto& d : corpus.days) {
          if (d.date == wanted) day = &d;
        }
        if (day == nullptr) throw std::runtime_error("date not in corpus: " + *options.date);
      } else {
        day = test && !test->empty() ? &test->days.front() : &corpus.days.front();
      }

      const FeatureVector v = assemble_features(preprocess_day(*day, grid.preprocess), pipeline);
      std::size_t nonzeros = 0;
      double norm_sq = 0.0;
      for (double x : v) {
        if (x != 0.0) ++nonzeros;
        norm_sq += x * x;
      }
      out << "date:      " << day->date.to_string() << "\n";
      out << "embedding: " << spec.name() << "\n";
      out << "dimension: " << v.size() << "\n";
      out << "nonzeros:  " << nonzeros << "\n";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", std::sqrt(norm_sq));
      out << "l2 norm:   " << buf << "\n";
      return 0;
    }

    err << "error: unknown inspect subcommand '" << options.subcommand
        << "' (expected vocab, windows or features)\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace newstrend
