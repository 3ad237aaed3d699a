#pragma once

// Shared fixtures and oracles for the test suites. Everything here is
// deliberately independent of the library's internals: brute-force recounts,
// central finite differences, synthetic corpora built from explicit rules.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "newstrend/corpus.hpp"
#include "newstrend/models.hpp"
#include "newstrend/preprocess.hpp"
#include "newstrend/rng.hpp"

namespace testutil {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("newstrend_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- gradient oracle ---------------------------------------------------------

// Relative error with an absolute floor, as used by standard gradient
// checkers: |a - n| / max(1, |a|, |n|).
inline double rel_error(double analytic, double numeric) {
  const double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
  return std::abs(analytic - numeric) / scale;
}

// Central differences over a flat parameter vector.
inline std::vector<double> numeric_gradient(
    const std::function<double(const std::vector<double>&)>& loss, std::vector<double> params,
    double step = 1e-5) {
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double original = params[i];
    params[i] = original + step;
    const double up = loss(params);
    params[i] = original - step;
    const double down = loss(params);
    params[i] = original;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

inline double max_grad_rel_error(const std::vector<double>& analytic,
                                 const std::vector<double>& numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    worst = std::max(worst, rel_error(analytic[i], numeric[i]));
  }
  return worst;
}

// ---- synthetic datasets --------------------------------------------------------

// Two Gaussian blobs at +/- `separation` per feature, unit variance. Rows are
// generated in one deterministic stream; a "chronological" split is just a
// prefix split of that stream.
inline newstrend::Dataset make_blobs(std::size_t n, std::size_t d, double separation,
                                     std::uint64_t seed) {
  newstrend::Rng rng(seed);
  newstrend::Dataset data;
  data.X.reserve(n);
  data.y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = rng.uniform() < 0.5 ? 0 : 1;
    const double mean = label == 1 ? separation : -separation;
    std::vector<double> row(d);
    for (auto& v : row) v = rng.normal(mean, 1.0);
    data.X.push_back(std::move(row));
    data.y.push_back(label);
  }
  return data;
}

inline std::pair<newstrend::Dataset, newstrend::Dataset> prefix_split(
    const newstrend::Dataset& data, double fraction) {
  const auto n_train = static_cast<std::size_t>(fraction * static_cast<double>(data.rows()));
  newstrend::Dataset train, test;
  train.X.assign(data.X.begin(), data.X.begin() + static_cast<std::ptrdiff_t>(n_train));
  train.y.assign(data.y.begin(), data.y.begin() + static_cast<std::ptrdiff_t>(n_train));
  test.X.assign(data.X.begin() + static_cast<std::ptrdiff_t>(n_train), data.X.end());
  test.y.assign(data.y.begin() + static_cast<std::ptrdiff_t>(n_train), data.y.end());
  return {std::move(train), std::move(test)};
}

// ---- synthetic headline corpora ---------------------------------------------

inline const std::vector<std::string>& neutral_words() {
  static const std::vector<std::string> words = {
      "market", "index",   "shares",  "trading", "investors", "bank",    "economy", "report",
      "growth", "quarter", "company", "deal",    "talks",     "oil",     "prices",  "bond",
      "europe", "asia",    "exports", "output",  "budget",    "tax",     "rates",   "policy",
      "board",  "chief",   "group",   "sector",  "firms",     "figures", "data",    "week"};
  return words;
}

inline const std::vector<std::string>& bullish_words() {
  static const std::vector<std::string> words = {"rally",  "gains", "surge",  "record",
                                                 "strong", "rise",  "upbeat", "boost"};
  return words;
}

inline const std::vector<std::string>& bearish_words() {
  static const std::vector<std::string> words = {"slump", "losses", "plunge", "fears",
                                                 "weak",  "fall",   "crisis", "cuts"};
  return words;
}

// Weekday sequence corpus between two dates with a planted word signal: up
// days draw extra words from the bullish pool, down days from the bearish one.
inline newstrend::LabeledCorpus make_calendar_corpus(newstrend::Date start, newstrend::Date end,
                                                     std::uint64_t seed) {
  using namespace newstrend;
  Rng rng(seed);
  LabeledCorpus corpus;
  for (Date d = start; d <= end; d = d.add_days(1)) {
    const std::chrono::weekday wd{
        std::chrono::sys_days{std::chrono::year{d.year()} /
                              std::chrono::month{d.month()} / std::chrono::day{d.day()}}};
    if (wd == std::chrono::Saturday || wd == std::chrono::Sunday) continue;

    LabeledDay day;
    day.date = d;
    day.label = rng.uniform() < 0.5 ? 0 : 1;
    const auto& signal = day.label == 1 ? bullish_words() : bearish_words();
    for (std::size_t h = 0; h < kHeadlinesPerDay; ++h) {
      std::string text;
      const std::size_t len = 4 + rng.index(4);
      for (std::size_t w = 0; w < len; ++w) {
        if (!text.empty()) text += " ";
        if (rng.uniform() < 0.35) text += signal[rng.index(signal.size())];
        else text += neutral_words()[rng.index(neutral_words().size())];
      }
      day.headlines.push_back(text);
    }
    corpus.days.push_back(std::move(day));
  }
  return corpus;
}

inline newstrend::LabeledCorpus make_fixture_corpus(std::size_t n_days, std::uint64_t seed) {
  using namespace newstrend;
  // Generous range, then trim to the requested day count.
  LabeledCorpus corpus = make_calendar_corpus(Date(2010, 1, 4), Date(2012, 12, 31), seed);
  corpus.days.resize(n_days);
  return corpus;
}

// Corpus in which tokens "alpha" and "beta" are context-interchangeable by
// construction: both fill the same slot of the same sentence template, so
// their embeddings must converge. Probe tokens "probe0".."probe9" live in
// their own unrelated contexts.
inline std::vector<std::vector<newstrend::Token>> make_context_corpus(std::size_t n_sentences,
                                                                      std::uint64_t seed) {
  using newstrend::Token;
  newstrend::Rng rng(seed);
  std::vector<std::string> shared_context;
  for (int i = 0; i < 8; ++i) shared_context.push_back("ctx" + std::to_string(i));

  std::vector<std::vector<Token>> docs;
  docs.reserve(n_sentences);
  for (std::size_t s = 0; s < n_sentences; ++s) {
    std::vector<Token> sentence;
    if (rng.uniform() < 0.5) {
      const std::string slot = rng.uniform() < 0.5 ? "alpha" : "beta";
      sentence = {shared_context[rng.index(8)], shared_context[rng.index(8)], slot,
                  shared_context[rng.index(8)], shared_context[rng.index(8)]};
    } else {
      const std::size_t k = rng.index(10);
      const std::string probe = "probe" + std::to_string(k);
      const std::string pc = "pctx" + std::to_string(k);
      sentence = {pc + "a", pc + "b", probe, pc + "c", pc + "d"};
    }
    docs.push_back(std::move(sentence));
  }
  return docs;
}

// Serializes a corpus back to the public dataset's CSV shape, including the
// b'...' wrappers the loader has to strip.
inline std::string fixture_headline_csv(const newstrend::LabeledCorpus& corpus) {
  std::ostringstream out;
  out << "Date,Label";
  for (std::size_t i = 1; i <= newstrend::kHeadlinesPerDay; ++i) out << ",Top" << i;
  out << "\n";
  for (std::size_t d = 0; d < corpus.days.size(); ++d) {
    const auto& day = corpus.days[d];
    out << day.date.to_string() << "," << day.label;
    for (std::size_t h = 0; h < day.headlines.size(); ++h) {
      if ((d + h) % 3 == 0) {
        out << ",\"b'" << day.headlines[h] << "'\"";
      } else {
        out << "," << day.headlines[h];
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace testutil
