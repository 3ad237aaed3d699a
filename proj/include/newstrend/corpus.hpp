#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "newstrend/date.hpp"

namespace newstrend {

inline constexpr std::size_t kHeadlinesPerDay = 25;

// One market day as ingested from the headline CSV.
struct HeadlineRecord {
  Date date;
  std::vector<std::string> headlines;  // exactly kHeadlinesPerDay after padding
  std::optional<int> label;            // optional Label column, {0,1}
};

struct PricePoint {
  Date date;
  double close = 0.0;  // > 0
};

struct LabeledDay {
  Date date;
  std::vector<std::string> headlines;
  int label = 0;  // 1 = close >= previous close
};

// Chronologically ordered, strictly increasing dates, every day labeled.
struct LabeledCorpus {
  std::vector<LabeledDay> days;

  std::size_t size() const { return days.size(); }
  bool empty() const { return days.empty(); }
  Date first_date() const { return days.front().date; }
  Date last_date() const { return days.back().date; }
  std::vector<int> labels() const;
};

// Half-open [begin, end) range of day indices into a LabeledCorpus.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
};

// One train/test pair of the walk-forward schedule. The dates are calendar
// period boundaries; the index ranges select the corpus days inside them.
struct WindowSplit {
  Date train_start;
  Date train_end;
  Date test_start;
  Date test_end;
  IndexRange train_days;
  IndexRange test_days;
  bool short_test = false;  // test span shorter than two calendar months
};

enum class PriceColumn { close, adjusted_close };

// Headline CSV: header `Date,Label,Top1,...,Top25` (Label optional). Rows are
// returned sorted by date; serialized-bytes wrappers are stripped from every
// headline. Short rows are padded with empty headlines.
std::vector<HeadlineRecord> load_headline_csv(const std::string& path);

// Price CSV: header with Date and Close / Adj Close. Only the requested close
// column is consumed; rows are returned sorted by date.
std::vector<PricePoint> load_price_csv(const std::string& path,
                                       PriceColumn column = PriceColumn::close);

// Same-or-up trend labels: label(d_i) = 1 iff close_i >= close_{i-1}. The
// first date gets no label.
std::map<Date, int> derive_labels(const std::vector<PricePoint>& prices);

struct JoinResult {
  LabeledCorpus corpus;
  std::size_t mismatches = 0;  // CSV label kept over a differing derived label
};

// Keeps only dates present in both inputs. A CSV label wins over a derived
// one; disagreements are counted, not fatal.
JoinResult join_headlines_labels(const std::vector<HeadlineRecord>& records,
                                 const std::map<Date, int>& labels);

// Label-only ingestion path: every record must already carry a CSV label.
LabeledCorpus corpus_from_records(const std::vector<HeadlineRecord>& records);

// Train = all days <= boundary, test = the rest. Never shuffles.
std::pair<LabeledCorpus, LabeledCorpus> chronological_split(const LabeledCorpus& corpus,
                                                            Date boundary);
// Train = first floor(fraction * N) days.
std::pair<LabeledCorpus, LabeledCorpus> chronological_split(const LabeledCorpus& corpus,
                                                            double fraction);

// Walk-forward schedule: train spans of `train_months` calendar months, each
// test period starting the day after its train period ends, windows advancing
// by `step_months`. The last test period may be truncated by the end of the
// corpus; windows whose test period holds no corpus day are dropped.
std::vector<WindowSplit> sliding_windows(const LabeledCorpus& corpus, int train_months = 9,
                                         int test_months = 3, int step_months = 3);

LabeledCorpus slice_corpus(const LabeledCorpus& corpus, IndexRange range);

}  // namespace newstrend
