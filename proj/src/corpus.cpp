#include "newstrend/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "newstrend/csv.hpp"
#include "newstrend/preprocess.hpp"

namespace newstrend {

namespace {

std::runtime_error row_error(std::size_t row, const std::string& what) {
  return std::runtime_error("row " + std::to_string(row + 1) + ": " + what);
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

double parse_positive_close(const std::string& text, std::size_t row) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw row_error(row, "unparseable close value '" + text + "'");
  }
  if (!(value > 0.0)) {
    throw row_error(row, "non-positive close value '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<int> LabeledCorpus::labels() const {
  std::vector<int> out;
  out.reserve(days.size());
  for (const auto& d : days) out.push_back(d.label);
  return out;
}

std::vector<HeadlineRecord> load_headline_csv(const std::string& path) {
  const auto rows = read_csv_file(path);
  if (rows.empty()) throw std::runtime_error(path + ": missing header row");

  const auto& header = rows[0];
  const int date_col = find_column(header, "Date");
  if (date_col < 0) throw std::runtime_error(path + ": header has no Date column");
  const int label_col = find_column(header, "Label");

  std::vector<int> top_cols(kHeadlinesPerDay, -1);
  std::size_t top_count = 0;
  for (const auto& name : header) {
    if (name.rfind("Top", 0) != 0 || name.size() < 4) continue;
    const bool digits = std::all_of(name.begin() + 3, name.end(),
                                    [](char c) { return c >= '0' && c <= '9'; });
    if (digits) ++top_count;
  }
  if (top_count > kHeadlinesPerDay) {
    throw std::runtime_error(path + ": more than 25 headline columns");
  }
  for (std::size_t i = 0; i < kHeadlinesPerDay; ++i) {
    top_cols[i] = find_column(header, "Top" + std::to_string(i + 1));
    if (top_cols[i] < 0) {
      throw std::runtime_error(path + ": fewer than 25 headline columns (missing Top" +
                               std::to_string(i + 1) + ")");
    }
  }

  std::vector<HeadlineRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() > header.size()) throw row_error(r, "more fields than header columns");

    auto field = [&](int col) -> std::string {
      return static_cast<std::size_t>(col) < row.size() ? row[static_cast<std::size_t>(col)]
                                                        : std::string();
    };

    HeadlineRecord rec;
    try {
      rec.date = Date::parse(field(date_col));
    } catch (const std::exception& e) {
      throw row_error(r, e.what());
    }

    if (label_col >= 0) {
      const std::string raw = field(label_col);
      if (raw == "0") rec.label = 0;
      else if (raw == "1") rec.label = 1;
      else if (!raw.empty()) throw row_error(r, "label must be 0 or 1, got '" + raw + "'");
    }

    rec.headlines.reserve(kHeadlinesPerDay);
    for (std::size_t i = 0; i < kHeadlinesPerDay; ++i) {
      rec.headlines.push_back(strip_bytestring_artifacts(field(top_cols[i])));
    }
    records.push_back(std::move(rec));
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const HeadlineRecord& a, const HeadlineRecord& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].date == records[i - 1].date) {
      throw std::runtime_error(path + ": duplicate date " + records[i].date.to_string());
    }
  }
  return records;
}

std::vector<PricePoint> load_price_csv(const std::string& path, PriceColumn column) {
  const auto rows = read_csv_file(path);
  if (rows.empty()) throw std::runtime_error(path + ": missing header row");

  const auto& header = rows[0];
  const int date_col = find_column(header, "Date");
  if (date_col < 0) throw std::runtime_error(path + ": header has no Date column");

  const int close_col = find_column(header, "Close");
  const int adj_col = find_column(header, "Adj Close");
  int value_col = -1;
  if (column == PriceColumn::adjusted_close) {
    if (adj_col < 0) throw std::runtime_error(path + ": header has no Adj Close column");
    value_col = adj_col;
  } else {
    value_col = close_col >= 0 ? close_col : adj_col;
    if (value_col < 0) throw std::runtime_error(path + ": header has no Close column");
  }

  std::vector<PricePoint> points;
  points.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (static_cast<std::size_t>(value_col) >= row.size() ||
        static_cast<std::size_t>(date_col) >= row.size()) {
      throw row_error(r, "missing Date or close field");
    }
    PricePoint p;
    try {
      p.date = Date::parse(row[static_cast<std::size_t>(date_col)]);
    } catch (const std::exception& e) {
      throw row_error(r, e.what());
    }
    p.close = parse_positive_close(row[static_cast<std::size_t>(value_col)], r);
    points.push_back(p);
  }

  std::stable_sort(points.begin(), points.end(),
                   [](const PricePoint& a, const PricePoint& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].date == points[i - 1].date) {
      throw std::runtime_error(path + ": duplicate date " + points[i].date.to_string());
    }
  }
  return points;
}

std::map<Date, int> derive_labels(const std::vector<PricePoint>& prices) {
  if (prices.size() < 2) throw std::runtime_error("insufficient history (need >= 2 price points)");
  std::map<Date, int> labels;
  for (std::size_t i = 1; i < prices.size(); ++i) {
    labels[prices[i].date] = prices[i].close >= prices[i - 1].close ? 1 : 0;
  }
  return labels;
}

JoinResult join_headlines_labels(const std::vector<HeadlineRecord>& records,
                                 const std::map<Date, int>& labels) {
  JoinResult result;
  for (const auto& rec : records) {
    const auto it = labels.find(rec.date);
    if (it == labels.end()) continue;
    LabeledDay day{rec.date, rec.headlines, it->second};
    if (rec.label.has_value()) {
      if (*rec.label != it->second) ++result.mismatches;
      day.label = *rec.label;  // CSV label wins
    }
    result.corpus.days.push_back(std::move(day));
  }
  if (result.corpus.empty()) throw std::runtime_error("empty join: no dates in both inputs");
  std::stable_sort(result.corpus.days.begin(), result.corpus.days.end(),
                   [](const LabeledDay& a, const LabeledDay& b) { return a.date < b.date; });
  return result;
}

LabeledCorpus corpus_from_records(const std::vector<HeadlineRecord>& records) {
  LabeledCorpus corpus;
  for (const auto& rec : records) {
    if (!rec.label.has_value()) {
      throw std::runtime_error("record " + rec.date.to_string() +
                               " has no label and no price series was supplied");
    }
    corpus.days.push_back(LabeledDay{rec.date, rec.headlines, *rec.label});
  }
  if (corpus.empty()) throw std::runtime_error("empty corpus");
  std::stable_sort(corpus.days.begin(), corpus.days.end(),
                   [](const LabeledDay& a, const LabeledDay& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < corpus.days.size(); ++i) {
    if (corpus.days[i].date == corpus.days[i - 1].date) {
      throw std::runtime_error("duplicate date " + corpus.days[i].date.to_string());
    }
  }
  return corpus;
}

namespace {

std::pair<LabeledCorpus, LabeledCorpus> split_at(const LabeledCorpus& corpus, std::size_t n_train) {
  if (n_train == 0) throw std::runtime_error("chronological split: empty train side");
  if (n_train >= corpus.size()) throw std::runtime_error("chronological split: empty test side");
  LabeledCorpus train, test;
  train.days.assign(corpus.days.begin(), corpus.days.begin() + static_cast<std::ptrdiff_t>(n_train));
  test.days.assign(corpus.days.begin() + static_cast<std::ptrdiff_t>(n_train), corpus.days.end());
  return {std::move(train), std::move(test)};
}

}  // namespace

std::pair<LabeledCorpus, LabeledCorpus> chronological_split(const LabeledCorpus& corpus,
                                                            Date boundary) {
  if (corpus.empty()) throw std::runtime_error("chronological split: empty corpus");
  std::size_t n_train = 0;
  while (n_train < corpus.size() && corpus.days[n_train].date <= boundary) ++n_train;
  return split_at(corpus, n_train);
}

std::pair<LabeledCorpus, LabeledCorpus> chronological_split(const LabeledCorpus& corpus,
                                                            double fraction) {
  if (corpus.empty()) throw std::runtime_error("chronological split: empty corpus");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::runtime_error("chronological split: fraction must be in (0,1)");
  }
  const auto n_train = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(corpus.size())));
  return split_at(corpus, n_train);
}

namespace {

// First index with date >= d.
std::size_t lower_index(const LabeledCorpus& corpus, Date d) {
  const auto it = std::lower_bound(corpus.days.begin(), corpus.days.end(), d,
                                   [](const LabeledDay& day, Date x) { return day.date < x; });
  return static_cast<std::size_t>(it - corpus.days.begin());
}

// First index with date > d.
std::size_t upper_index(const LabeledCorpus& corpus, Date d) {
  const auto it = std::upper_bound(corpus.days.begin(), corpus.days.end(), d,
                                   [](Date x, const LabeledDay& day) { return x < day.date; });
  return static_cast<std::size_t>(it - corpus.days.begin());
}

}  // namespace

std::vector<WindowSplit> sliding_windows(const LabeledCorpus& corpus, int train_months,
                                         int test_months, int step_months) {
  if (train_months < 1 || test_months < 1 || step_months < 1) {
    throw std::runtime_error("window months must be positive");
  }
  if (corpus.empty()) throw std::runtime_error("empty corpus");
  const Date first = corpus.first_date();
  const Date last = corpus.last_date();
  if (first.add_months(train_months) > last) {
    throw std::runtime_error("corpus shorter than one train period (" +
                             std::to_string(train_months) + " months)");
  }

  std::vector<WindowSplit> windows;
  for (Date train_start = first;; train_start = train_start.add_months(step_months)) {
    const Date test_start = train_start.add_months(train_months);
    if (test_start > last) break;

    WindowSplit w;
    w.train_start = train_start;
    w.train_end = test_start.add_days(-1);
    w.test_start = test_start;
    const Date nominal_test_end = test_start.add_months(test_months).add_days(-1);
    w.test_end = std::min(nominal_test_end, last);
    w.train_days = IndexRange{lower_index(corpus, w.train_start), upper_index(corpus, w.train_end)};
    w.test_days = IndexRange{lower_index(corpus, w.test_start), upper_index(corpus, w.test_end)};
    w.short_test = w.test_end < test_start.add_months(2).add_days(-1);
    if (w.test_days.empty()) continue;
    windows.push_back(w);
  }
  if (windows.empty()) throw std::runtime_error("no usable windows (all test periods empty)");
  return windows;
}

LabeledCorpus slice_corpus(const LabeledCorpus& corpus, IndexRange range) {
  LabeledCorpus out;
  out.days.assign(corpus.days.begin() + static_cast<std::ptrdiff_t>(range.begin),
                  corpus.days.begin() + static_cast<std::ptrdiff_t>(range.end));
  return out;
}

}  // namespace newstrend
