#include "newstrend/corpus.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace newstrend;
using testutil::TempDir;
using testutil::write_file;

namespace {

std::string header_row() {
  std::string h = "Date,Label";
  for (std::size_t i = 1; i <= kHeadlinesPerDay; ++i) h += ",Top" + std::to_string(i);
  return h + "\n";
}

std::string row_with_fill(const std::string& date, const std::string& label,
                          const std::string& first, std::size_t count = kHeadlinesPerDay) {
  std::string row = date + "," + label + "," + first;
  for (std::size_t i = 1; i < count; ++i) row += ",h" + std::to_string(i);
  return row + "\n";
}

LabeledCorpus tiny_corpus(std::size_t n, Date start = Date(2010, 1, 1)) {
  LabeledCorpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledDay day;
    day.date = start.add_days(static_cast<int>(i));
    day.headlines.assign(kHeadlinesPerDay, "stocks rise");
    day.label = static_cast<int>(i % 2);
    corpus.days.push_back(std::move(day));
  }
  return corpus;
}

}  // namespace

TEST_CASE("date parsing and arithmetic") {
  const Date d = Date::parse("2008-08-08");
  CHECK(d.year() == 2008);
  CHECK(d.month() == 8);
  CHECK(d.day() == 8);
  CHECK(d.to_string() == "2008-08-08");
  CHECK_THROWS(Date::parse("2008-8-8"));
  CHECK_THROWS(Date::parse("2008/08/08"));
  CHECK_THROWS(Date::parse("2015-02-29"));
  CHECK(Date(2010, 1, 31).add_months(1) == Date(2010, 2, 28));
  CHECK(Date(2010, 1, 1).add_months(9) == Date(2010, 10, 1));
  CHECK(Date(2010, 12, 31).add_days(1) == Date(2011, 1, 1));
  CHECK(Date(2010, 3, 1).add_days(-1) == Date(2010, 2, 28));
}

TEST_CASE("load_headline_csv strips byte-string wrappers and sorts rows") {
  TempDir dir("headlines");
  std::string csv = header_row();
  csv += row_with_fill("2008-08-11", "1", "plain headline");
  csv += row_with_fill("2008-08-08", "0", "\"b'Georgia downs two Russian warplanes'\"");
  write_file(dir.file("h.csv"), csv);

  const auto records = load_headline_csv(dir.file("h.csv"));
  REQUIRE(records.size() == 2);
  CHECK(records[0].date == Date(2008, 8, 8));  // sorted ascending
  CHECK(records[0].label == 0);
  CHECK(records[0].headlines[0] == "Georgia downs two Russian warplanes");
  CHECK(records[0].headlines.size() == kHeadlinesPerDay);
  CHECK(records[1].date == Date(2008, 8, 11));
}

TEST_CASE("load_headline_csv: header only yields empty list") {
  TempDir dir("headlines");
  write_file(dir.file("h.csv"), header_row());
  CHECK(load_headline_csv(dir.file("h.csv")).empty());
}

TEST_CASE("load_headline_csv: duplicate dates rejected") {
  TempDir dir("headlines");
  std::string csv = header_row();
  csv += row_with_fill("2008-08-08", "0", "a");
  csv += row_with_fill("2008-08-08", "1", "b");
  write_file(dir.file("h.csv"), csv);
  CHECK_THROWS_WITH_AS(load_headline_csv(dir.file("h.csv")),
                       doctest::Contains("duplicate date"), std::runtime_error);
}

TEST_CASE("load_headline_csv: malformed date names the row") {
  TempDir dir("headlines");
  std::string csv = header_row();
  csv += row_with_fill("2008-08-08", "0", "a");
  csv += row_with_fill("08/09/2008", "1", "b");
  write_file(dir.file("h.csv"), csv);
  CHECK_THROWS_WITH_AS(load_headline_csv(dir.file("h.csv")), doctest::Contains("row 3"),
                       std::runtime_error);
}

TEST_CASE("load_headline_csv: short rows padded with empty headlines") {
  TempDir dir("headlines");
  std::string csv = header_row();
  csv += "2008-08-08,0,only one headline\n";
  write_file(dir.file("h.csv"), csv);
  const auto records = load_headline_csv(dir.file("h.csv"));
  REQUIRE(records.size() == 1);
  CHECK(records[0].headlines.size() == kHeadlinesPerDay);
  CHECK(records[0].headlines[0] == "only one headline");
  CHECK(records[0].headlines[1].empty());
  CHECK(records[0].headlines[24].empty());
}

TEST_CASE("load_headline_csv: more than 25 headline columns is a hard error") {
  TempDir dir("headlines");
  std::string h = "Date,Label";
  for (int i = 1; i <= 26; ++i) h += ",Top" + std::to_string(i);
  write_file(dir.file("h.csv"), h + "\n");
  CHECK_THROWS_WITH_AS(load_headline_csv(dir.file("h.csv")),
                       doctest::Contains("more than 25"), std::runtime_error);
}

TEST_CASE("load_headline_csv: fewer than 25 headline columns is a hard error") {
  TempDir dir("headlines");
  std::string h = "Date,Label";
  for (int i = 1; i <= 20; ++i) h += ",Top" + std::to_string(i);
  write_file(dir.file("h.csv"), h + "\n");
  CHECK_THROWS_WITH_AS(load_headline_csv(dir.file("h.csv")),
                       doctest::Contains("fewer than 25"), std::runtime_error);
}

TEST_CASE("load_headline_csv: missing Label column leaves labels empty") {
  TempDir dir("headlines");
  std::string h = "Date";
  for (std::size_t i = 1; i <= kHeadlinesPerDay; ++i) h += ",Top" + std::to_string(i);
  std::string row = "2008-08-08,first";
  for (std::size_t i = 1; i < kHeadlinesPerDay; ++i) row += ",x";
  write_file(dir.file("h.csv"), h + "\n" + row + "\n");
  const auto records = load_headline_csv(dir.file("h.csv"));
  REQUIRE(records.size() == 1);
  CHECK(!records[0].label.has_value());
}

TEST_CASE("load_headline_csv handles quoting, CRLF and a BOM") {
  TempDir dir("headlines");
  std::string csv = "\xef\xbb\xbf" + header_row();
  csv.pop_back();  // swap the LF for CRLF rows below
  csv += "\r\n";
  std::string row = "2008-08-08,0,\"with, comma\",\"line\nbreak\",\"quote \"\"q\"\" end\"";
  for (std::size_t i = 3; i < kHeadlinesPerDay; ++i) row += ",h";
  csv += row + "\r\n";
  write_file(dir.file("h.csv"), csv);

  const auto records = load_headline_csv(dir.file("h.csv"));
  REQUIRE(records.size() == 1);
  CHECK(records[0].headlines[0] == "with, comma");
  CHECK(records[0].headlines[1] == "line\nbreak");
  CHECK(records[0].headlines[2] == "quote \"q\" end");
}

TEST_CASE("load_price_csv falls back to Adj Close when Close is absent") {
  TempDir dir("prices");
  write_file(dir.file("p.csv"), "Date,Adj Close\n2010-01-04,99.25\n2010-01-05,101.0\n");
  const auto points = load_price_csv(dir.file("p.csv"), PriceColumn::close);
  REQUIRE(points.size() == 2);
  CHECK(points[0].close == doctest::Approx(99.25));

  SUBCASE("adjusted close is required when selected") {
    write_file(dir.file("q.csv"), "Date,Close\n2010-01-04,99.25\n");
    CHECK_THROWS_WITH_AS(load_price_csv(dir.file("q.csv"), PriceColumn::adjusted_close),
                         doctest::Contains("Adj Close"), std::runtime_error);
  }
}

TEST_CASE("load_price_csv sorts by date and validates closes") {
  TempDir dir("prices");
  write_file(dir.file("p.csv"),
             "Date,Open,High,Low,Close,Volume,Adj Close\n"
             "2010-01-05,1,1,1,101.5,10,100.5\n"
             "2010-01-04,1,1,1,100.0,10,99.0\n");
  const auto points = load_price_csv(dir.file("p.csv"));
  REQUIRE(points.size() == 2);
  CHECK(points[0].date == Date(2010, 1, 4));
  CHECK(points[0].close == doctest::Approx(100.0));
  CHECK(points[1].close == doctest::Approx(101.5));

  SUBCASE("adjusted close selection") {
    const auto adj = load_price_csv(dir.file("p.csv"), PriceColumn::adjusted_close);
    CHECK(adj[0].close == doctest::Approx(99.0));
    CHECK(adj[1].close == doctest::Approx(100.5));
  }
}

TEST_CASE("load_price_csv: adjusted close config on a 3-row fixture") {
  TempDir dir("prices");
  write_file(dir.file("p.csv"),
             "Date,Close,Adj Close\n"
             "2010-01-04,100.0,100.0\n"
             "2010-01-05,110.0,105.0\n"
             "2010-01-06,120.0,120.0\n");
  const auto adj = load_price_csv(dir.file("p.csv"), PriceColumn::adjusted_close);
  REQUIRE(adj.size() == 3);
  CHECK(adj[1].close == doctest::Approx(105.0));
}

TEST_CASE("load_price_csv: non-positive close rejected") {
  TempDir dir("prices");
  write_file(dir.file("p.csv"), "Date,Close\n2010-01-04,-3\n");
  CHECK_THROWS_WITH_AS(load_price_csv(dir.file("p.csv")), doctest::Contains("non-positive"),
                       std::runtime_error);
}

TEST_CASE("load_price_csv: unparseable close names the row") {
  TempDir dir("prices");
  write_file(dir.file("p.csv"), "Date,Close\n2010-01-04,100\n2010-01-05,abc\n");
  CHECK_THROWS_WITH_AS(load_price_csv(dir.file("p.csv")), doctest::Contains("row 3"),
                       std::runtime_error);
}

TEST_CASE("derive_labels applies the >= rule") {
  std::vector<PricePoint> prices = {{Date(2010, 1, 4), 100.0},
                                    {Date(2010, 1, 5), 101.0},
                                    {Date(2010, 1, 6), 101.0},
                                    {Date(2010, 1, 7), 99.0}};
  const auto labels = derive_labels(prices);
  REQUIRE(labels.size() == 3);  // output size = input size - 1
  CHECK(labels.at(Date(2010, 1, 5)) == 1);
  CHECK(labels.at(Date(2010, 1, 6)) == 1);  // flat counts as up
  CHECK(labels.at(Date(2010, 1, 7)) == 0);
  CHECK(labels.count(Date(2010, 1, 4)) == 0);
}

TEST_CASE("derive_labels: flat two-point series labels 1") {
  std::vector<PricePoint> prices = {{Date(2010, 1, 4), 50.0}, {Date(2010, 1, 5), 50.0}};
  CHECK(derive_labels(prices).at(Date(2010, 1, 5)) == 1);
}

TEST_CASE("derive_labels: single point is insufficient history") {
  std::vector<PricePoint> prices = {{Date(2010, 1, 4), 50.0}};
  CHECK_THROWS_WITH_AS(derive_labels(prices), doctest::Contains("insufficient history"),
                       std::runtime_error);
}

TEST_CASE("join keeps the intersection and prefers CSV labels") {
  std::vector<HeadlineRecord> records(3);
  records[0] = {Date(2010, 1, 4), std::vector<std::string>(kHeadlinesPerDay, "x"), std::nullopt};
  records[1] = {Date(2010, 1, 5), std::vector<std::string>(kHeadlinesPerDay, "x"), 1};
  records[2] = {Date(2010, 1, 6), std::vector<std::string>(kHeadlinesPerDay, "x"), std::nullopt};

  std::map<Date, int> labels = {{Date(2010, 1, 4), 0}, {Date(2010, 1, 5), 0}};
  const JoinResult joined = join_headlines_labels(records, labels);
  CHECK(joined.corpus.size() == 2);  // 2010-01-06 has no derived label
  CHECK(joined.corpus.days[0].label == 0);
  CHECK(joined.corpus.days[1].label == 1);  // CSV label wins
  CHECK(joined.mismatches == 1);
}

TEST_CASE("join with disjoint dates is an empty join") {
  std::vector<HeadlineRecord> records(1);
  records[0] = {Date(2010, 1, 4), std::vector<std::string>(kHeadlinesPerDay, "x"), std::nullopt};
  std::map<Date, int> labels = {{Date(2011, 1, 4), 1}};
  CHECK_THROWS_WITH_AS(join_headlines_labels(records, labels), doctest::Contains("empty join"),
                       std::runtime_error);
}

TEST_CASE("corpus_from_records requires labels everywhere") {
  std::vector<HeadlineRecord> records(2);
  records[0] = {Date(2010, 1, 4), std::vector<std::string>(kHeadlinesPerDay, "x"), 1};
  records[1] = {Date(2010, 1, 5), std::vector<std::string>(kHeadlinesPerDay, "x"), std::nullopt};
  CHECK_THROWS(corpus_from_records(records));
  records[1].label = 0;
  CHECK(corpus_from_records(records).size() == 2);
}

TEST_CASE("chronological_split by fraction keeps order and total count") {
  const LabeledCorpus corpus = tiny_corpus(10);
  const auto [train, test] = chronological_split(corpus, 0.8);
  CHECK(train.size() == 8);
  CHECK(test.size() == 2);
  CHECK(train.size() + test.size() == corpus.size());
  CHECK(train.last_date() < test.first_date());
}

TEST_CASE("chronological_split by boundary") {
  const LabeledCorpus corpus = tiny_corpus(10);
  const auto [train, test] = chronological_split(corpus, Date(2010, 1, 5));
  CHECK(train.size() == 5);
  CHECK(test.size() == 5);
  CHECK(train.last_date() == Date(2010, 1, 5));

  SUBCASE("boundary before the first date is an empty train side") {
    CHECK_THROWS_WITH_AS(chronological_split(corpus, Date(2009, 12, 31)),
                         doctest::Contains("empty train"), std::runtime_error);
  }
  SUBCASE("boundary at or past the last date is an empty test side") {
    CHECK_THROWS_WITH_AS(chronological_split(corpus, Date(2010, 1, 10)),
                         doctest::Contains("empty test"), std::runtime_error);
  }
}

TEST_CASE("chronological_split: multi-year boundary isolates the final year") {
  // 2008..2015 corpus split at the end of 2014: the test side is 2015 only.
  LabeledCorpus corpus;
  for (int year = 2008; year <= 2015; ++year) {
    for (unsigned month = 1; month <= 12; month += 3) {
      LabeledDay day;
      day.date = Date(year, month, 15);
      day.headlines.assign(kHeadlinesPerDay, "x");
      day.label = year % 2;
      corpus.days.push_back(day);
    }
  }
  const auto [train, test] = chronological_split(corpus, Date(2014, 12, 31));
  CHECK(train.last_date().year() == 2014);
  CHECK(test.first_date().year() == 2015);
  CHECK(test.size() == 4);
  CHECK(train.size() + test.size() == corpus.size());
}

TEST_CASE("sliding_windows: hand-computed 18-month schedule") {
  const LabeledCorpus corpus =
      testutil::make_calendar_corpus(Date(2010, 1, 1), Date(2011, 6, 30), 7);
  REQUIRE(corpus.first_date() == Date(2010, 1, 1));
  REQUIRE(corpus.last_date() == Date(2011, 6, 30));

  const auto windows = sliding_windows(corpus);
  REQUIRE(windows.size() == 3);

  CHECK(windows[0].train_start == Date(2010, 1, 1));
  CHECK(windows[0].train_end == Date(2010, 9, 30));
  CHECK(windows[0].test_start == Date(2010, 10, 1));
  CHECK(windows[0].test_end == Date(2010, 12, 31));

  CHECK(windows[1].train_start == Date(2010, 4, 1));
  CHECK(windows[1].train_end == Date(2010, 12, 31));
  CHECK(windows[1].test_start == Date(2011, 1, 1));
  CHECK(windows[1].test_end == Date(2011, 3, 31));

  CHECK(windows[2].train_start == Date(2010, 7, 1));
  CHECK(windows[2].train_end == Date(2011, 3, 31));
  CHECK(windows[2].test_start == Date(2011, 4, 1));
  CHECK(windows[2].test_end == Date(2011, 6, 30));

  for (const auto& w : windows) {
    CHECK(w.train_end < w.test_start);
    CHECK(w.train_start.add_months(9).add_days(-1) == w.train_end);  // 9 calendar months
    CHECK(!w.test_days.empty());
    CHECK(!w.short_test);
  }

  SUBCASE("test index ranges tile the corpus contiguously when step == test span") {
    std::size_t expected_begin = windows[0].test_days.begin;
    for (const auto& w : windows) {
      CHECK(w.test_days.begin == expected_begin);
      expected_begin = w.test_days.end;
    }
    CHECK(expected_begin == corpus.size());
  }
}

TEST_CASE("sliding_windows: exactly nine months has no usable window") {
  const LabeledCorpus corpus =
      testutil::make_calendar_corpus(Date(2010, 1, 1), Date(2010, 9, 30), 7);
  CHECK_THROWS_WITH_AS(sliding_windows(corpus), doctest::Contains("shorter than one train"),
                       std::runtime_error);
}

TEST_CASE("sliding_windows: step of twelve months on an 18-month corpus") {
  const LabeledCorpus corpus =
      testutil::make_calendar_corpus(Date(2010, 1, 1), Date(2011, 6, 30), 7);
  const auto windows = sliding_windows(corpus, 9, 3, 12);
  REQUIRE(windows.size() == 1);
  CHECK(windows[0].train_start == Date(2010, 1, 1));
  CHECK(windows[0].test_start == Date(2010, 10, 1));
}

TEST_CASE("sliding_windows: truncated final test period is flagged short") {
  const LabeledCorpus corpus =
      testutil::make_calendar_corpus(Date(2010, 1, 1), Date(2010, 11, 10), 7);
  const auto windows = sliding_windows(corpus);
  REQUIRE(windows.size() == 1);
  CHECK(windows[0].test_end == Date(2010, 11, 10));
  CHECK(windows[0].short_test);
}

TEST_CASE("chronological_split preserves the day count for any fraction") {
  const LabeledCorpus corpus = tiny_corpus(37);
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const double fraction = 0.05 + 0.9 * rng.uniform();
    const auto [train, test] = chronological_split(corpus, fraction);
    CHECK(train.size() + test.size() == corpus.size());
    CHECK(train.last_date() < test.first_date());
  }
}

TEST_CASE("window index ranges never overlap train into test") {
  const LabeledCorpus corpus =
      testutil::make_calendar_corpus(Date(2009, 3, 15), Date(2011, 11, 2), 23);
  for (int step : {1, 2, 3, 6}) {
    for (const auto& w : sliding_windows(corpus, 9, 3, step)) {
      CHECK(w.train_days.end <= w.test_days.begin);
      CHECK(corpus.days[w.train_days.end - 1].date < corpus.days[w.test_days.begin].date);
      CHECK(corpus.days[w.test_days.begin].date >= w.test_start);
      CHECK(corpus.days[w.test_days.end - 1].date <= w.test_end);
    }
  }
}

TEST_CASE("slice_corpus extracts window ranges") {
  const LabeledCorpus corpus = tiny_corpus(10);
  const LabeledCorpus sliced = slice_corpus(corpus, IndexRange{2, 5});
  CHECK(sliced.size() == 3);
  CHECK(sliced.first_date() == Date(2010, 1, 3));
}
