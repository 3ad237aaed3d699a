#include "newstrend/preprocess.hpp"

#include <fstream>
#include <stdexcept>

namespace newstrend {

namespace {

bool is_alnum_ascii(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char to_lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lower_copy(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = to_lower_ascii(c);
  return out;
}

}  // namespace

std::string strip_bytestring_artifacts(const std::string& text) {
  if (text.size() < 3 || text[0] != 'b') return text;
  const char quote = text[1];
  if ((quote != '\'' && quote != '"') || text.back() != quote) return text;

  const std::string body = text.substr(2, text.size() - 3);
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size() &&
        (body[i + 1] == '\'' || body[i + 1] == '"' || body[i + 1] == '\\')) {
      out.push_back(body[i + 1]);
      ++i;
    } else {
      out.push_back(body[i]);
    }
  }
  return out;
}

std::vector<Token> tokenize(const std::string& text, bool lowercase) {
  std::vector<Token> tokens;
  std::string current;
  for (char c : text) {
    if (is_alnum_ascii(c)) {
      current.push_back(lowercase ? to_lower_ascii(c) : c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<CasedToken> tokenize_with_case(const std::string& text, bool lowercase) {
  std::vector<CasedToken> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    CasedToken t;
    t.original = current;
    t.token = lowercase ? lower_copy(current) : current;
    tokens.push_back(std::move(t));
    current.clear();
  };
  for (char c : text) {
    if (is_alnum_ascii(c)) current.push_back(c);
    else flush();
  }
  flush();
  return tokens;
}

std::vector<Token> remove_stopwords(const std::vector<Token>& tokens,
                                    const std::unordered_set<std::string>& stopwords) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stopwords.contains(t)) out.push_back(t);
  }
  return out;
}

std::vector<Token> filter_named_entities(const std::vector<CasedToken>& tokens,
                                         const PreprocessConfig& config) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    const bool capitalized = !t.original.empty() && t.original[0] >= 'A' && t.original[0] <= 'Z';
    const bool entity =
        (capitalized && i > 0) || config.gazetteer.contains(lower_copy(t.token));
    const bool keep = config.ner_mode == NerMode::keep_only ? entity : !entity;
    if (keep) out.push_back(t.token);
  }
  return out;
}

std::vector<Token> preprocess_headlines(const std::vector<std::string>& headlines,
                                        const PreprocessConfig& config) {
  std::vector<Token> day_tokens;
  for (const auto& headline : headlines) {
    const std::string stripped = strip_bytestring_artifacts(headline);
    std::vector<Token> tokens;
    if (config.ner_mode == NerMode::off) {
      tokens = tokenize(stripped, config.lowercase);
    } else {
      tokens = filter_named_entities(tokenize_with_case(stripped, config.lowercase), config);
    }
    if (config.remove_stopwords) tokens = remove_stopwords(tokens, config.stopwords);
    day_tokens.insert(day_tokens.end(), tokens.begin(), tokens.end());
  }
  return day_tokens;
}

std::vector<Token> preprocess_day(const HeadlineRecord& record, const PreprocessConfig& config) {
  return preprocess_headlines(record.headlines, config);
}

std::vector<Token> preprocess_day(const LabeledDay& day, const PreprocessConfig& config) {
  return preprocess_headlines(day.headlines, config);
}

const std::unordered_set<std::string>& default_stopword_list() {
  static const std::unordered_set<std::string> words = {
      "i",          "me",      "my",      "myself",  "we",        "our",     "ours",
      "ourselves",  "you",     "your",    "yours",   "yourself",  "yourselves",
      "he",         "him",     "his",     "himself", "she",       "her",     "hers",
      "herself",    "it",      "its",     "itself",  "they",      "them",    "their",
      "theirs",     "themselves",         "what",    "which",     "who",     "whom",
      "this",       "that",    "these",   "those",   "am",        "is",      "are",
      "was",        "were",    "be",      "been",    "being",     "have",    "has",
      "had",        "having",  "do",      "does",    "did",       "doing",   "a",
      "an",         "the",     "and",     "but",     "if",        "or",      "because",
      "as",         "until",   "while",   "of",      "at",        "by",      "for",
      "with",       "about",   "against", "between", "into",      "through", "during",
      "before",     "after",   "above",   "below",   "to",        "from",    "up",
      "down",       "in",      "out",     "on",      "off",       "over",    "under",
      "again",      "further", "then",    "once",    "here",      "there",   "when",
      "where",      "why",     "how",     "all",     "any",       "both",    "each",
      "few",        "more",    "most",    "other",   "some",      "such",    "no",
      "nor",        "not",     "only",    "own",     "same",      "so",      "than",
      "too",        "very",    "s",       "t",       "can",       "will",    "just",
      "don",        "should",  "now"};
  return words;
}

std::unordered_set<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open word list: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    words.insert(line.substr(first, last - first + 1));
  }
  return words;
}

}  // namespace newstrend
