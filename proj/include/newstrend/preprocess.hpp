#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "newstrend/corpus.hpp"

namespace newstrend {

// Lowercase [a-z0-9]+ when lowercasing is on (the default).
using Token = std::string;

enum class NerMode { off, remove, keep_only };

struct PreprocessConfig {
  bool lowercase = true;
  bool remove_stopwords = true;
  std::unordered_set<std::string> stopwords;  // lowercase entries
  NerMode ner_mode = NerMode::off;
  std::unordered_set<std::string> gazetteer;  // lowercase entries
};

// Undoes the serialized-bytes wrapper found in the public dataset rows:
// b'...' or b"..." with the matching closing quote. Escaped quotes and
// backslashes inside the wrapper are unescaped. Anything else is returned
// unchanged.
std::string strip_bytestring_artifacts(const std::string& text);

// Splits on every maximal run of non-alphanumeric characters; empty fragments
// are dropped. Digits are kept.
std::vector<Token> tokenize(const std::string& text, bool lowercase = true);

struct CasedToken {
  std::string original;  // as written in the headline
  Token token;           // case per config
};
std::vector<CasedToken> tokenize_with_case(const std::string& text, bool lowercase = true);

// Order-preserving filter; a token is dropped iff its text is in the list.
std::vector<Token> remove_stopwords(const std::vector<Token>& tokens,
                                    const std::unordered_set<std::string>& stopwords);

// Entity heuristic: a token is an entity when its original form is capitalized
// at a non-sentence-initial position (index > 0), or its lowercase form is in
// the gazetteer. mode=remove drops entities, mode=keep_only keeps only them.
std::vector<Token> filter_named_entities(const std::vector<CasedToken>& tokens,
                                         const PreprocessConfig& config);

// Full per-day pipeline over all 25 headlines, in headline order:
// strip -> tokenize -> NER filter -> stopword filter.
std::vector<Token> preprocess_headlines(const std::vector<std::string>& headlines,
                                        const PreprocessConfig& config);
std::vector<Token> preprocess_day(const HeadlineRecord& record, const PreprocessConfig& config);
std::vector<Token> preprocess_day(const LabeledDay& day, const PreprocessConfig& config);

// The embedded default list: 127 common English function words. Also shipped
// as resources/stopwords_en.txt; a config may override it with any word file.
const std::unordered_set<std::string>& default_stopword_list();

// Word-list file: one lowercase word per line, '#' comments, blank lines ok.
std::unordered_set<std::string> load_wordlist(const std::string& path);

}  // namespace newstrend
