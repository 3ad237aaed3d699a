#include "newstrend/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>

#include "newstrend/csv.hpp"

namespace newstrend {

Vocabulary build_vocabulary(const std::vector<std::vector<Token>>& train_docs, std::int64_t min_df,
                            std::size_t max_size) {
  if (train_docs.empty()) throw std::runtime_error("build_vocabulary: no training documents");

  struct Stats {
    std::int64_t doc_freq = 0;
    std::int64_t corpus_count = 0;
  };
  std::unordered_map<std::string, Stats> stats;
  std::unordered_map<std::string, std::size_t> seen_in_doc;
  for (std::size_t d = 0; d < train_docs.size(); ++d) {
    for (const auto& tok : train_docs[d]) {
      auto& s = stats[tok];
      ++s.corpus_count;
      auto [it, inserted] = seen_in_doc.try_emplace(tok, d);
      if (inserted || it->second != d) {
        it->second = d;
        ++s.doc_freq;
      }
    }
  }

  std::vector<std::pair<std::string, Stats>> kept;
  kept.reserve(stats.size());
  for (auto& [term, s] : stats) {
    if (s.doc_freq >= min_df) kept.emplace_back(term, s);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second.corpus_count != b.second.corpus_count) {
      return a.second.corpus_count > b.second.corpus_count;
    }
    return a.first < b.first;
  });
  if (kept.size() > max_size) kept.resize(max_size);
  if (kept.empty()) throw std::runtime_error("build_vocabulary: vocabulary empty after pruning");

  Vocabulary vocab;
  vocab.n_train_docs = static_cast<std::int64_t>(train_docs.size());
  vocab.terms.reserve(kept.size());
  vocab.doc_freq.reserve(kept.size());
  vocab.corpus_count.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    vocab.terms.push_back(kept[i].first);
    vocab.doc_freq.push_back(kept[i].second.doc_freq);
    vocab.corpus_count.push_back(kept[i].second.corpus_count);
    vocab.index.emplace(kept[i].first, i);
  }
  return vocab;
}

std::vector<Token> extract_ngrams(const std::vector<Token>& tokens, const NgramConfig& config) {
  if (config.n < 1 || config.n > kMaxNgramOrder) {
    throw std::runtime_error("ngram order must be between 1 and " +
                             std::to_string(kMaxNgramOrder));
  }
  std::vector<Token> grams;
  if (config.combine_with_unigrams) grams = tokens;
  else if (config.n == 1) return tokens;

  const auto n = static_cast<std::size_t>(config.n);
  if (tokens.size() >= n) {
    grams.reserve(grams.size() + tokens.size() - n + 1);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t j = 1; j < n; ++j) {
        gram.push_back('_');
        gram += tokens[i + j];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

FeatureVector bow_vector(const std::vector<Token>& tokens, const Vocabulary& vocab) {
  if (vocab.size() == 0) throw std::runtime_error("bow_vector: empty vocabulary");
  FeatureVector v(vocab.size(), 0.0);
  for (const auto& tok : tokens) {
    if (const auto idx = vocab.find(tok)) v[*idx] += 1.0;
  }
  return v;
}

FeatureVector tfidf_paper_vector(const std::vector<Token>& tokens, const Vocabulary& vocab) {
  FeatureVector v = bow_vector(tokens, vocab);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    v[i] = std::min(1.0, v[i] / static_cast<double>(vocab.corpus_count[i]));
  }
  return v;
}

FeatureVector tfidf_standard_vector(const std::vector<Token>& tokens, const Vocabulary& vocab) {
  FeatureVector v = bow_vector(tokens, vocab);
  const double n_docs = static_cast<double>(vocab.n_train_docs);
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    const double idf = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(vocab.doc_freq[i])));
    v[i] = v[i] * idf + v[i];
    norm_sq += v[i] * v[i];
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
  }
  return v;
}

FeatureVector aggregate_embeddings(const std::vector<Token>& tokens, const EmbeddingMatrix& emb,
                                   const Vocabulary& vocab, AggregateMode mode) {
  FeatureVector v(emb.dimension, 0.0);
  std::size_t matched = 0;
  for (const auto& tok : tokens) {
    const auto idx = vocab.find(tok);
    if (!idx) continue;
    const auto& row = emb.input_vectors[*idx];
    for (std::size_t j = 0; j < emb.dimension; ++j) v[j] += row[j];
    ++matched;
  }
  if (mode == AggregateMode::mean && matched > 0) {
    const double inv = 1.0 / static_cast<double>(matched);
    for (double& x : v) x *= inv;
  }
  return v;
}

SentimentLexicon load_lexicon_csv(const std::string& path) {
  const auto rows = read_csv_file(path);
  if (rows.empty()) throw std::runtime_error(path + ": missing header row");
  const auto& header = rows[0];
  if (header.size() < 3 || header[0] != "word" || header[1] != "polarity" ||
      header[2] != "subjectivity") {
    throw std::runtime_error(path + ": expected header word,polarity,subjectivity");
  }
  SentimentLexicon lexicon;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 3) throw std::runtime_error(path + ": row " + std::to_string(r + 1) + " too short");
    char* end = nullptr;
    const double polarity = std::strtod(row[1].c_str(), &end);
    if (end == row[1].c_str() || *end != '\0' || polarity < -1.0 || polarity > 1.0) {
      throw std::runtime_error(path + ": row " + std::to_string(r + 1) + " bad polarity");
    }
    const double subjectivity = std::strtod(row[2].c_str(), &end);
    if (end == row[2].c_str() || *end != '\0' || subjectivity < 0.0 || subjectivity > 1.0) {
      throw std::runtime_error(path + ": row " + std::to_string(r + 1) + " bad subjectivity");
    }
    lexicon.entries[row[0]] = {polarity, subjectivity};
  }
  return lexicon;
}

FeatureVector sentiment_features(const std::vector<Token>& tokens,
                                 const SentimentLexicon& lexicon) {
  double polarity = 0.0;
  double subjectivity = 0.0;
  std::size_t matched = 0;
  for (const auto& tok : tokens) {
    const auto it = lexicon.entries.find(tok);
    if (it == lexicon.entries.end()) continue;
    polarity += it->second.first;
    subjectivity += it->second.second;
    ++matched;
  }
  if (matched == 0) return {0.0, 0.0};
  const double inv = 1.0 / static_cast<double>(matched);
  return {polarity * inv, subjectivity * inv};
}

void export_embeddings(const EmbeddingMatrix& emb, const Vocabulary& vocab, std::ostream& out) {
  char buf[32];
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << vocab.terms[i];
    for (std::size_t j = 0; j < emb.dimension; ++j) {
      std::snprintf(buf, sizeof(buf), " %.6g", emb.input_vectors[i][j]);
      out << buf;
    }
    out << '\n';
  }
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::runtime_error("cosine_similarity: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string to_string(BaseVectorizer base) {
  switch (base) {
    case BaseVectorizer::bow: return "bow";
    case BaseVectorizer::tfidf_paper: return "tfidf_paper";
    case BaseVectorizer::tfidf_standard: return "tfidf_standard";
    case BaseVectorizer::w2v_sum: return "w2v_sum";
    case BaseVectorizer::w2v_mean: return "w2v_mean";
  }
  return "?";
}

std::optional<BaseVectorizer> base_vectorizer_from_string(const std::string& name) {
  if (name == "bow") return BaseVectorizer::bow;
  if (name == "tfidf_paper") return BaseVectorizer::tfidf_paper;
  if (name == "tfidf_standard") return BaseVectorizer::tfidf_standard;
  if (name == "w2v_sum") return BaseVectorizer::w2v_sum;
  if (name == "w2v_mean") return BaseVectorizer::w2v_mean;
  return std::nullopt;
}

std::string FeatureSpec::name() const {
  std::string out = to_string(base);
  if (ngram.n > 1) {
    out += "+" + std::to_string(ngram.n) + "gram";
    if (ngram.combine_with_unigrams) out += "u";
  }
  if (sentiment) out += "+sent";
  return out;
}

std::size_t FeaturePipeline::dimension() const {
  std::size_t dim = 0;
  switch (base) {
    case BaseVectorizer::bow:
    case BaseVectorizer::tfidf_paper:
    case BaseVectorizer::tfidf_standard:
      dim = vocab.size();
      break;
    case BaseVectorizer::w2v_sum:
    case BaseVectorizer::w2v_mean:
      dim = embeddings ? embeddings->dimension : 0;
      break;
  }
  return dim + (sentiment ? 2 : 0);
}

FeaturePipeline fit_feature_pipeline(const FeatureSpec& spec,
                                     const std::vector<std::vector<Token>>& train_docs,
                                     const std::optional<SentimentLexicon>& lexicon) {
  FeaturePipeline pipeline;
  pipeline.base = spec.base;
  pipeline.ngram = spec.ngram;
  pipeline.sentiment = spec.sentiment;

  std::vector<std::vector<Token>> gram_docs;
  gram_docs.reserve(train_docs.size());
  for (const auto& doc : train_docs) gram_docs.push_back(extract_ngrams(doc, spec.ngram));

  pipeline.vocab = build_vocabulary(gram_docs, spec.min_df, spec.max_vocab);
  if (spec.base == BaseVectorizer::w2v_sum || spec.base == BaseVectorizer::w2v_mean) {
    pipeline.embeddings = train_word2vec(gram_docs, pipeline.vocab, spec.sgns);
  }
  if (spec.sentiment) {
    if (!lexicon) throw std::runtime_error("sentiment channel requested without a lexicon");
    pipeline.lexicon = *lexicon;
  }
  return pipeline;
}

FeatureVector assemble_features(const std::vector<Token>& day_tokens,
                                const FeaturePipeline& pipeline) {
  const std::vector<Token> grams = extract_ngrams(day_tokens, pipeline.ngram);
  FeatureVector v;
  switch (pipeline.base) {
    case BaseVectorizer::bow:
      v = bow_vector(grams, pipeline.vocab);
      break;
    case BaseVectorizer::tfidf_paper:
      v = tfidf_paper_vector(grams, pipeline.vocab);
      break;
    case BaseVectorizer::tfidf_standard:
      v = tfidf_standard_vector(grams, pipeline.vocab);
      break;
    case BaseVectorizer::w2v_sum:
      v = aggregate_embeddings(grams, *pipeline.embeddings, pipeline.vocab, AggregateMode::sum);
      break;
    case BaseVectorizer::w2v_mean:
      v = aggregate_embeddings(grams, *pipeline.embeddings, pipeline.vocab, AggregateMode::mean);
      break;
  }
  if (pipeline.sentiment) {
    // The lexicon keys are words, so the sentiment channel always reads the
    // raw token stream, not the gram stream.
    const FeatureVector s = sentiment_features(day_tokens, *pipeline.lexicon);
    v.insert(v.end(), s.begin(), s.end());
  }
  return v;
}

}  // namespace newstrend
