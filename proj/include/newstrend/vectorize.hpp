#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "newstrend/preprocess.hpp"

namespace newstrend {

using FeatureVector = std::vector<double>;

// Ordered term -> feature-index map with training-split statistics. Built on
// training documents only; test documents never touch the counts.
struct Vocabulary {
  std::vector<std::string> terms;          // feature index = position
  std::vector<std::int64_t> doc_freq;      // training docs containing the term
  std::vector<std::int64_t> corpus_count;  // total occurrences in training docs
  std::int64_t n_train_docs = 0;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return terms.size(); }
  std::optional<std::size_t> find(const std::string& term) const {
    const auto it = index.find(term);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

// Terms with doc_freq >= min_df, ordered by descending corpus_count (ties
// lexicographic), truncated to max_size.
Vocabulary build_vocabulary(const std::vector<std::vector<Token>>& train_docs,
                            std::int64_t min_df = 1,
                            std::size_t max_size = std::numeric_limits<std::size_t>::max());

inline constexpr int kMaxNgramOrder = 5;

struct NgramConfig {
  int n = 1;  // 1..kMaxNgramOrder
  bool combine_with_unigrams = false;
};

// Contiguous n-grams joined with '_'; unigrams prepended when combining.
std::vector<Token> extract_ngrams(const std::vector<Token>& tokens, const NgramConfig& config);

// Entry i = occurrence count of term i; out-of-vocabulary tokens ignored.
FeatureVector bow_vector(const std::vector<Token>& tokens, const Vocabulary& vocab);

// Paper-variant TF-IDF: per-day count divided by the term's total count over
// the training corpus, clamped to 1 for test-time documents.
FeatureVector tfidf_paper_vector(const std::vector<Token>& tokens, const Vocabulary& vocab);

// Conventional smoothed TF-IDF: tf * ln((1+N)/(1+df)) + tf, L2-normalized.
FeatureVector tfidf_standard_vector(const std::vector<Token>& tokens, const Vocabulary& vocab);

struct EmbeddingMatrix {
  std::size_t dimension = 0;
  std::vector<std::vector<double>> input_vectors;   // one row per vocabulary term
  std::vector<std::vector<double>> output_vectors;  // context side, same shape
};

struct SgnsParams {
  int dimension = 50;
  int window = 5;     // context radius
  int negatives = 5;  // per positive pair
  int epochs = 5;
  double learning_rate = 0.025;  // linear decay to min_learning_rate
  double min_learning_rate = 1e-4;
  double smoothing_exponent = 0.75;  // unigram distribution exponent, (0,1]
  std::uint64_t seed = 0;
};

struct SgnsGradients {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

// Per-pair skip-gram negative-sampling loss
//   -log sigmoid(u_ctx . v_ctr) - sum_k log sigmoid(-u_neg_k . v_ctr)
// with analytic gradients for every input vector.
std::pair<double, SgnsGradients> sgns_loss_and_grad(
    std::span<const double> center, std::span<const double> context,
    const std::vector<std::vector<double>>& negatives);

// Skip-gram with negative sampling over the training documents. Input vectors
// start uniform in [-0.5/d, 0.5/d], output vectors at zero; negatives are
// drawn from the unigram distribution raised to the smoothing exponent.
// Deterministic given params.seed.
EmbeddingMatrix train_word2vec(const std::vector<std::vector<Token>>& train_docs,
                               const Vocabulary& vocab, const SgnsParams& params);

enum class AggregateMode { sum, mean };

// Sum or mean of the input vectors of in-vocabulary tokens; all-OOV or empty
// input yields the zero vector.
FeatureVector aggregate_embeddings(const std::vector<Token>& tokens, const EmbeddingMatrix& emb,
                                   const Vocabulary& vocab, AggregateMode mode);

struct SentimentLexicon {
  // word -> (polarity in [-1,1], subjectivity in [0,1])
  std::unordered_map<std::string, std::pair<double, double>> entries;
};

// Lexicon CSV: `word,polarity,subjectivity`, header required.
SentimentLexicon load_lexicon_csv(const std::string& path);

// [mean polarity, mean subjectivity] over matched tokens; [0,0] when nothing
// matches.
FeatureVector sentiment_features(const std::vector<Token>& tokens, const SentimentLexicon& lexicon);

// `term v1 ... vd` per line, 6 significant digits.
void export_embeddings(const EmbeddingMatrix& emb, const Vocabulary& vocab, std::ostream& out);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

enum class BaseVectorizer { bow, tfidf_paper, tfidf_standard, w2v_sum, w2v_mean };

std::string to_string(BaseVectorizer base);
std::optional<BaseVectorizer> base_vectorizer_from_string(const std::string& name);

// One embedding column of the experiment grid.
struct FeatureSpec {
  BaseVectorizer base = BaseVectorizer::bow;
  NgramConfig ngram;
  bool sentiment = false;
  std::int64_t min_df = 1;
  std::size_t max_vocab = 5000;
  SgnsParams sgns;

  // Grid label, e.g. "bow", "tfidf_paper+2gram", "w2v_sum+sent".
  std::string name() const;
};

// Train-fitted state needed to vectorize any day.
struct FeaturePipeline {
  BaseVectorizer base = BaseVectorizer::bow;
  NgramConfig ngram;
  bool sentiment = false;
  Vocabulary vocab;  // over grams
  std::optional<EmbeddingMatrix> embeddings;
  std::optional<SentimentLexicon> lexicon;

  std::size_t dimension() const;
};

// Fits vocabulary (and embeddings, for w2v bases) on training documents only.
FeaturePipeline fit_feature_pipeline(const FeatureSpec& spec,
                                     const std::vector<std::vector<Token>>& train_docs,
                                     const std::optional<SentimentLexicon>& lexicon);

// [base || sentiment?]; dimension is fixed by the pipeline.
FeatureVector assemble_features(const std::vector<Token>& day_tokens,
                                const FeaturePipeline& pipeline);

}  // namespace newstrend
