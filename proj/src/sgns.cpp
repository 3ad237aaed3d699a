// Skip-gram with negative sampling, trained by plain SGD over (center,
// context) pairs in corpus order. Single-threaded so a seed pins the exact
// update sequence.
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "newstrend/rng.hpp"
#include "newstrend/vectorize.hpp"

namespace newstrend {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log sigmoid(x), computed without overflow.
double softplus_neg(double x) {
  // -log sigmoid(x) = log(1 + exp(-x))
  if (x > 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void validate_params(const SgnsParams& p) {
  if (p.dimension < 1 || p.window < 1 || p.negatives < 1 || p.epochs < 1) {
    throw std::runtime_error("sgns: dimension, window, negatives and epochs must be positive");
  }
  if (p.learning_rate < 0.0 || p.min_learning_rate < 0.0) {
    throw std::runtime_error("sgns: learning rates must be non-negative");
  }
  if (!(p.smoothing_exponent > 0.0 && p.smoothing_exponent <= 1.0)) {
    throw std::runtime_error("sgns: smoothing exponent must be in (0,1]");
  }
}

// Cumulative distribution over vocabulary indices proportional to
// corpus_count^exponent; sampled by binary search on a uniform draw.
class NegativeSampler {
 public:
  NegativeSampler(const Vocabulary& vocab, double exponent) {
    cumulative_.reserve(vocab.size());
    double total = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      total += std::pow(static_cast<double>(vocab.corpus_count[i]), exponent);
      cumulative_.push_back(total);
    }
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

std::pair<double, SgnsGradients> sgns_loss_and_grad(
    std::span<const double> center, std::span<const double> context,
    const std::vector<std::vector<double>>& negatives) {
  const std::size_t d = center.size();
  if (context.size() != d) throw std::runtime_error("sgns_loss_and_grad: dimension mismatch");
  for (const auto& n : negatives) {
    if (n.size() != d) throw std::runtime_error("sgns_loss_and_grad: dimension mismatch");
  }

  SgnsGradients grads;
  grads.center.assign(d, 0.0);
  grads.context.assign(d, 0.0);
  grads.negatives.assign(negatives.size(), std::vector<double>(d, 0.0));

  double loss = 0.0;

  // Positive term: d/dx of -log sigmoid(x) is sigmoid(x) - 1.
  const double pos_score = dot(center, context);
  loss += softplus_neg(pos_score);
  const double pos_coeff = sigmoid(pos_score) - 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    grads.center[j] += pos_coeff * context[j];
    grads.context[j] += pos_coeff * center[j];
  }

  // Negative terms: d/dx of -log sigmoid(-x) is sigmoid(x).
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const double neg_score = dot(center, negatives[k]);
    loss += softplus_neg(-neg_score);
    const double neg_coeff = sigmoid(neg_score);
    for (std::size_t j = 0; j < d; ++j) {
      grads.center[j] += neg_coeff * negatives[k][j];
      grads.negatives[k][j] += neg_coeff * center[j];
    }
  }
  return {loss, std::move(grads)};
}

EmbeddingMatrix train_word2vec(const std::vector<std::vector<Token>>& train_docs,
                               const Vocabulary& vocab, const SgnsParams& params) {
  validate_params(params);
  if (vocab.size() < static_cast<std::size_t>(params.negatives) + 1) {
    throw std::runtime_error("too few terms for negative sampling (need at least " +
                             std::to_string(params.negatives + 1) + ")");
  }

  const auto d = static_cast<std::size_t>(params.dimension);
  EmbeddingMatrix emb;
  emb.dimension = d;
  emb.input_vectors.assign(vocab.size(), std::vector<double>(d));
  emb.output_vectors.assign(vocab.size(), std::vector<double>(d, 0.0));

  Rng rng(derive_seed(params.seed, "sgns-init"));
  const double half = 0.5 / static_cast<double>(d);
  for (auto& row : emb.input_vectors) {
    for (double& x : row) x = rng.uniform(-half, half);
  }

  // In-vocabulary token ids per document; OOV tokens are dropped, so contexts
  // span the gaps they leave.
  std::vector<std::vector<std::size_t>> id_docs;
  id_docs.reserve(train_docs.size());
  std::size_t total_positions = 0;
  for (const auto& doc : train_docs) {
    std::vector<std::size_t> ids;
    ids.reserve(doc.size());
    for (const auto& tok : doc) {
      if (const auto idx = vocab.find(tok)) ids.push_back(*idx);
    }
    total_positions += ids.size();
    id_docs.push_back(std::move(ids));
  }
  if (total_positions == 0) return emb;

  const NegativeSampler sampler(vocab, params.smoothing_exponent);
  Rng train_rng(derive_seed(params.seed, "sgns-train"));

  const std::size_t total_steps = total_positions * static_cast<std::size_t>(params.epochs);
  std::size_t step = 0;
  std::vector<double> center_grad(d);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (const auto& ids : id_docs) {
      for (std::size_t i = 0; i < ids.size(); ++i, ++step) {
        const double progress = static_cast<double>(step) / static_cast<double>(total_steps);
        const double lr =
            std::max(params.min_learning_rate, params.learning_rate * (1.0 - progress));

        const std::size_t center = ids[i];
        auto& v = emb.input_vectors[center];

        const std::size_t lo = i >= static_cast<std::size_t>(params.window)
                                   ? i - static_cast<std::size_t>(params.window)
                                   : 0;
        const std::size_t hi = std::min(ids.size(), i + static_cast<std::size_t>(params.window) + 1);
        for (std::size_t c = lo; c < hi; ++c) {
          if (c == i) continue;
          const std::size_t context = ids[c];

          std::fill(center_grad.begin(), center_grad.end(), 0.0);

          // Positive pair; the context's output vector is updated in place
          // while its pre-update value feeds the center gradient.
          auto& u_pos = emb.output_vectors[context];
          const double g_pos = (sigmoid(dot(v, u_pos)) - 1.0) * lr;
          for (std::size_t j = 0; j < d; ++j) {
            center_grad[j] += g_pos * u_pos[j];
            u_pos[j] -= g_pos * v[j];
          }

          for (int k = 0; k < params.negatives; ++k) {
            std::size_t negative = sampler.sample(train_rng);
            while (negative == context) negative = sampler.sample(train_rng);
            auto& u_neg = emb.output_vectors[negative];
            const double g_neg = sigmoid(dot(v, u_neg)) * lr;
            for (std::size_t j = 0; j < d; ++j) {
              center_grad[j] += g_neg * u_neg[j];
              u_neg[j] -= g_neg * v[j];
            }
          }

          for (std::size_t j = 0; j < d; ++j) v[j] -= center_grad[j];
        }
      }
    }
  }

  for (const auto& row : emb.input_vectors) {
    for (double x : row) {
      if (!std::isfinite(x)) {
        throw std::runtime_error("sgns: embeddings diverged; use a smaller learning rate");
      }
    }
  }
  return emb;
}

}  // namespace newstrend
