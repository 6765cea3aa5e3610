// Copyright 2026 The mgkb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGKB_ETM_H_
#define MGKB_ETM_H_

#include <Eigen/Dense>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "mgkb/common.h"
#include "mgkb/corpus.h"
#include "mgkb/skipgram.h"

namespace mgkb {
namespace etm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Bag-of-words corpus over a pruned vocabulary. Documents keep their token
// order so that document completion can split them by position.
struct BowCorpus {
  std::vector<std::string> vocabulary;
  std::vector<std::string> ids;
  std::vector<std::vector<int>> documents;
  // Disjoint index sets into documents.
  std::vector<std::size_t> train, test, validation;

  int VocabSize() const { return static_cast<int>(vocabulary.size()); }
  int TermIndex(const std::string &term) const;

  // Drops out-of-vocabulary tokens and documents left empty, then splits
  // 85% train / 10% test / 5% validation after a seeded shuffle.
  static BowCorpus Build(const std::vector<corpus::PreprocessedTweet> &tweets,
                         const std::set<std::string> &vocabulary,
                         std::uint64_t seed);
};

// Dense term counts of one document.
Vector Counts(const std::vector<int> &tokens, int vocab_size);

struct EtmModel {
  std::vector<std::string> vocabulary;
  Matrix rho;    // V x L word embeddings
  Matrix alpha;  // K x L topic embeddings
  // Encoder: normalized bag of words -> two ReLU layers -> (mu, log sigma^2).
  Matrix w1;     // H x V
  Vector b1;
  Matrix w2;     // H x H
  Vector b2;
  Matrix w_mu;   // K x H
  Vector b_mu;
  Matrix w_ls;   // K x H
  Vector b_ls;

  int Topics() const { return static_cast<int>(alpha.rows()); }
  int VocabSize() const { return static_cast<int>(rho.rows()); }
  int EmbeddingDim() const { return static_cast<int>(rho.cols()); }
  int Hidden() const { return static_cast<int>(w1.rows()); }
};

// Random encoder and topic embeddings; rho copied from the skip-gram rows of
// the vocabulary terms (terms missing from the embedding model get small
// random vectors).
EtmModel InitModel(const std::vector<std::string> &vocabulary,
                   const embed::SkipGramModel &embeddings, int topics,
                   int hidden, std::uint64_t seed);
EtmModel InitModel(const std::vector<std::string> &vocabulary,
                   const Matrix &rho, int topics, int hidden,
                   std::uint64_t seed);

// Same shapes as the model parameters.
struct Gradients {
  Matrix rho, alpha, w1, w2, w_mu, w_ls;
  Vector b1, b2, b_mu, b_ls;
};

struct LossTerms {
  double total = 0;           // mean over documents of recon + kl
  double reconstruction = 0;  // mean negative log-likelihood
  double kl = 0;              // mean KL divergence
};

// Negative ELBO of a batch (rows of `counts` are documents) for a fixed
// reparameterization draw `noise` (B x K). Fills `grad` when non-null.
LossTerms NegativeElbo(const EtmModel &model, const Matrix &counts,
                       const Matrix &noise, Gradients *grad);

// Closed-form KL(N(mu, diag(exp(log_sigma2))) || N(0, I)).
double GaussianKl(const Vector &mu, const Vector &log_sigma2);

struct EtmConfig {
  int topics = 50;
  int hidden = 300;
  int batch = 1000;
  int epochs = 200;
  double learning_rate = 0.005;
  std::uint64_t seed = 1;
  bool select_best_epoch = true;  // keep the epoch with lowest validation PPL
};

struct TrainResult {
  EtmModel model;
  std::vector<double> epoch_loss;
  std::vector<double> val_perplexity;  // NaN when no validation document
  int best_epoch = 0;                  // 1-based
  Warnings warnings;
};

// Adam-trained ETM starting from `init`.
TrainResult TrainEtm(const BowCorpus &corpus, EtmModel init,
                     const EtmConfig &config);

// K x V; row k = softmax(rho * alpha_k).
Matrix ComputeBeta(const EtmModel &model);

// softmax(mu(doc)) from the encoder mean; throws on an all-zero document.
Vector InferTheta(const EtmModel &model, const Vector &counts);

// Infers theta from the first half of each document (by position) and
// scores the second half under theta^T beta. Documents with fewer than two
// tokens are skipped with a warning.
double DocumentCompletionPerplexity(const EtmModel &model,
                                    const std::vector<std::vector<int>> &docs,
                                    Warnings *warnings = nullptr);

// Indices of the top_n largest entries of each row, descending, ties to the
// lower index.
std::vector<std::vector<int>> TopWords(const Matrix &beta, int top_n);

// Mean over topics of the mean NPMI over all pairs of the topic's top_n words,
// from document co-occurrence. Never co-occurring pairs score -1; pairs present
// in every document score 1.
double TopicCoherence(const Matrix &beta,
                      const std::vector<std::vector<int>> &documents,
                      int top_n = 10);

// Distinct words among all topics' top_n lists over K * top_n. Throws when
// the vocabulary has fewer than top_n terms.
double TopicDiversity(const Matrix &beta, int top_n = 25);

inline double TopicQuality(double coherence, double diversity) {
  return coherence * diversity;
}

struct TopicDiagnostics {
  double coherence = 0;
  double diversity = 0;
  double quality = 0;
  double val_perplexity = 0;
  int best_epoch = 0;
};

// Coherence over all corpus documents, diversity over the top 25 words (fewer
// when the vocabulary is smaller), validation perplexity at the best epoch.
TopicDiagnostics Diagnose(const TrainResult &trained, const BowCorpus &corpus);

struct RelevanceScore {
  std::string id;
  int topic = 0;           // argmax over all topics
  double max_score = 0;    // max over the relevant topics
};

struct FilterResult {
  std::vector<RelevanceScore> retained;
  std::vector<RelevanceScore> dropped;
  Warnings warnings;
};

// Threshold filtering over precomputed topic proportions. A document is
// retained iff its best relevant-topic score is >= threshold.
FilterResult FilterThetas(const std::vector<std::string> &ids,
                          const std::vector<Vector> &thetas,
                          const std::set<int> &relevant_topics,
                          double threshold = 0.45);

// Infers theta per document; documents without tokens are dropped with a
// warning.
FilterResult FilterByRelevance(const std::vector<std::string> &ids,
                               const std::vector<std::vector<int>> &docs,
                               const EtmModel &model,
                               const std::set<int> &relevant_topics,
                               double threshold = 0.45);

// Whitespace-separated topic ids, '#' comments.
std::set<int> LoadRelevantTopics(const std::string &path);

// "MGET" | u32 version | u32 V | u32 L | u32 K | u32 H | V terms
// (u32 length + bytes) | rho, alpha, w1, b1, w2, b2, w_mu, b_mu, w_ls, b_ls
// as row-major little-endian f32.
void SaveCheckpoint(const EtmModel &model, const std::string &path);
EtmModel LoadCheckpoint(const std::string &path);
std::string SerializeCheckpoint(const EtmModel &model);
EtmModel DeserializeCheckpoint(std::string_view bytes);

// TSV "topic<TAB>w1 w2 ..." with the top_n words of each topic.
std::string TopicsReport(const EtmModel &model, int top_n = 20);

}  // namespace etm
}  // namespace mgkb

#endif  // MGKB_ETM_H_
