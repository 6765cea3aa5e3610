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

#include "mgkb/etm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "mgkb/binary_io.h"
#include "mgkb/random.h"

namespace mgkb {
namespace etm {
namespace {

constexpr char kMagic[] = "MGET";
constexpr std::uint32_t kVersion = 1;

// Row-wise softmax, stable.
Matrix SoftmaxRows(const Matrix &m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    double mx = m.row(r).maxCoeff();
    out.row(r) = (m.row(r).array() - mx).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

Vector Softmax(const Vector &v) {
  Vector out = (v.array() - v.maxCoeff()).exp();
  return out / out.sum();
}

Matrix Relu(const Matrix &m) { return m.cwiseMax(0.0); }

Matrix UniformMatrix(Rng &rng, Eigen::Index rows, Eigen::Index cols,
                     double bound) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.Uniform(-bound, bound);
  return m;
}

Vector UniformVector(Rng &rng, Eigen::Index n, double bound) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.Uniform(-bound, bound);
  return v;
}

// Normalized bag of words per row.
Matrix NormalizeRows(const Matrix &counts) {
  Matrix x = counts;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double n = x.row(r).sum();
    if (n > 0) x.row(r) /= n;
  }
  return x;
}

struct Forward {
  Matrix x, z1, h1, z2, h2, mu, ls;
};

Forward Encode(const EtmModel &m, const Matrix &counts) {
  Forward f;
  f.x = NormalizeRows(counts);
  f.z1 = (f.x * m.w1.transpose()).rowwise() + m.b1.transpose();
  f.h1 = Relu(f.z1);
  f.z2 = (f.h1 * m.w2.transpose()).rowwise() + m.b2.transpose();
  f.h2 = Relu(f.z2);
  f.mu = (f.h2 * m.w_mu.transpose()).rowwise() + m.b_mu.transpose();
  f.ls = (f.h2 * m.w_ls.transpose()).rowwise() + m.b_ls.transpose();
  return f;
}

// Visits every parameter of a model alongside the matching gradient.
template <typename Fn>
void ForEachParam(EtmModel &m, Gradients &g, Fn fn) {
  fn(m.rho, g.rho);
  fn(m.alpha, g.alpha);
  fn(m.w1, g.w1);
  fn(m.b1, g.b1);
  fn(m.w2, g.w2);
  fn(m.b2, g.b2);
  fn(m.w_mu, g.w_mu);
  fn(m.b_mu, g.b_mu);
  fn(m.w_ls, g.w_ls);
  fn(m.b_ls, g.b_ls);
}

template <typename Fn>
void ForEachTensor(const EtmModel &m, Fn fn) {
  fn(m.rho);
  fn(m.alpha);
  fn(m.w1);
  fn(m.b1);
  fn(m.w2);
  fn(m.b2);
  fn(m.w_mu);
  fn(m.b_mu);
  fn(m.w_ls);
  fn(m.b_ls);
}

bool AllFinite(const EtmModel &m) {
  bool ok = true;
  ForEachTensor(m, [&](const auto &t) { ok = ok && t.allFinite(); });
  return ok;
}

class Adam {
 public:
  explicit Adam(double lr) : lr_(lr) {}

  void Step(EtmModel &model, Gradients &grad) {
    ++t_;
    if (m_.empty()) {
      ForEachParam(model, grad, [&](auto &p, auto &) {
        m_.push_back(Eigen::ArrayXd::Zero(p.size()));
        v_.push_back(Eigen::ArrayXd::Zero(p.size()));
      });
    }
    double c1 = 1 - std::pow(kBeta1, t_);
    double c2 = 1 - std::pow(kBeta2, t_);
    std::size_t i = 0;
    ForEachParam(model, grad, [&](auto &p, auto &g) {
      Eigen::Map<Eigen::ArrayXd> pv(p.data(), p.size());
      Eigen::Map<const Eigen::ArrayXd> gv(g.data(), g.size());
      m_[i] = kBeta1 * m_[i] + (1 - kBeta1) * gv;
      v_[i] = kBeta2 * v_[i] + (1 - kBeta2) * gv.square();
      pv -= lr_ * (m_[i] / c1) / ((v_[i] / c2).sqrt() + kEps);
      ++i;
    });
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_;
  int t_ = 0;
  std::vector<Eigen::ArrayXd> m_, v_;
};

Matrix BatchCounts(const BowCorpus &corpus,
                   const std::vector<std::size_t> &order, std::size_t begin,
                   std::size_t end) {
  Matrix counts = Matrix::Zero(end - begin, corpus.VocabSize());
  for (std::size_t i = begin; i < end; ++i)
    for (int w : corpus.documents[order[i]]) counts(i - begin, w) += 1;
  return counts;
}

std::vector<std::vector<int>> Select(const BowCorpus &corpus,
                                     const std::vector<std::size_t> &idx) {
  std::vector<std::vector<int>> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(corpus.documents[i]);
  return out;
}

void WriteTensor(BinaryWriter &w, const Matrix &m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      w.F32(static_cast<float>(m(r, c)));
}

void WriteTensor(BinaryWriter &w, const Vector &v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) w.F32(static_cast<float>(v(i)));
}

Matrix ReadMatrix(BinaryReader &r, std::uint32_t rows, std::uint32_t cols) {
  Matrix m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) m(i, j) = r.F32();
  return m;
}

Vector ReadVector(BinaryReader &r, std::uint32_t n) {
  Vector v(n);
  for (std::uint32_t i = 0; i < n; ++i) v(i) = r.F32();
  return v;
}

}  // namespace

int BowCorpus::TermIndex(const std::string &term) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
  if (it == vocabulary.end() || *it != term) return -1;
  return static_cast<int>(it - vocabulary.begin());
}

BowCorpus BowCorpus::Build(
    const std::vector<corpus::PreprocessedTweet> &tweets,
    const std::set<std::string> &vocabulary, std::uint64_t seed) {
  BowCorpus bow;
  bow.vocabulary.assign(vocabulary.begin(), vocabulary.end());
  for (const auto &t : tweets) {
    std::vector<int> doc;
    for (const auto &tok : t.tokens) {
      int i = bow.TermIndex(tok);
      if (i >= 0) doc.push_back(i);
    }
    if (doc.empty()) continue;
    bow.ids.push_back(t.id);
    bow.documents.push_back(std::move(doc));
  }
  std::vector<std::size_t> order(bow.documents.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(order);
  std::size_t n = order.size();
  std::size_t n_train = static_cast<std::size_t>(std::floor(n * 0.85 + 1e-9));
  std::size_t n_test = static_cast<std::size_t>(std::floor(n * 0.10 + 1e-9));
  bow.train.assign(order.begin(), order.begin() + n_train);
  bow.test.assign(order.begin() + n_train, order.begin() + n_train + n_test);
  bow.validation.assign(order.begin() + n_train + n_test, order.end());
  std::sort(bow.train.begin(), bow.train.end());
  std::sort(bow.test.begin(), bow.test.end());
  std::sort(bow.validation.begin(), bow.validation.end());
  return bow;
}

Vector Counts(const std::vector<int> &tokens, int vocab_size) {
  Vector c = Vector::Zero(vocab_size);
  for (int w : tokens) c(w) += 1;
  return c;
}

EtmModel InitModel(const std::vector<std::string> &vocabulary,
                   const Matrix &rho, int topics, int hidden,
                   std::uint64_t seed) {
  if (topics < 1 || hidden < 1) throw Error("ETM needs topics and hidden >= 1");
  if (rho.rows() != static_cast<Eigen::Index>(vocabulary.size()))
    throw Error("rho rows do not match the vocabulary");
  const int v = static_cast<int>(vocabulary.size());
  const int l = static_cast<int>(rho.cols());
  if (topics > v)
    throw Error("ETM topic count " + std::to_string(topics) +
                " exceeds the vocabulary size " + std::to_string(v));
  Rng rng(seed);
  EtmModel m;
  m.vocabulary = vocabulary;
  m.rho = rho;
  double bl = 1.0 / std::sqrt(static_cast<double>(l));
  double bv = 1.0 / std::sqrt(static_cast<double>(v));
  double bh = 1.0 / std::sqrt(static_cast<double>(hidden));
  m.alpha = UniformMatrix(rng, topics, l, bl);
  m.w1 = UniformMatrix(rng, hidden, v, bv);
  m.b1 = UniformVector(rng, hidden, bv);
  m.w2 = UniformMatrix(rng, hidden, hidden, bh);
  m.b2 = UniformVector(rng, hidden, bh);
  m.w_mu = UniformMatrix(rng, topics, hidden, bh);
  m.b_mu = UniformVector(rng, topics, bh);
  m.w_ls = UniformMatrix(rng, topics, hidden, bh);
  m.b_ls = UniformVector(rng, topics, bh);
  return m;
}

EtmModel InitModel(const std::vector<std::string> &vocabulary,
                   const embed::SkipGramModel &embeddings, int topics,
                   int hidden, std::uint64_t seed) {
  const int l = embeddings.dim;
  Matrix rho(vocabulary.size(), l);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    int idx = embeddings.vocab.Index(vocabulary[i]);
    for (int d = 0; d < l; ++d) {
      rho(i, d) = idx >= 0 ? embeddings.Vector(idx)[d]
                           : rng.Uniform(-0.5, 0.5) / l;
    }
  }
  return InitModel(vocabulary, rho, topics, hidden, seed);
}

double GaussianKl(const Vector &mu, const Vector &log_sigma2) {
  return -0.5 * (1.0 + log_sigma2.array() - mu.array().square() -
                 log_sigma2.array().exp())
                    .sum();
}

Matrix ComputeBeta(const EtmModel &model) {
  return SoftmaxRows(model.alpha * model.rho.transpose());
}

LossTerms NegativeElbo(const EtmModel &m, const Matrix &counts,
                       const Matrix &noise, Gradients *grad) {
  const Eigen::Index b = counts.rows();
  if (b == 0) throw Error("empty batch");
  const double inv_b = 1.0 / static_cast<double>(b);
  Forward f = Encode(m, counts);
  Matrix sigma = (0.5 * f.ls.array()).exp().matrix();
  Matrix delta = f.mu + sigma.cwiseProduct(noise);
  Matrix theta = SoftmaxRows(delta);
  Matrix beta = ComputeBeta(m);
  Matrix p = theta * beta;

  LossTerms loss;
  for (Eigen::Index d = 0; d < b; ++d) {
    double recon = 0;
    for (Eigen::Index w = 0; w < counts.cols(); ++w)
      if (counts(d, w) > 0) recon -= counts(d, w) * std::log(p(d, w));
    loss.reconstruction += recon;
    loss.kl += GaussianKl(f.mu.row(d).transpose(), f.ls.row(d).transpose());
  }
  loss.reconstruction *= inv_b;
  loss.kl *= inv_b;
  loss.total = loss.reconstruction + loss.kl;
  if (grad == nullptr) return loss;

  Matrix ratio = Matrix::Zero(b, counts.cols());
  for (Eigen::Index d = 0; d < b; ++d)
    for (Eigen::Index w = 0; w < counts.cols(); ++w)
      if (counts(d, w) > 0) ratio(d, w) = counts(d, w) / p(d, w);
  Matrix d_theta = -inv_b * (ratio * beta.transpose());
  Matrix d_beta = -inv_b * (theta.transpose() * ratio);

  // Softmax backward: dz = s * (g - <s, g>).
  Vector beta_dot = (d_beta.cwiseProduct(beta)).rowwise().sum();
  Matrix d_logit = beta.cwiseProduct(d_beta.colwise() - beta_dot);
  grad->alpha = d_logit * m.rho;
  grad->rho = d_logit.transpose() * m.alpha;

  Vector theta_dot = (d_theta.cwiseProduct(theta)).rowwise().sum();
  Matrix d_delta = theta.cwiseProduct(d_theta.colwise() - theta_dot);
  Matrix d_mu = d_delta + inv_b * f.mu;
  Matrix d_ls =
      0.5 * d_delta.cwiseProduct(noise).cwiseProduct(sigma) +
      (0.5 * inv_b) * (f.ls.array().exp() - 1.0).matrix();

  grad->w_mu = d_mu.transpose() * f.h2;
  grad->b_mu = d_mu.colwise().sum().transpose();
  grad->w_ls = d_ls.transpose() * f.h2;
  grad->b_ls = d_ls.colwise().sum().transpose();
  Matrix d_h2 = d_mu * m.w_mu + d_ls * m.w_ls;
  Matrix d_z2 = d_h2.cwiseProduct((f.z2.array() > 0).cast<double>().matrix());
  grad->w2 = d_z2.transpose() * f.h1;
  grad->b2 = d_z2.colwise().sum().transpose();
  Matrix d_h1 = d_z2 * m.w2;
  Matrix d_z1 = d_h1.cwiseProduct((f.z1.array() > 0).cast<double>().matrix());
  grad->w1 = d_z1.transpose() * f.x;
  grad->b1 = d_z1.colwise().sum().transpose();
  return loss;
}

Vector InferTheta(const EtmModel &model, const Vector &counts) {
  if (counts.size() != model.VocabSize())
    throw Error("document vector does not match the vocabulary");
  if (counts.sum() <= 0) throw Error("cannot infer topics of an empty document");
  Forward f = Encode(model, counts.transpose());
  return Softmax(f.mu.row(0).transpose());
}

double DocumentCompletionPerplexity(const EtmModel &model,
                                    const std::vector<std::vector<int>> &docs,
                                    Warnings *warnings) {
  Matrix beta = ComputeBeta(model);
  double nll = 0;
  std::size_t tokens = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto &doc = docs[i];
    if (doc.size() < 2) {
      if (warnings)
        warnings->Add("document " + std::to_string(i) +
                      ": fewer than two tokens, skipped in perplexity");
      continue;
    }
    std::size_t half = doc.size() / 2;
    std::vector<int> first(doc.begin(), doc.begin() + half);
    Vector theta = InferTheta(model, Counts(first, model.VocabSize()));
    for (std::size_t j = half; j < doc.size(); ++j) {
      nll -= std::log(theta.dot(beta.col(doc[j])));
      ++tokens;
    }
  }
  if (tokens == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::exp(nll / static_cast<double>(tokens));
}

std::vector<std::vector<int>> TopWords(const Matrix &beta, int top_n) {
  std::vector<std::vector<int>> out;
  int n = std::min<int>(top_n, static_cast<int>(beta.cols()));
  for (Eigen::Index k = 0; k < beta.rows(); ++k) {
    std::vector<int> idx(beta.cols());
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + n, idx.end(),
                      [&](int a, int b) {
                        if (beta(k, a) != beta(k, b)) return beta(k, a) > beta(k, b);
                        return a < b;
                      });
    idx.resize(n);
    out.push_back(std::move(idx));
  }
  return out;
}

double TopicCoherence(const Matrix &beta,
                      const std::vector<std::vector<int>> &documents,
                      int top_n) {
  if (documents.empty()) throw Error("coherence needs at least one document");
  auto tops = TopWords(beta, top_n);
  // Document sets per word of interest.
  std::map<int, std::vector<std::size_t>> postings;
  for (const auto &top : tops)
    for (int w : top) postings[w];
  for (std::size_t d = 0; d < documents.size(); ++d) {
    std::set<int> seen(documents[d].begin(), documents[d].end());
    for (int w : seen) {
      auto it = postings.find(w);
      if (it != postings.end()) it->second.push_back(d);
    }
  }
  const double n = static_cast<double>(documents.size());
  double total = 0;
  for (const auto &top : tops) {
    double sum = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < top.size(); ++i) {
      for (std::size_t j = i + 1; j < top.size(); ++j) {
        const auto &a = postings[top[i]];
        const auto &b = postings[top[j]];
        std::vector<std::size_t> both;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(both));
        double score;
        if (both.empty()) {
          score = -1.0;
        } else if (both.size() == documents.size()) {
          score = 1.0;
        } else {
          double pi = a.size() / n, pj = b.size() / n, pij = both.size() / n;
          score = std::log(pij / (pi * pj)) / -std::log(pij);
        }
        sum += score;
        ++pairs;
      }
    }
    total += pairs > 0 ? sum / pairs : 0.0;
  }
  return total / static_cast<double>(tops.size());
}

double TopicDiversity(const Matrix &beta, int top_n) {
  if (beta.cols() < top_n)
    throw Error("topic diversity needs at least " + std::to_string(top_n) +
                " terms");
  auto tops = TopWords(beta, top_n);
  std::set<int> unique;
  std::size_t total = 0;
  for (const auto &top : tops) {
    unique.insert(top.begin(), top.end());
    total += top.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(unique.size()) / total;
}

TrainResult TrainEtm(const BowCorpus &corpus, EtmModel init,
                     const EtmConfig &config) {
  if (corpus.train.empty()) throw Error("ETM training split is empty");
  if (init.VocabSize() != corpus.VocabSize())
    throw Error("ETM model and corpus vocabularies differ");
  if (init.Topics() > init.VocabSize())
    throw Error("ETM topic count exceeds the vocabulary size");
  if (config.batch < 1 || config.epochs < 1)
    throw Error("ETM batch and epochs must be >= 1");
  TrainResult result;
  result.model = std::move(init);
  Adam adam(config.learning_rate);
  Rng rng(config.seed);
  std::vector<std::size_t> order = corpus.train;
  auto validation = Select(corpus, corpus.validation);
  double best = std::numeric_limits<double>::infinity();
  EtmModel best_model = result.model;
  result.best_epoch = config.epochs;
  const int k = result.model.Topics();

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.Shuffle(order);
    double loss_sum = 0;
    std::size_t docs = 0;
    int batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch) {
      std::size_t end = std::min(order.size(), begin + config.batch);
      Matrix counts = BatchCounts(corpus, order, begin, end);
      Matrix noise(end - begin, k);
      for (Eigen::Index r = 0; r < noise.rows(); ++r)
        for (int c = 0; c < k; ++c) noise(r, c) = rng.Normal();
      Gradients grad;
      LossTerms loss = NegativeElbo(result.model, counts, noise, &grad);
      if (!std::isfinite(loss.total))
        throw Error("ETM loss became non-finite at epoch " +
                    std::to_string(epoch) + ", batch " +
                    std::to_string(batch_index));
      adam.Step(result.model, grad);
      if (!AllFinite(result.model))
        throw Error("ETM parameters became non-finite at epoch " +
                    std::to_string(epoch) + ", batch " +
                    std::to_string(batch_index));
      loss_sum += loss.total * static_cast<double>(end - begin);
      docs += end - begin;
      ++batch_index;
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(docs));
    double ppl = DocumentCompletionPerplexity(result.model, validation);
    result.val_perplexity.push_back(ppl);
    if (config.select_best_epoch && std::isfinite(ppl) && ppl < best) {
      best = ppl;
      best_model = result.model;
      result.best_epoch = epoch;
    }
  }
  if (config.select_best_epoch && std::isfinite(best)) {
    result.model = std::move(best_model);
  } else {
    if (config.select_best_epoch)
      result.warnings.Add(
          "no validation perplexity available; keeping the last epoch");
    result.best_epoch = config.epochs;
  }
  return result;
}

TopicDiagnostics Diagnose(const TrainResult &trained,
                          const BowCorpus &corpus) {
  Matrix beta = ComputeBeta(trained.model);
  TopicDiagnostics d;
  d.coherence = TopicCoherence(beta, corpus.documents);
  d.diversity =
      TopicDiversity(beta, std::min(25, trained.model.VocabSize()));
  d.quality = TopicQuality(d.coherence, d.diversity);
  int best = trained.best_epoch;
  d.val_perplexity = best >= 1 && best <= static_cast<int>(
                                               trained.val_perplexity.size())
                         ? trained.val_perplexity[best - 1]
                         : std::numeric_limits<double>::quiet_NaN();
  d.best_epoch = best;
  return d;
}

FilterResult FilterThetas(const std::vector<std::string> &ids,
                          const std::vector<Vector> &thetas,
                          const std::set<int> &relevant_topics,
                          double threshold) {
  if (ids.size() != thetas.size()) throw Error("ids and thetas differ in size");
  if (relevant_topics.empty()) throw Error("no relevant topics given");
  FilterResult out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Vector &theta = thetas[i];
    for (int t : relevant_topics)
      if (t < 0 || t >= theta.size())
        throw Error("relevant topic " + std::to_string(t) + " out of range");
    RelevanceScore s;
    s.id = ids[i];
    Eigen::Index arg = 0;
    for (Eigen::Index k = 1; k < theta.size(); ++k)
      if (theta(k) > theta(arg)) arg = k;
    s.topic = static_cast<int>(arg);
    s.max_score = -1;
    for (int t : relevant_topics) s.max_score = std::max(s.max_score, theta(t));
    (s.max_score >= threshold ? out.retained : out.dropped).push_back(s);
  }
  return out;
}

FilterResult FilterByRelevance(const std::vector<std::string> &ids,
                               const std::vector<std::vector<int>> &docs,
                               const EtmModel &model,
                               const std::set<int> &relevant_topics,
                               double threshold) {
  if (ids.size() != docs.size()) throw Error("ids and documents differ in size");
  std::vector<std::string> kept_ids;
  std::vector<Vector> thetas;
  Warnings warnings;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].empty()) {
      warnings.Add(ids[i] + ": no in-vocabulary tokens, dropped");
      continue;
    }
    kept_ids.push_back(ids[i]);
    thetas.push_back(InferTheta(model, Counts(docs[i], model.VocabSize())));
  }
  FilterResult out = FilterThetas(kept_ids, thetas, relevant_topics, threshold);
  for (const auto &w : warnings.messages) out.warnings.Add(w);
  return out;
}

std::set<int> LoadRelevantTopics(const std::string &path) {
  std::set<int> topics;
  for (const auto &raw : ReadLines(path)) {
    std::string_view line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) {
      std::size_t pos = 0;
      int t = -1;
      try {
        t = std::stoi(tok, &pos);
      } catch (const std::exception &) {
        pos = 0;
      }
      if (pos != tok.size() || t < 0)
        throw Error(path + ": bad topic id '" + tok + "'");
      topics.insert(t);
    }
  }
  return topics;
}

std::string SerializeCheckpoint(const EtmModel &m) {
  BinaryWriter w;
  w.Bytes(std::string_view(kMagic, 4));
  w.U32(kVersion);
  w.U32(m.VocabSize());
  w.U32(m.EmbeddingDim());
  w.U32(m.Topics());
  w.U32(m.Hidden());
  for (const auto &t : m.vocabulary) w.String(t);
  ForEachTensor(m, [&](const auto &t) { WriteTensor(w, t); });
  return std::move(w.data());
}

EtmModel DeserializeCheckpoint(std::string_view bytes) {
  BinaryReader r(bytes);
  if (r.Bytes(4) != std::string_view(kMagic, 4))
    throw Error("not an ETM checkpoint");
  if (r.U32() != kVersion) throw Error("unsupported ETM checkpoint version");
  std::uint32_t v = r.U32(), l = r.U32(), k = r.U32(), h = r.U32();
  EtmModel m;
  for (std::uint32_t i = 0; i < v; ++i) m.vocabulary.push_back(r.String());
  m.rho = ReadMatrix(r, v, l);
  m.alpha = ReadMatrix(r, k, l);
  m.w1 = ReadMatrix(r, h, v);
  m.b1 = ReadVector(r, h);
  m.w2 = ReadMatrix(r, h, h);
  m.b2 = ReadVector(r, h);
  m.w_mu = ReadMatrix(r, k, h);
  m.b_mu = ReadVector(r, k);
  m.w_ls = ReadMatrix(r, k, h);
  m.b_ls = ReadVector(r, k);
  if (!r.AtEnd()) throw Error("trailing bytes in ETM checkpoint");
  return m;
}

void SaveCheckpoint(const EtmModel &model, const std::string &path) {
  WriteFile(path, SerializeCheckpoint(model));
}

EtmModel LoadCheckpoint(const std::string &path) {
  try {
    return DeserializeCheckpoint(ReadFile(path));
  } catch (const Error &e) {
    throw Error(path + ": " + e.what());
  }
}

std::string TopicsReport(const EtmModel &model, int top_n) {
  std::string out = "topic\ttop_words\n";
  auto tops = TopWords(ComputeBeta(model), top_n);
  for (std::size_t k = 0; k < tops.size(); ++k) {
    out += std::to_string(k) + "\t";
    for (std::size_t i = 0; i < tops[k].size(); ++i) {
      if (i) out += ' ';
      out += model.vocabulary[tops[k][i]];
    }
    out += '\n';
  }
  return out;
}

}  // namespace etm
}  // namespace mgkb
