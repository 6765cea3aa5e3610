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

#include "mgkb/skipgram.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "mgkb/binary_io.h"
#include "mgkb/common.h"
#include "mgkb/random.h"

namespace mgkb {
namespace embed {

namespace {

constexpr char kMagic[] = "MGSG";
constexpr std::uint32_t kVersion = 1;

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow.
double LogSigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Cumulative unigram^0.75 distribution for negative draws.
class NegativeSampler {
 public:
  explicit NegativeSampler(const Vocabulary &vocab) {
    cumulative_.reserve(vocab.size());
    double total = 0;
    for (int i = 0; i < vocab.size(); ++i) {
      total += std::pow(static_cast<double>(vocab.Count(i)), 0.75);
      cumulative_.push_back(total);
    }
    for (double &c : cumulative_) c /= total;
  }

  int Draw(Rng &rng) const {
    double u = rng.Uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<int>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

// Shared state of one training run.
struct Trainer {
  const std::vector<std::vector<int>> &sentences;
  const SkipGramConfig &config;
  SkipGramModel &model;
  NegativeSampler sampler;
  std::uint64_t total_words;
  std::atomic<std::uint64_t> words_done{0};

  double LearningRate(std::uint64_t done) const {
    double progress = static_cast<double>(done) / static_cast<double>(total_words);
    return std::max(config.lr_end,
                    config.lr_start - (config.lr_start - config.lr_end) * progress);
  }

  // Trains on sentences [begin, end) for one epoch. Returns (loss, pairs).
  std::pair<double, std::uint64_t> Run(std::size_t begin, std::size_t end,
                                       Rng &rng) {
    const int dim = model.dim;
    PairGradient grad;
    std::vector<int> negs;
    std::vector<std::span<const double>> neg_rows;
    std::vector<double> center_copy(dim), context_copy(dim);
    std::vector<std::vector<double>> neg_copies;
    double loss = 0;
    std::uint64_t pairs = 0;
    for (std::size_t s = begin; s < end; ++s) {
      const auto &sent = sentences[s];
      const double lr = LearningRate(words_done.load(std::memory_order_relaxed));
      for (std::size_t i = 0; i < sent.size(); ++i) {
        const int center = sent[i];
        const int reach = 1 + static_cast<int>(rng.Below(config.window));
        const std::size_t lo = i >= static_cast<std::size_t>(reach) ? i - reach : 0;
        const std::size_t hi = std::min(sent.size(), i + reach + 1);
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          const int context = sent[j];
          negs.clear();
          for (int k = 0; k < config.negatives; ++k) {
            int n = sampler.Draw(rng);
            if (n != context) negs.push_back(n);
          }
          // Snapshot rows so the gradient is taken at a consistent point.
          Copy(model.input, center, center_copy);
          Copy(model.output, context, context_copy);
          neg_copies.resize(negs.size());
          neg_rows.clear();
          for (std::size_t k = 0; k < negs.size(); ++k) {
            neg_copies[k].resize(dim);
            Copy(model.output, negs[k], neg_copies[k]);
            neg_rows.emplace_back(neg_copies[k]);
          }
          loss += NegativeSamplingLoss(center_copy, context_copy, neg_rows, &grad);
          ++pairs;
          Apply(model.input, center, grad.center, lr);
          Apply(model.output, context, grad.context, lr);
          for (std::size_t k = 0; k < negs.size(); ++k) {
            Apply(model.output, negs[k], grad.negatives[k], lr);
          }
        }
      }
      words_done.fetch_add(sent.size(), std::memory_order_relaxed);
    }
    return {loss, pairs};
  }

  void Copy(const std::vector<double> &m, int row, std::vector<double> &out) {
    const double *p = m.data() + static_cast<std::size_t>(row) * model.dim;
    if (config.threads > 1) {
      for (int d = 0; d < model.dim; ++d) {
        out[d] = std::atomic_ref<double>(const_cast<double &>(p[d])).load(std::memory_order_relaxed);
      }
    } else {
      std::copy(p, p + model.dim, out.begin());
    }
  }

  // Hogwild: concurrent writers may lose updates but never tear a value.
  void Apply(std::vector<double> &m, int row, const std::vector<double> &g,
             double lr) {
    double *p = m.data() + static_cast<std::size_t>(row) * model.dim;
    if (config.threads > 1) {
      for (int d = 0; d < model.dim; ++d) {
        std::atomic_ref<double> cell(p[d]);
        cell.store(cell.load(std::memory_order_relaxed) - lr * g[d],
                   std::memory_order_relaxed);
      }
    } else {
      for (int d = 0; d < model.dim; ++d) p[d] -= lr * g[d];
    }
  }
};

}  // namespace

void Vocabulary::Add(const std::string &term, std::uint64_t count) {
  if (!index_.emplace(term, static_cast<int>(terms_.size())).second) {
    throw Error("duplicate vocabulary term '" + term + "'");
  }
  terms_.push_back(term);
  counts_.push_back(count);
}

int Vocabulary::Index(const std::string &term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

std::span<const double> SkipGramModel::Vector(const std::string &term) const {
  int index = vocab.Index(term);
  if (index < 0) throw Error("term not in vocabulary: '" + term + "'");
  return Vector(index);
}

Vocabulary BuildVocabulary(const std::vector<std::vector<std::string>> &corpus,
                           int min_count) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto &sent : corpus) {
    for (const auto &tok : sent) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto &[term, count] : counts) {
    if (count >= static_cast<std::uint64_t>(min_count)) kept.emplace_back(term, count);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  Vocabulary vocab;
  for (const auto &[term, count] : kept) vocab.Add(term, count);
  return vocab;
}

double NegativeSamplingLoss(std::span<const double> center,
                            std::span<const double> context,
                            const std::vector<std::span<const double>> &negatives,
                            PairGradient *grad) {
  const std::size_t dim = center.size();
  double x = Dot(context, center);
  double loss = -LogSigmoid(x);
  double g_pos = Sigmoid(x) - 1.0;
  if (grad != nullptr) {
    grad->center.assign(dim, 0.0);
    grad->context.resize(dim);
    grad->negatives.resize(negatives.size());
    for (std::size_t d = 0; d < dim; ++d) {
      grad->center[d] += g_pos * context[d];
      grad->context[d] = g_pos * center[d];
    }
  }
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    double y = Dot(negatives[k], center);
    loss -= LogSigmoid(-y);
    if (grad != nullptr) {
      double g_neg = Sigmoid(y);
      grad->negatives[k].resize(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        grad->center[d] += g_neg * negatives[k][d];
        grad->negatives[k][d] = g_neg * center[d];
      }
    }
  }
  return loss;
}

SkipGramModel TrainSkipGram(const std::vector<std::vector<std::string>> &corpus,
                            const SkipGramConfig &config) {
  if (corpus.empty()) throw Error("skip-gram: empty corpus");
  if (config.dim <= 0 || config.window <= 0 || config.negatives <= 0 ||
      config.min_count <= 0 || config.epochs <= 0 || config.threads <= 0 ||
      !(config.lr_start > 0) || !(config.lr_end > 0)) {
    throw Error("skip-gram: configuration values must be positive");
  }
  SkipGramModel model;
  model.vocab = BuildVocabulary(corpus, config.min_count);
  if (model.vocab.size() == 0) {
    throw Error("skip-gram: vocabulary is empty after min_count filtering");
  }
  model.dim = config.dim;
  model.config = config;

  std::vector<std::vector<int>> sentences;
  std::uint64_t corpus_words = 0;
  for (const auto &sent : corpus) {
    std::vector<int> ids;
    for (const auto &tok : sent) {
      int id = model.vocab.Index(tok);
      if (id >= 0) ids.push_back(id);
    }
    corpus_words += ids.size();
    if (ids.size() >= 2) sentences.push_back(std::move(ids));
  }

  const std::size_t cells = static_cast<std::size_t>(model.vocab.size()) * config.dim;
  model.input.resize(cells);
  model.output.assign(cells, 0.0);
  Rng init(config.seed);
  for (double &v : model.input) v = (init.Uniform() - 0.5) / config.dim;

  Trainer trainer{sentences, config, model, NegativeSampler(model.vocab),
                  std::max<std::uint64_t>(1, corpus_words * config.epochs)};
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss = 0;
    std::uint64_t pairs = 0;
    if (config.threads == 1) {
      Rng rng(config.seed * 1000003u + epoch + 1);
      std::tie(loss, pairs) = trainer.Run(0, sentences.size(), rng);
    } else {
      std::vector<std::pair<double, std::uint64_t>> parts(config.threads);
      std::vector<std::thread> workers;
      const std::size_t chunk = (sentences.size() + config.threads - 1) / config.threads;
      for (int t = 0; t < config.threads; ++t) {
        workers.emplace_back([&, t] {
          Rng rng(config.seed * 1000003u + epoch * 131u + t + 1);
          std::size_t b = std::min(sentences.size(), t * chunk);
          std::size_t e = std::min(sentences.size(), b + chunk);
          parts[t] = trainer.Run(b, e, rng);
        });
      }
      for (auto &w : workers) w.join();
      for (const auto &[l, p] : parts) {
        loss += l;
        pairs += p;
      }
    }
    model.epoch_loss.push_back(pairs > 0 ? loss / static_cast<double>(pairs) : 0.0);
    for (double v : model.input) {
      if (!std::isfinite(v)) {
        throw Error("skip-gram: non-finite parameter in epoch " +
                    std::to_string(epoch + 1));
      }
    }
  }
  return model;
}

double Cosine(std::span<const double> a, std::span<const double> b) {
  double na = std::sqrt(Dot(a, a)), nb = std::sqrt(Dot(b, b));
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

double Cosine(const SkipGramModel &model, const std::string &w1,
              const std::string &w2) {
  return Cosine(model.Vector(w1), model.Vector(w2));
}

std::string SerializeModel(const SkipGramModel &model) {
  BinaryWriter w;
  w.Bytes(std::string_view(kMagic, 4));
  w.U32(kVersion);
  w.U32(static_cast<std::uint32_t>(model.vocab.size()));
  w.U32(static_cast<std::uint32_t>(model.dim));
  for (int i = 0; i < model.vocab.size(); ++i) {
    w.String(model.vocab.Term(i));
    w.U64(model.vocab.Count(i));
  }
  for (double v : model.input) w.F32(static_cast<float>(v));
  for (double v : model.output) w.F32(static_cast<float>(v));
  return std::move(w.data());
}

SkipGramModel DeserializeModel(std::string_view bytes) {
  BinaryReader r(bytes);
  if (r.Bytes(4) != std::string_view(kMagic, 4)) {
    throw Error("not a skip-gram model file (bad magic)");
  }
  if (r.U32() != kVersion) throw Error("unsupported skip-gram model version");
  SkipGramModel model;
  const std::uint32_t v = r.U32();
  model.dim = static_cast<int>(r.U32());
  for (std::uint32_t i = 0; i < v; ++i) {
    std::string term = r.String();
    model.vocab.Add(term, r.U64());
  }
  const std::size_t cells = static_cast<std::size_t>(v) * model.dim;
  model.input.resize(cells);
  model.output.resize(cells);
  for (double &x : model.input) x = r.F32();
  for (double &x : model.output) x = r.F32();
  if (!r.AtEnd()) throw Error("trailing bytes in skip-gram model file");
  model.config.dim = model.dim;
  return model;
}

void SaveModel(const SkipGramModel &model, const std::string &path) {
  WriteFile(path, SerializeModel(model));
}

SkipGramModel LoadModel(const std::string &path) {
  return DeserializeModel(ReadFile(path));
}

}  // namespace embed
}  // namespace mgkb
