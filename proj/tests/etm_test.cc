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

#include <cmath>
#include <set>

#include "doctest.h"
#include "mgkb/etm.h"
#include "mgkb/random.h"
#include "support/oracles.h"

using namespace mgkb;
using namespace mgkb::etm;

using namespace mgkb::testing;

TEST_CASE("gradients match central finite differences") {
  for (std::uint64_t seed : {3u, 11u}) {
    EtmModel m = SmallModel(6, 3, 2, 5, seed);
    Matrix counts(2, 6);
    counts << 2, 0, 1, 0, 3, 1,
              0, 4, 0, 1, 0, 2;
    Matrix noise(2, 2);
    noise << 0.3, -1.1,
             -0.4, 0.8;
    Gradients g;
    NegativeElbo(m, counts, noise, &g);
    CHECK(RelativeError(m, m.rho, g.rho, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.alpha, g.alpha, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.w1, g.w1, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.b1, g.b1, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.w2, g.w2, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.b2, g.b2, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.w_mu, g.w_mu, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.b_mu, g.b_mu, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.w_ls, g.w_ls, counts, noise) < 1e-3);
    CHECK(RelativeError(m, m.b_ls, g.b_ls, counts, noise) < 1e-3);
  }
}

TEST_CASE("kl term") {
  Vector zero = Vector::Zero(4);
  CHECK(GaussianKl(zero, zero) == 0.0);
  // Independent one-dimensional oracle: 0.5 (s2 + mu^2 - 1 - ln s2).
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Vector mu(3), ls(3);
    double oracle = 0;
    for (int i = 0; i < 3; ++i) {
      mu(i) = rng.Uniform(-3, 3);
      ls(i) = rng.Uniform(-3, 3);
      double s2 = std::exp(ls(i));
      oracle += 0.5 * (s2 + mu(i) * mu(i) - 1 - std::log(s2));
    }
    double kl = GaussianKl(mu, ls);
    CHECK(kl >= 0);
    CHECK(kl == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("beta") {
  EtmModel m = SmallModel(3, 1, 1, 2, 1);
  m.alpha.setZero();
  Matrix beta = ComputeBeta(m);
  for (int w = 0; w < 3; ++w) CHECK(beta(0, w) == doctest::Approx(1.0 / 3));
  // Inner products (0, ln 2, 0) give (1/4, 1/2, 1/4).
  m.alpha(0, 0) = 1;
  m.rho << 0, std::log(2.0), 0;
  beta = ComputeBeta(m);
  CHECK(beta(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(beta(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(beta(0, 2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("theta and beta are simplices") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    int v = 2 + rng.Below(20), k = 1 + rng.Below(v), l = 1 + rng.Below(6);
    EtmModel m = SmallModel(v, l, k, 1 + rng.Below(8), trial);
    // Stretch the weights so the softmaxes are far from uniform.
    m.alpha *= 10;
    m.w_mu *= 10;
    Matrix beta = ComputeBeta(m);
    for (int r = 0; r < k; ++r) CHECK(IsSimplex(beta.row(r).transpose()));
    Vector doc = Vector::Zero(v);
    for (int t = 0; t < 5; ++t) doc(rng.Below(v)) += 1;
    Vector theta = InferTheta(m, doc);
    CHECK(IsSimplex(theta));
    CHECK(theta == InferTheta(m, doc));
    if (k == 1) CHECK(theta(0) == 1.0);
  }
  EtmModel m = SmallModel(4, 2, 2, 3, 1);
  CHECK_THROWS_AS(InferTheta(m, Vector::Zero(4)), Error);
  CHECK_THROWS_AS(SmallModel(3, 2, 4, 3, 1), Error);
}

TEST_CASE("document completion perplexity") {
  // Uniform model over ten words.
  EtmModel m = SmallModel(10, 2, 1, 3, 1);
  m.alpha.setZero();
  std::vector<std::vector<int>> docs = {{0, 1, 2, 3}, {4, 5, 6}, {7, 8}};
  CHECK(DocumentCompletionPerplexity(m, docs) == doctest::Approx(10.0));
  // A single-word vocabulary gives every held-out token probability one.
  EtmModel one = SmallModel(1, 2, 1, 3, 1);
  CHECK(DocumentCompletionPerplexity(one, {{0, 0, 0}}) == 1.0);
  Warnings w;
  double ppl = DocumentCompletionPerplexity(m, {{1}, {1, 2}}, &w);
  CHECK(ppl == doctest::Approx(10.0));
  CHECK(w.size() == 1);
}

TEST_CASE("topic coherence") {
  // Row 0 ranks words 0..3 first; row 1 ranks 4, 5 first.
  Matrix beta(2, 6);
  beta << 0.4, 0.3, 0.2, 0.1, 0.0, 0.0,
          0.0, 0.0, 0.0, 0.1, 0.5, 0.4;
  std::vector<std::vector<int>> docs = {{0, 1, 4},    {0, 2, 5}, {1, 2, 3, 4},
                                        {0, 1, 2, 3}, {4, 5},    {3, 0}};
  // Exhaustive oracle with top_n = 3: topic 0 -> {0,1,2}, topic 1 -> {4,5,3}.
  auto npmi = [&](int a, int b) {
    double n = docs.size(), ca = 0, cb = 0, cab = 0;
    for (const auto &d : docs) {
      bool ha = false, hb = false;
      for (int w : d) {
        ha = ha || w == a;
        hb = hb || w == b;
      }
      ca += ha;
      cb += hb;
      cab += ha && hb;
    }
    if (cab == 0) return -1.0;
    if (cab == n) return 1.0;
    return std::log((cab / n) / ((ca / n) * (cb / n))) / -std::log(cab / n);
  };
  double t0 = (npmi(0, 1) + npmi(0, 2) + npmi(1, 2)) / 3;
  double t1 = (npmi(4, 5) + npmi(4, 3) + npmi(5, 3)) / 3;
  CHECK(TopicCoherence(beta, docs, 3) ==
        doctest::Approx((t0 + t1) / 2).epsilon(1e-12));

  Matrix pair(1, 3);
  pair << 0.5, 0.4, 0.1;
  CHECK(TopicCoherence(pair, {{0, 1}, {1, 0, 2}}, 2) == 1.0);
  CHECK(TopicCoherence(pair, {{0}, {1}, {2}}, 2) == -1.0);
}

TEST_CASE("topic diversity and quality") {
  Rng rng(9);
  Matrix one(1, 30);
  for (int w = 0; w < 30; ++w) one(0, w) = rng.Uniform();
  CHECK(TopicDiversity(one) == 1.0);
  Matrix same(4, 30);
  for (int k = 0; k < 4; ++k) same.row(k) = one.row(0);
  CHECK(TopicDiversity(same) == doctest::Approx(0.25));
  Matrix disjoint = Matrix::Zero(2, 60);
  for (int w = 0; w < 25; ++w) {
    disjoint(0, w) = 1 + w;
    disjoint(1, 30 + w) = 1 + w;
  }
  CHECK(TopicDiversity(disjoint) == 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    int k = 1 + rng.Below(6);
    Matrix beta(k, 40);
    for (int r = 0; r < k; ++r)
      for (int w = 0; w < 40; ++w) beta(r, w) = rng.Below(3);
    double d = TopicDiversity(beta);
    CHECK(d >= 1.0 / k - 1e-12);
    CHECK(d <= 1.0);
  }
  CHECK_THROWS_AS(TopicDiversity(Matrix::Zero(2, 10)), Error);

  CHECK(TopicQuality(0.0777, 0.9288) == doctest::Approx(0.0722).epsilon(0.0001 / 0.0722));
  CHECK(TopicQuality(0.0744, 0.9696) == doctest::Approx(0.0721).epsilon(0.0001 / 0.0721));
  CHECK(TopicQuality(0.3, 0) == 0.0);
}

TEST_CASE("relevance filter") {
  std::vector<std::string> ids = {"t1", "t2", "t3", "t4"};
  std::vector<Vector> thetas(4, Vector(3));
  thetas[0] << 0.9598, 0.0302, 0.01;
  thetas[1] << 0.4499, 0.4501, 0.1;
  thetas[2] << 0.45, 0.1, 0.45;
  thetas[3] << 0.2, 0.4, 0.4;
  FilterResult r = FilterThetas(ids, thetas, {0});
  REQUIRE(r.retained.size() == 2);
  CHECK(r.retained[0].id == "t1");
  CHECK(r.retained[0].max_score == 0.9598);
  CHECK(r.retained[1].id == "t3");
  // Argmax over all topics, ties to the lowest index.
  CHECK(r.retained[1].topic == 0);
  REQUIRE(r.dropped.size() == 2);
  CHECK(r.dropped[0].max_score == 0.4499);
  CHECK(r.dropped[0].topic == 1);
  CHECK(r.dropped[1].topic == 1);

  FilterResult all = FilterThetas(ids, thetas, {0, 1, 2}, 0.0);
  CHECK(all.retained.size() == 4);
  CHECK_THROWS_AS(FilterThetas(ids, thetas, {}), Error);
  CHECK_THROWS_AS(FilterThetas(ids, thetas, {3}), Error);

  // Raising the threshold never retains a dropped document.
  Rng rng(21);
  std::vector<Vector> random(200, Vector(4));
  std::vector<std::string> rid(200);
  for (int i = 0; i < 200; ++i) {
    for (int k = 0; k < 4; ++k) random[i](k) = rng.Uniform();
    random[i] /= random[i].sum();
    rid[i] = std::to_string(i);
  }
  std::set<std::string> prev;
  for (const auto &s : FilterThetas(rid, random, {1, 3}, 0.0).retained)
    prev.insert(s.id);
  for (double t = 0.05; t <= 1.0; t += 0.05) {
    std::set<std::string> now;
    for (const auto &s : FilterThetas(rid, random, {1, 3}, t).retained) {
      CHECK(prev.count(s.id) == 1);
      now.insert(s.id);
    }
    prev = now;
  }

  EtmModel m = SmallModel(4, 2, 2, 3, 1);
  FilterResult f = FilterByRelevance({"a", "b"}, {{}, {1, 2}}, m, {0, 1}, 0.0);
  CHECK(f.retained.size() == 1);
  CHECK(f.warnings.size() == 1);
}

TEST_CASE("bow corpus split") {
  std::vector<corpus::PreprocessedTweet> tweets;
  for (int i = 0; i < 100; ++i) {
    corpus::PreprocessedTweet t;
    t.id = "t" + std::to_string(i);
    t.tokens = {"refugee", i % 3 == 0 ? "border" : "oov"};
    if (i == 7) t.tokens = {"oov"};
    tweets.push_back(t);
  }
  BowCorpus c = BowCorpus::Build(tweets, {"border", "refugee"}, 4);
  CHECK(c.documents.size() == 99);
  CHECK(c.train.size() == 84);
  CHECK(c.test.size() == 9);
  CHECK(c.validation.size() == 6);
  std::set<std::size_t> all(c.train.begin(), c.train.end());
  all.insert(c.test.begin(), c.test.end());
  all.insert(c.validation.begin(), c.validation.end());
  CHECK(all.size() == 99);
  CHECK(c.documents[0] == std::vector<int>{1, 0});
  CHECK(c.documents[1] == std::vector<int>{1});
}

TEST_CASE("two disjoint vocabularies separate into two topics") {
  BowCorpus corpus = TwoGroupCorpus(200, 2);
  std::vector<std::vector<std::string>> sentences;
  for (const auto &doc : corpus.documents) {
    std::vector<std::string> s;
    for (int w : doc) s.push_back(corpus.vocabulary[w]);
    sentences.push_back(s);
  }
  embed::SkipGramConfig sg;
  sg.dim = 10;
  sg.min_count = 1;
  sg.epochs = 5;
  embed::SkipGramModel emb = embed::TrainSkipGram(sentences, sg);
  EtmConfig config;
  config.topics = 2;
  config.hidden = 300;
  config.epochs = 300;
  config.seed = 7;
  config.select_best_epoch = false;
  EtmModel init = InitModel(corpus.vocabulary, emb, 2, config.hidden, 7);
  TrainResult r = TrainEtm(corpus, init, config);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
  std::set<int> topics[2];
  int confident = 0;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    Vector theta = InferTheta(r.model, Counts(corpus.documents[d], 6));
    Eigen::Index arg;
    double best = theta.maxCoeff(&arg);
    confident += best >= 0.8;
    topics[d % 2].insert(static_cast<int>(arg));
  }
  CHECK(confident == 200);
  REQUIRE(topics[0].size() == 1);
  REQUIRE(topics[1].size() == 1);
  CHECK(*topics[0].begin() != *topics[1].begin());
  TopicDiagnostics diag = Diagnose(r, corpus);
  CHECK(diag.quality == doctest::Approx(diag.coherence * diag.diversity));
  CHECK(diag.val_perplexity > 1);
}

TEST_CASE("checkpoint round trip") {
  EtmModel m = SmallModel(7, 3, 2, 4, 5);
  std::string bytes = SerializeCheckpoint(m);
  EtmModel back = DeserializeCheckpoint(bytes);
  CHECK(back.vocabulary == m.vocabulary);
  CHECK((back.w1 - m.w1).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(SerializeCheckpoint(back) == bytes);
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes.substr(0, bytes.size() - 1)),
                  Error);
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes + "x"), Error);
  std::string report = TopicsReport(m, 3);
  CHECK(report.rfind("topic\ttop_words\n0\t", 0) == 0);
}
