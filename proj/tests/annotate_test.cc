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
#include <cstdio>
#include <fstream>
#include <set>

#include "doctest.h"
#include "mgkb/annotate.h"
#include "mgkb/random.h"

using namespace mgkb;
using namespace mgkb::annotate;

namespace {

std::vector<LabeledDoc> ClassDocs(const std::vector<std::size_t> &counts) {
  std::vector<LabeledDoc> docs;
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (std::size_t i = 0; i < counts[c]; ++i)
      docs.push_back({"c" + std::to_string(c) + "_" + std::to_string(i), {},
                      static_cast<int>(c)});
  return docs;
}

std::map<int, std::size_t> PerClass(const std::vector<LabeledDoc> &docs) {
  std::map<int, std::size_t> out;
  for (const auto &d : docs) ++out[d.label];
  return out;
}

embed::SkipGramModel Embeddings(
    const std::vector<std::pair<std::string, std::vector<double>>> &rows) {
  embed::SkipGramModel m;
  m.dim = static_cast<int>(rows[0].second.size());
  for (const auto &[term, vec] : rows) {
    m.vocab.Add(term, 5);
    m.input.insert(m.input.end(), vec.begin(), vec.end());
  }
  m.output.assign(m.input.size(), 0.0);
  return m;
}

std::string TempFile(const std::string &name, const std::string &contents) {
  std::string path = "/tmp/mgkb_annotate_" + name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST_CASE("stratified split") {
  SplitSets s = StratifiedSplit(ClassDocs({10, 10, 10}), 1);
  for (int c = 0; c < 3; ++c) {
    CHECK(PerClass(s.train)[c] == 8);
    CHECK(PerClass(s.validation)[c] == 1);
    CHECK(PerClass(s.test)[c] == 1);
  }
  SplitSets big = StratifiedSplit(ClassDocs({7813, 5480, 5935}), 7);
  auto test = PerClass(big.test);
  CHECK(test[0] == 782);
  CHECK(test[1] == 548);
  CHECK(test[2] == 594);
  std::set<std::string> ids;
  for (const auto *part : {&big.train, &big.validation, &big.test})
    for (const auto &d : *part) ids.insert(d.id);
  CHECK(ids.size() == 7813 + 5480 + 5935);

  SplitSets again = StratifiedSplit(ClassDocs({7813, 5480, 5935}), 7);
  REQUIRE(again.test.size() == big.test.size());
  for (std::size_t i = 0; i < big.test.size(); ++i)
    CHECK(again.test[i].id == big.test[i].id);

  SplitSets small = StratifiedSplit(ClassDocs({3}), 1);
  CHECK(small.train.size() == 1);
  CHECK(small.validation.size() == 1);
  CHECK(small.test.size() == 1);
  CHECK_THROWS_AS(StratifiedSplit(ClassDocs({5, 2}), 1), Error);
}

TEST_CASE("baseline gradient matches finite differences") {
  Rng rng(4);
  BaselineClassifier clf;
  clf.labels = {"a", "b", "c"};
  clf.weights.resize(3, 4);
  clf.bias.resize(3);
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 4; ++k) clf.weights(r, k) = rng.Uniform(-1, 1);
    clf.bias(r) = rng.Uniform(-1, 1);
  }
  Eigen::VectorXd x(4);
  x << 0.3, -1.2, 0.7, 0.05;
  for (int label = 0; label < 3; ++label) {
    Eigen::MatrixXd gw = Eigen::MatrixXd::Zero(3, 4);
    Eigen::VectorXd gb = Eigen::VectorXd::Zero(3);
    CrossEntropy(clf, x, label, &gw, &gb);
    const double h = 1e-6;
    Eigen::MatrixXd nw(3, 4);
    Eigen::VectorXd nb(3);
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 4; ++k) {
        double keep = clf.weights(r, k);
        clf.weights(r, k) = keep + h;
        double up = CrossEntropy(clf, x, label);
        clf.weights(r, k) = keep - h;
        double down = CrossEntropy(clf, x, label);
        clf.weights(r, k) = keep;
        nw(r, k) = (up - down) / (2 * h);
      }
      double keep = clf.bias(r);
      clf.bias(r) = keep + h;
      double up = CrossEntropy(clf, x, label);
      clf.bias(r) = keep - h;
      double down = CrossEntropy(clf, x, label);
      clf.bias(r) = keep;
      nb(r) = (up - down) / (2 * h);
    }
    CHECK((nw - gw).norm() / (nw.norm() + gw.norm()) < 1e-5);
    CHECK((nb - gb).norm() / (nb.norm() + gb.norm()) < 1e-5);
  }
}

TEST_CASE("baseline on a separable fixture") {
  auto emb = Embeddings({{"welcome", {1.0, 0.1}},
                         {"help", {0.8, -0.2}},
                         {"invade", {-1.0, 0.2}},
                         {"threat", {-0.7, -0.1}},
                         {"today", {0.0, 1.0}}});
  std::vector<LabeledDoc> train = {
      {"1", {"welcome", "today"}, 1}, {"2", {"help"}, 1},
      {"3", {"welcome", "help"}, 1},  {"4", {"invade", "today"}, 0},
      {"5", {"threat"}, 0},           {"6", {"threat", "invade"}, 0},
      {"7", {"unknown"}, 0}};
  std::vector<std::string> labels = {"negative", "positive"};

  BaselineConfig zero;
  zero.epochs = 0;
  TrainedBaseline init = TrainBaseline(train, emb, labels, 0, zero);
  auto x = AverageEmbedding(emb, {"help"});
  CHECK(CrossEntropy(init.classifier, *x, 1) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(init.warnings.size() == 1);

  BaselineConfig config;
  config.epochs = 200;
  TrainedBaseline t = TrainBaseline(train, emb, labels, 0, config);
  CHECK(t.epoch_loss.back() < t.epoch_loss.front());
  int correct = 0;
  for (std::size_t i = 0; i + 1 < train.size(); ++i)
    correct += Classify(t.classifier, emb, train[i].tokens).label == train[i].label;
  CHECK(correct == 6);
  Classification c = Classify(t.classifier, emb, {"help", "welcome"});
  CHECK(c.label == 1);
  CHECK(c.scores.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(Argmax(c.scores) == c.label);

  Classification none = Classify(t.classifier, emb, {"nothing"});
  CHECK(none.low_confidence);
  CHECK(none.label == 0);
  CHECK(none.scores(0) == none.scores(1));

  BaselineClassifier back =
      DeserializeClassifier(SerializeClassifier(t.classifier));
  CHECK(back.labels == labels);
  CHECK((back.weights - t.classifier.weights).norm() == 0.0);
}

TEST_CASE("argmax and tie order") {
  Eigen::VectorXd s(3);
  s << 0.2, 0.5, 0.3;
  CHECK(Argmax(s) == 1);
  s << 1.0 / 3, 1.0 / 3, 1.0 / 3;
  CHECK(Argmax(s) == 0);
  CHECK(Name(static_cast<Sentiment>(0)) == "negative");
  CHECK(Name(static_cast<Hate>(0)) == "hate");
  CHECK(ParseHate("offensive") == Hate::kOffensive);
  CHECK(!ParseSentiment("Positive"));
}

TEST_CASE("evaluate") {
  std::vector<int> gold = {0, 0, 1, 1, 2, 2};
  EvalReport perfect = Evaluate(gold, gold, 3);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.macro_precision == 1.0);
  CHECK(perfect.macro_recall == 1.0);
  CHECK(perfect.macro_f1 == 1.0);

  std::vector<int> balanced, ones(30, 1);
  for (int i = 0; i < 30; ++i) balanced.push_back(i % 3);
  EvalReport one = Evaluate(ones, balanced, 3);
  CHECK(one.accuracy == doctest::Approx(1.0 / 3));
  CHECK(one.macro_recall == doctest::Approx(1.0 / 3));

  // Confusion matrix [[5,1,0],[2,3,1],[0,0,8]] (rows gold).
  std::vector<int> g, p;
  const int cm[3][3] = {{5, 1, 0}, {2, 3, 1}, {0, 0, 8}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int n = 0; n < cm[r][c]; ++n) {
        g.push_back(r);
        p.push_back(c);
      }
  EvalReport e = Evaluate(p, g, 3);
  CHECK(e.accuracy == doctest::Approx(0.8));
  CHECK(e.precision[0] == doctest::Approx(5.0 / 7));
  CHECK(e.precision[1] == doctest::Approx(3.0 / 4));
  CHECK(e.precision[2] == doctest::Approx(8.0 / 9));
  CHECK(e.recall[0] == doctest::Approx(5.0 / 6));
  CHECK(e.recall[1] == doctest::Approx(0.5));
  CHECK(e.recall[2] == doctest::Approx(1.0));
  CHECK(e.f1[0] == doctest::Approx(10.0 / 13));
  CHECK(e.f1[1] == doctest::Approx(0.6));
  CHECK(e.f1[2] == doctest::Approx(16.0 / 17));
  CHECK(e.macro_precision == doctest::Approx((5.0 / 7 + 0.75 + 8.0 / 9) / 3));
  CHECK(e.macro_recall == doctest::Approx(7.0 / 9));
  CHECK(e.macro_f1 == doctest::Approx((10.0 / 13 + 0.6 + 16.0 / 17) / 3));
  for (int c = 0; c < 3; ++c) {
    std::size_t row = 0;
    for (auto v : e.confusion[c]) row += v;
    CHECK(row == static_cast<std::size_t>(cm[c][0] + cm[c][1] + cm[c][2]));
  }

  // Permutation invariance.
  Rng rng(3);
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);
  std::vector<int> g2, p2;
  for (std::size_t i : order) {
    g2.push_back(g[i]);
    p2.push_back(p[i]);
  }
  CHECK(Evaluate(p2, g2, 3).macro_f1 == e.macro_f1);

  // A class absent from gold does not enter the macro mean.
  EvalReport absent = Evaluate({0, 1, 2}, {0, 1, 1}, 3);
  CHECK(absent.macro_recall == doctest::Approx(0.75));

  CHECK_THROWS_AS(Evaluate({0}, {0, 1}, 3), Error);
}

TEST_CASE("random predictions give macro f1 near one third") {
  Rng rng(12);
  std::vector<int> gold, pred;
  for (int i = 0; i < 3000; ++i) {
    gold.push_back(i % 3);
    pred.push_back(static_cast<int>(rng.Below(3)));
  }
  EvalReport e = Evaluate(pred, gold, 3);
  CHECK(std::abs(e.macro_f1 - 1.0 / 3) <= 0.08);
  for (double v : {e.accuracy, e.macro_precision, e.macro_recall, e.macro_f1}) {
    CHECK(v >= 0);
    CHECK(v <= 1);
  }
}

TEST_CASE("external annotations") {
  std::map<std::string, Annotation> ann;
  for (const char *id : {"t1", "t2", "t3", "t4"}) ann[id] = Annotation{};
  Warnings w;
  CHECK(IngestExternalAnnotations(TempFile("empty.csv", ""), &ann, &w) == 0);
  std::string fixture =
      "id,sentiment,hate\nt1,negative,hate\nt2,positive,normal\n"
      "t4,neutral,offensive\nt9,negative,hate\n";
  CHECK(IngestExternalAnnotations(TempFile("three.csv", fixture), &ann, &w) ==
        3);
  CHECK(w.size() == 1);
  CHECK(ann["t1"].sentiment == Sentiment::kNegative);
  CHECK(ann["t1"].hate == Hate::kHate);
  CHECK(ann["t1"].external);
  CHECK(!ann["t3"].external);
  CHECK(ann["t4"].hate == Hate::kOffensive);
  try {
    IngestExternalAnnotations(
        TempFile("bad.csv", "id,sentiment,hate\nt1,negative,hate\nt2,happy,normal\n"),
        &ann, &w);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("aggregate attitudes") {
  AttitudeTable one =
      AggregateAttitudes({{"t1", "GB", 2016, Sentiment::kNegative, Hate::kHate}});
  REQUIRE(one.size() == 1);
  const AttitudeCell &cell = one.begin()->second;
  CHECK(cell.SentimentPercent()[0] == 100.0);
  CHECK(cell.HatePercent()[0] == 100.0);

  // Hate counts per year injected for GB; the aggregation must return them.
  const std::map<int, std::size_t> hate = {{2020, 5928}, {2019, 4698},
                                           {2013, 126}};
  std::vector<AnnotatedTweet> tweets;
  Rng rng(8);
  for (const auto &[year, n] : hate) {
    for (std::size_t i = 0; i < n; ++i)
      tweets.push_back({"h", "GB", year, Sentiment::kNegative, Hate::kHate});
    for (std::size_t i = 0; i < n / 3; ++i)
      tweets.push_back({"o", "GB", year,
                        static_cast<Sentiment>(rng.Below(3)),
                        rng.Below(2) ? Hate::kNormal : Hate::kOffensive});
  }
  AttitudeTable t = AggregateAttitudes(tweets);
  CHECK(t.size() == 3);
  for (const auto &[year, n] : hate) {
    const AttitudeCell &c = t.at({"GB", year});
    CHECK(c.hate_counts[0] == n);
    double s = 0, h = 0;
    for (double v : c.SentimentPercent()) s += v;
    for (double v : c.HatePercent()) h += v;
    CHECK(std::abs(s - 100) <= 1e-9);
    CHECK(std::abs(h - 100) <= 1e-9);
  }
  CHECK(AttitudesCsv(one).find("\nGB,2016,1,1,0,0,1,0,0,100,0,0,100,0,0\n") !=
        std::string::npos);
}
