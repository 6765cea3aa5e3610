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

#ifndef MGKB_ANNOTATE_H_
#define MGKB_ANNOTATE_H_

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mgkb/common.h"
#include "mgkb/corpus.h"
#include "mgkb/skipgram.h"

namespace mgkb {
namespace annotate {

// Enumerator order is the tie-breaking order.
enum class Sentiment { kNegative = 0, kNeutral = 1, kPositive = 2 };
enum class Hate { kHate = 0, kOffensive = 1, kNormal = 2 };

inline constexpr std::array<std::string_view, 3> kSentimentNames = {
    "negative", "neutral", "positive"};
inline constexpr std::array<std::string_view, 3> kHateNames = {
    "hate", "offensive", "normal"};

std::string_view Name(Sentiment s);
std::string_view Name(Hate h);
std::optional<Sentiment> ParseSentiment(std::string_view s);
std::optional<Hate> ParseHate(std::string_view s);

// A tokenized example with a class index into a label list.
struct LabeledDoc {
  std::string id;
  std::vector<std::string> tokens;
  int label = 0;
};

struct SplitSets {
  std::vector<LabeledDoc> train, validation, test;
};

// Per class: shuffle, then floor(n * train_ratio), floor(n * val_ratio), rest
// to test. Throws when a class has fewer than three examples.
SplitSets StratifiedSplit(const std::vector<LabeledDoc> &docs,
                          std::uint64_t seed, double train_ratio = 0.8,
                          double validation_ratio = 0.1);

// Reads a CSV with header "id,label,text"; text goes through the tweet
// preprocessor. Label strings must be members of `labels`.
std::vector<LabeledDoc> LoadLabeled(const std::string &path,
                                    const std::vector<std::string> &labels,
                                    const corpus::StopWords &stopwords);

// Multinomial logistic regression over averaged word embeddings.
struct BaselineClassifier {
  std::vector<std::string> labels;  // in tie-breaking order
  int fallback = 0;                 // label used when no token is known
  Eigen::MatrixXd weights;          // C x L
  Eigen::VectorXd bias;             // C

  int Classes() const { return static_cast<int>(labels.size()); }
};

struct BaselineConfig {
  int epochs = 50;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
};

struct TrainedBaseline {
  BaselineClassifier classifier;
  std::vector<double> epoch_loss;  // mean cross-entropy
  Warnings warnings;
};

// Mean of the known token vectors; nullopt when no token is known.
std::optional<Eigen::VectorXd> AverageEmbedding(
    const embed::SkipGramModel &model, const std::vector<std::string> &tokens);

// Softmax scores.
Eigen::VectorXd Scores(const BaselineClassifier &clf, const Eigen::VectorXd &x);

// Cross-entropy of one example; adds its gradient to the outputs when given.
double CrossEntropy(const BaselineClassifier &clf, const Eigen::VectorXd &x,
                    int label, Eigen::MatrixXd *grad_w = nullptr,
                    Eigen::VectorXd *grad_b = nullptr);

// Zero-initialized weights, per-example SGD in a seeded order.
TrainedBaseline TrainBaseline(const std::vector<LabeledDoc> &train,
                              const embed::SkipGramModel &model,
                              const std::vector<std::string> &labels,
                              int fallback, const BaselineConfig &config);

struct Classification {
  int label = 0;
  Eigen::VectorXd scores;
  bool low_confidence = false;  // no known token; uniform scores
};

// Argmax with ties to the lowest index.
int Argmax(const Eigen::VectorXd &scores);

Classification Classify(const BaselineClassifier &clf,
                        const embed::SkipGramModel &model,
                        const std::vector<std::string> &tokens);

std::string SerializeClassifier(const BaselineClassifier &clf);
BaselineClassifier DeserializeClassifier(std::string_view text);

struct EvalReport {
  double accuracy = 0;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  std::vector<double> precision, recall, f1;  // per class
  // confusion[gold][predicted]
  std::vector<std::vector<std::size_t>> confusion;
};

// Macro means run over the classes that occur in gold. A class that is never
// predicted has precision 0.
EvalReport Evaluate(const std::vector<int> &predicted,
                    const std::vector<int> &gold, int classes);

struct Annotation {
  Sentiment sentiment = Sentiment::kNeutral;
  Hate hate = Hate::kNormal;
  bool external = false;
  bool low_confidence = false;
};

// CSV with header "id,sentiment,hate". Rows for ids outside `annotations`
// are skipped with a warning; matching rows override. Returns the number of
// overridden tweets. Unknown labels are fatal with the row number.
std::size_t IngestExternalAnnotations(
    const std::string &path, std::map<std::string, Annotation> *annotations,
    Warnings *warnings);

struct AnnotatedTweet {
  std::string id;
  std::string country;
  int year = 0;
  Sentiment sentiment = Sentiment::kNeutral;
  Hate hate = Hate::kNormal;
};

struct AttitudeCell {
  std::size_t total = 0;
  std::array<std::size_t, 3> sentiment_counts{};
  std::array<std::size_t, 3> hate_counts{};
  std::array<double, 3> SentimentPercent() const;
  std::array<double, 3> HatePercent() const;
};

using AttitudeTable = std::map<std::pair<std::string, int>, AttitudeCell>;

AttitudeTable AggregateAttitudes(const std::vector<AnnotatedTweet> &tweets);

// "country,year,total,negative,neutral,positive,hate,offensive,normal" counts
// followed by the matching percentage columns.
std::string AttitudesCsv(const AttitudeTable &table);

}  // namespace annotate
}  // namespace mgkb

#endif  // MGKB_ANNOTATE_H_
