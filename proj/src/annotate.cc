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

#include "mgkb/annotate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "mgkb/random.h"

namespace mgkb {
namespace annotate {
namespace {

using json = nlohmann::json;

template <std::size_t N>
std::optional<int> IndexOf(const std::array<std::string_view, N> &names,
                           std::string_view s) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<int>(i);
  return std::nullopt;
}

std::vector<std::string> CsvRow(const std::string &path, std::size_t row,
                                const std::string &line) {
  try {
    return SplitCsv(line);
  } catch (const Error &e) {
    throw Error(path + ": row " + std::to_string(row) + ": " + e.what());
  }
}

template <std::size_t N>
std::array<double, 3> Percent(const std::array<std::size_t, N> &counts,
                              std::size_t total) {
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < N; ++i)
    out[i] = total == 0 ? 0.0 : 100.0 * counts[i] / static_cast<double>(total);
  return out;
}

}  // namespace

std::string_view Name(Sentiment s) { return kSentimentNames[static_cast<int>(s)]; }
std::string_view Name(Hate h) { return kHateNames[static_cast<int>(h)]; }

std::optional<Sentiment> ParseSentiment(std::string_view s) {
  auto i = IndexOf(kSentimentNames, s);
  if (!i) return std::nullopt;
  return static_cast<Sentiment>(*i);
}

std::optional<Hate> ParseHate(std::string_view s) {
  auto i = IndexOf(kHateNames, s);
  if (!i) return std::nullopt;
  return static_cast<Hate>(*i);
}

SplitSets StratifiedSplit(const std::vector<LabeledDoc> &docs,
                          std::uint64_t seed, double train_ratio,
                          double validation_ratio) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < docs.size(); ++i)
    by_class[docs[i].label].push_back(i);
  Rng rng(seed);
  SplitSets out;
  for (auto &[label, idx] : by_class) {
    std::size_t n = idx.size();
    if (n < 3)
      throw Error("class " + std::to_string(label) + " has " +
                  std::to_string(n) + " examples; a stratified split needs 3");
    rng.Shuffle(idx);
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(n * train_ratio + 1e-9));
    std::size_t n_val = static_cast<std::size_t>(
        std::floor(n * validation_ratio + 1e-9));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 2);
    n_val = std::clamp<std::size_t>(n_val, 1, n - n_train - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const LabeledDoc &d = docs[idx[i]];
      if (i < n_train) out.train.push_back(d);
      else if (i < n_train + n_val) out.validation.push_back(d);
      else out.test.push_back(d);
    }
  }
  return out;
}

std::vector<LabeledDoc> LoadLabeled(const std::string &path,
                                    const std::vector<std::string> &labels,
                                    const corpus::StopWords &stopwords) {
  std::vector<std::string> lines = ReadLines(path);
  if (lines.empty() || Trim(lines[0]) != "id,label,text")
    throw Error(path + ": expected header id,label,text");
  std::vector<LabeledDoc> docs;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (Trim(lines[r]).empty()) continue;
    auto cells = CsvRow(path, r + 1, lines[r]);
    if (cells.size() != 3)
      throw Error(path + ": row " + std::to_string(r + 1) +
                  ": expected 3 columns");
    auto it = std::find(labels.begin(), labels.end(), cells[1]);
    if (it == labels.end())
      throw Error(path + ": row " + std::to_string(r + 1) + ": unknown label '" +
                  cells[1] + "'");
    LabeledDoc d;
    d.id = cells[0];
    d.label = static_cast<int>(it - labels.begin());
    d.tokens = corpus::Preprocess(cells[2], stopwords);
    docs.push_back(std::move(d));
  }
  return docs;
}

std::optional<Eigen::VectorXd> AverageEmbedding(
    const embed::SkipGramModel &model,
    const std::vector<std::string> &tokens) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(model.dim);
  int n = 0;
  for (const auto &t : tokens) {
    int i = model.vocab.Index(t);
    if (i < 0) continue;
    auto v = model.Vector(i);
    for (int d = 0; d < model.dim; ++d) sum(d) += v[d];
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

Eigen::VectorXd Scores(const BaselineClassifier &clf,
                       const Eigen::VectorXd &x) {
  Eigen::VectorXd z = clf.weights * x + clf.bias;
  Eigen::VectorXd e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

double CrossEntropy(const BaselineClassifier &clf, const Eigen::VectorXd &x,
                    int label, Eigen::MatrixXd *grad_w,
                    Eigen::VectorXd *grad_b) {
  Eigen::VectorXd p = Scores(clf, x);
  if (grad_w || grad_b) {
    Eigen::VectorXd d = p;
    d(label) -= 1;
    if (grad_w) *grad_w += d * x.transpose();
    if (grad_b) *grad_b += d;
  }
  return -std::log(p(label));
}

TrainedBaseline TrainBaseline(const std::vector<LabeledDoc> &train,
                              const embed::SkipGramModel &model,
                              const std::vector<std::string> &labels,
                              int fallback, const BaselineConfig &config) {
  if (train.empty()) throw Error("baseline training set is empty");
  if (labels.size() < 2) throw Error("baseline needs at least two labels");
  const int c = static_cast<int>(labels.size());
  TrainedBaseline out;
  out.classifier.labels = labels;
  out.classifier.fallback = fallback;
  out.classifier.weights = Eigen::MatrixXd::Zero(c, model.dim);
  out.classifier.bias = Eigen::VectorXd::Zero(c);
  std::vector<std::pair<Eigen::VectorXd, int>> examples;
  for (const auto &d : train) {
    if (d.label < 0 || d.label >= c)
      throw Error(d.id + ": label index out of range");
    auto x = AverageEmbedding(model, d.tokens);
    if (!x) {
      out.warnings.Add(d.id + ": no in-vocabulary tokens, skipped");
      continue;
    }
    examples.emplace_back(std::move(*x), d.label);
  }
  if (examples.empty()) throw Error("no usable baseline training example");
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  BaselineClassifier &clf = out.classifier;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    for (std::size_t i : order) {
      Eigen::MatrixXd gw = Eigen::MatrixXd::Zero(c, model.dim);
      Eigen::VectorXd gb = Eigen::VectorXd::Zero(c);
      CrossEntropy(clf, examples[i].first, examples[i].second, &gw, &gb);
      clf.weights -= config.learning_rate * gw;
      clf.bias -= config.learning_rate * gb;
    }
    double loss = 0;
    for (const auto &[x, y] : examples) loss += CrossEntropy(clf, x, y);
    out.epoch_loss.push_back(loss / static_cast<double>(examples.size()));
  }
  if (!clf.weights.allFinite() || !clf.bias.allFinite())
    throw Error("baseline parameters became non-finite");
  return out;
}

int Argmax(const Eigen::VectorXd &scores) {
  int best = 0;
  for (int i = 1; i < scores.size(); ++i)
    if (scores(i) > scores(best)) best = i;
  return best;
}

Classification Classify(const BaselineClassifier &clf,
                        const embed::SkipGramModel &model,
                        const std::vector<std::string> &tokens) {
  Classification out;
  auto x = AverageEmbedding(model, tokens);
  if (!x) {
    out.scores = Eigen::VectorXd::Constant(clf.Classes(), 1.0 / clf.Classes());
    out.label = clf.fallback;
    out.low_confidence = true;
    return out;
  }
  out.scores = Scores(clf, *x);
  out.label = Argmax(out.scores);
  return out;
}

std::string SerializeClassifier(const BaselineClassifier &clf) {
  json j;
  j["labels"] = clf.labels;
  j["fallback"] = clf.fallback;
  json w = json::array();
  for (int r = 0; r < clf.weights.rows(); ++r) {
    std::vector<double> row(clf.weights.cols());
    for (int c = 0; c < clf.weights.cols(); ++c) row[c] = clf.weights(r, c);
    w.push_back(row);
  }
  j["weights"] = w;
  j["bias"] = std::vector<double>(clf.bias.data(),
                                  clf.bias.data() + clf.bias.size());
  return j.dump(1) + "\n";
}

BaselineClassifier DeserializeClassifier(std::string_view text) {
  try {
    json j = json::parse(text);
    BaselineClassifier clf;
    clf.labels = j.at("labels").get<std::vector<std::string>>();
    clf.fallback = j.at("fallback").get<int>();
    auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    auto bias = j.at("bias").get<std::vector<double>>();
    const int c = clf.Classes();
    if (static_cast<int>(rows.size()) != c || static_cast<int>(bias.size()) != c)
      throw Error("classifier shape does not match its labels");
    const int l = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    clf.weights.resize(c, l);
    clf.bias.resize(c);
    for (int r = 0; r < c; ++r) {
      if (static_cast<int>(rows[r].size()) != l)
        throw Error("ragged classifier weights");
      for (int k = 0; k < l; ++k) clf.weights(r, k) = rows[r][k];
      clf.bias(r) = bias[r];
    }
    return clf;
  } catch (const json::exception &e) {
    throw Error(std::string("bad classifier file: ") + e.what());
  }
}

EvalReport Evaluate(const std::vector<int> &predicted,
                    const std::vector<int> &gold, int classes) {
  if (predicted.size() != gold.size())
    throw Error("predictions and gold differ in length (" +
                std::to_string(predicted.size()) + " vs " +
                std::to_string(gold.size()) + ")");
  EvalReport r;
  r.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= classes || predicted[i] < 0 ||
        predicted[i] >= classes)
      throw Error("label index out of range at example " + std::to_string(i));
    ++r.confusion[gold[i]][predicted[i]];
    correct += gold[i] == predicted[i];
  }
  r.accuracy = gold.empty() ? 0.0 : static_cast<double>(correct) / gold.size();
  r.precision.assign(classes, 0);
  r.recall.assign(classes, 0);
  r.f1.assign(classes, 0);
  int present = 0;
  for (int c = 0; c < classes; ++c) {
    std::size_t tp = r.confusion[c][c], gold_c = 0, pred_c = 0;
    for (int k = 0; k < classes; ++k) {
      gold_c += r.confusion[c][k];
      pred_c += r.confusion[k][c];
    }
    r.precision[c] = pred_c == 0 ? 0.0 : static_cast<double>(tp) / pred_c;
    r.recall[c] = gold_c == 0 ? 0.0 : static_cast<double>(tp) / gold_c;
    double ps = r.precision[c] + r.recall[c];
    r.f1[c] = ps == 0 ? 0.0 : 2 * r.precision[c] * r.recall[c] / ps;
    if (gold_c == 0) continue;
    ++present;
    r.macro_precision += r.precision[c];
    r.macro_recall += r.recall[c];
    r.macro_f1 += r.f1[c];
  }
  if (present > 0) {
    r.macro_precision /= present;
    r.macro_recall /= present;
    r.macro_f1 /= present;
  }
  return r;
}

std::size_t IngestExternalAnnotations(
    const std::string &path, std::map<std::string, Annotation> *annotations,
    Warnings *warnings) {
  std::vector<std::string> lines = ReadLines(path);
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) return 0;
  if (Trim(lines[0]) != "id,sentiment,hate")
    throw Error(path + ": expected header id,sentiment,hate");
  std::size_t overridden = 0;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string row = std::to_string(r + 1);
    if (Trim(lines[r]).empty()) continue;
    auto cells = CsvRow(path, r + 1, lines[r]);
    if (cells.size() != 3)
      throw Error(path + ": row " + row + ": expected 3 columns");
    auto s = ParseSentiment(cells[1]);
    if (!s)
      throw Error(path + ": row " + row + ": unknown sentiment '" + cells[1] +
                  "'");
    auto h = ParseHate(cells[2]);
    if (!h)
      throw Error(path + ": row " + row + ": unknown hate label '" + cells[2] +
                  "'");
    auto it = annotations->find(cells[0]);
    if (it == annotations->end()) {
      if (warnings)
        warnings->Add(path + ": row " + row + ": id " + cells[0] +
                      " not in corpus, skipped");
      continue;
    }
    it->second = Annotation{*s, *h, true, false};
    ++overridden;
  }
  return overridden;
}

std::array<double, 3> AttitudeCell::SentimentPercent() const {
  return Percent(sentiment_counts, total);
}

std::array<double, 3> AttitudeCell::HatePercent() const {
  return Percent(hate_counts, total);
}

AttitudeTable AggregateAttitudes(const std::vector<AnnotatedTweet> &tweets) {
  AttitudeTable table;
  for (const auto &t : tweets) {
    AttitudeCell &cell = table[{t.country, t.year}];
    ++cell.total;
    ++cell.sentiment_counts[static_cast<int>(t.sentiment)];
    ++cell.hate_counts[static_cast<int>(t.hate)];
  }
  return table;
}

std::string AttitudesCsv(const AttitudeTable &table) {
  std::string out =
      "country,year,total,negative,neutral,positive,hate,offensive,normal,"
      "negative_pct,neutral_pct,positive_pct,hate_pct,offensive_pct,"
      "normal_pct\n";
  for (const auto &[key, cell] : table) {
    out += key.first + "," + std::to_string(key.second) + "," +
           std::to_string(cell.total);
    for (auto c : cell.sentiment_counts) out += "," + std::to_string(c);
    for (auto c : cell.hate_counts) out += "," + std::to_string(c);
    for (double p : cell.SentimentPercent()) out += "," + FormatDouble(p);
    for (double p : cell.HatePercent()) out += "," + FormatDouble(p);
    out += '\n';
  }
  return out;
}

}  // namespace annotate
}  // namespace mgkb
