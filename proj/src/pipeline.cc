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

#include "mgkb/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mgkb/annotate.h"
#include "mgkb/corpus.h"
#include "mgkb/entity_link.h"
#include "mgkb/etm.h"
#include "mgkb/indicators.h"
#include "mgkb/kb.h"
#include "mgkb/lexicon.h"
#include "mgkb/rdf.h"
#include "mgkb/skipgram.h"

namespace mgkb {
namespace pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Tweet as passed between stages, one JSON object per line.
struct StageTweet {
  std::string id, created_at, country;
  int year = 0;
  std::optional<std::string> place_name;
  std::optional<corpus::GeoPoint> point;
  std::optional<long> reply_count;
  std::vector<std::string> tokens, hashtag_tokens, hashtag_labels;
  std::optional<int> topic;
  std::optional<double> relevance;
  std::optional<std::string> sentiment, hate;
  bool low_confidence = false, external = false;
};

json ToJson(const StageTweet &t) {
  json j;
  j["id"] = t.id;
  j["created_at"] = t.created_at;
  j["year"] = t.year;
  j["country"] = t.country;
  if (t.place_name) j["place_name"] = *t.place_name;
  if (t.point) j["point"] = {t.point->latitude, t.point->longitude};
  if (t.reply_count) j["reply_count"] = *t.reply_count;
  j["tokens"] = t.tokens;
  j["hashtag_tokens"] = t.hashtag_tokens;
  j["hashtag_labels"] = t.hashtag_labels;
  if (t.topic) j["topic"] = *t.topic;
  if (t.relevance) j["relevance"] = *t.relevance;
  if (t.sentiment) j["sentiment"] = *t.sentiment;
  if (t.hate) j["hate"] = *t.hate;
  if (t.low_confidence) j["low_confidence"] = true;
  if (t.external) j["external"] = true;
  return j;
}

StageTweet FromJson(const json &j) {
  StageTweet t;
  t.id = j.at("id");
  t.created_at = j.at("created_at");
  t.year = j.at("year");
  t.country = j.at("country");
  if (j.contains("place_name")) t.place_name = j["place_name"].get<std::string>();
  if (j.contains("point")) t.point = corpus::GeoPoint{j["point"][0], j["point"][1]};
  if (j.contains("reply_count")) t.reply_count = j["reply_count"].get<long>();
  t.tokens = j.at("tokens").get<std::vector<std::string>>();
  t.hashtag_tokens = j.at("hashtag_tokens").get<std::vector<std::string>>();
  t.hashtag_labels = j.at("hashtag_labels").get<std::vector<std::string>>();
  if (j.contains("topic")) t.topic = j["topic"].get<int>();
  if (j.contains("relevance")) t.relevance = j["relevance"].get<double>();
  if (j.contains("sentiment")) t.sentiment = j["sentiment"].get<std::string>();
  if (j.contains("hate")) t.hate = j["hate"].get<std::string>();
  t.low_confidence = j.value("low_confidence", false);
  t.external = j.value("external", false);
  return t;
}

std::vector<json> ReadJsonl(const std::string &path) {
  std::vector<json> out;
  std::size_t n = 0;
  for (const auto &line : ReadLines(path)) {
    ++n;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception &e) {
      throw Error(path + ": line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<StageTweet> ReadTweets(const std::string &path) {
  std::vector<StageTweet> out;
  for (const auto &j : ReadJsonl(path)) {
    try {
      out.push_back(FromJson(j));
    } catch (const json::exception &e) {
      throw Error(path + ": malformed tweet: " + e.what());
    }
  }
  return out;
}

std::string Jsonl(const std::vector<json> &rows) {
  std::string out;
  for (const auto &r : rows) out += r.dump() + "\n";
  return out;
}

std::string TweetsJsonl(const std::vector<StageTweet> &tweets) {
  std::string out;
  for (const auto &t : tweets) out += ToJson(t).dump() + "\n";
  return out;
}

corpus::PreprocessedTweet AsPreprocessed(const StageTweet &t) {
  corpus::PreprocessedTweet p;
  p.id = t.id;
  p.tokens = t.tokens;
  p.hashtag_tokens = t.hashtag_tokens;
  p.hashtag_labels = t.hashtag_labels;
  p.year = t.year;
  return p;
}

std::vector<corpus::PreprocessedTweet> AsPreprocessed(const std::vector<StageTweet> &ts) {
  std::vector<corpus::PreprocessedTweet> out;
  for (const auto &t : ts) out.push_back(AsPreprocessed(t));
  return out;
}

std::vector<std::vector<std::string>> Sentences(const std::vector<StageTweet> &ts) {
  std::vector<std::vector<std::string>> out;
  for (const auto &t : ts) out.push_back(t.tokens);
  return out;
}

// Tracks inputs and outputs of one stage and writes its manifest.
class Stage {
 public:
  Stage(std::string name, const PipelineConfig &config)
      : name_(std::move(name)), config_(config), dir_(fs::path(config.out) / name_) {
    fs::create_directories(dir_);
  }

  // Artifact of an earlier stage, checked against that stage's manifest.
  std::string Upstream(const std::string &stage, const std::string &file) {
    std::string rel = stage + "/" + file;
    fs::path path = fs::path(config_.out) / rel;
    if (!fs::exists(path))
      throw Error("missing artifact " + rel + ": run `" + stage + "` first");
    fs::path manifest = fs::path(config_.out) / stage / "manifest.json";
    std::string hash = Sha256Hex(ReadFile(path.string()));
    std::string recorded;
    if (fs::exists(manifest)) {
      json m = json::parse(ReadFile(manifest.string()));
      recorded = m["outputs"].value(rel, "");
    }
    if (recorded != hash)
      throw Error("artifact " + rel + " does not match the " + stage +
                  " manifest: rerun `" + stage + "`");
    inputs_[rel] = hash;
    return path.string();
  }

  // File named in the config's paths section.
  std::string External(const std::string &key) {
    std::string path = config_.Path(key);
    inputs_[config_.raw["paths"][key].get<std::string>()] = Sha256Hex(ReadFile(path));
    return path;
  }

  std::string Output(const std::string &file) {
    outputs_.push_back(file);
    return (dir_ / file).string();
  }

  void Write(const std::string &file, std::string_view contents) {
    WriteFile(Output(file), contents);
  }

  json &counts() { return counts_; }
  Warnings &warnings() { return warnings_; }
  const fs::path &dir() const { return dir_; }

  StageResult Finish(json config_snapshot) {
    json outputs = json::object();
    for (const auto &f : outputs_)
      outputs[name_ + "/" + f] = Sha256Hex(ReadFile((dir_ / f).string()));
    config_snapshot["seed"] = config_.seed;
    config_snapshot["threads"] = config_.threads;
    StageResult r;
    r.stage = name_;
    r.manifest = {{"stage", name_},
                  {"inputs", inputs_},
                  {"outputs", outputs},
                  {"config", config_snapshot},
                  {"counts", counts_},
                  {"warnings", warnings_.messages}};
    r.warnings = warnings_;
    WriteFile((dir_ / "manifest.json").string(), r.manifest.dump(2) + "\n");
    return r;
  }

 private:
  std::string name_;
  const PipelineConfig &config_;
  fs::path dir_;
  json inputs_ = json::object();
  std::vector<std::string> outputs_;
  json counts_ = json::object();
  Warnings warnings_;
};

embed::SkipGramConfig SkipGramFrom(const PipelineConfig &config) {
  const json &s = config.Section("skipgram");
  embed::SkipGramConfig c;
  c.dim = s.value("dim", c.dim);
  c.window = s.value("window", c.window);
  c.negatives = s.value("negatives", c.negatives);
  c.min_count = s.value("min_count", c.min_count);
  c.epochs = s.value("epochs", c.epochs);
  c.lr_start = s.value("lr_start", c.lr_start);
  c.lr_end = s.value("lr_end", c.lr_end);
  c.seed = config.seed;
  c.threads = config.threads;
  return c;
}

json SkipGramJson(const embed::SkipGramConfig &c) {
  return {{"dim", c.dim},           {"window", c.window},   {"negatives", c.negatives},
          {"min_count", c.min_count}, {"epochs", c.epochs}, {"lr_start", c.lr_start},
          {"lr_end", c.lr_end}};
}

double EtmThreshold(const PipelineConfig &config) {
  return config.Section("etm").value("threshold", 0.45);
}

StageResult Ingest(const PipelineConfig &config) {
  Stage st("ingest", config);
  auto dump = corpus::LoadDump(st.External("dump"));
  auto gazetteer = corpus::Gazetteer::Load(st.External("gazetteer"));
  auto stopwords = corpus::LoadStopWords(st.External("stopwords"));
  for (const auto &w : dump.warnings.messages) st.warnings().Add("dump " + w);
  std::vector<StageTweet> kept;
  std::size_t outside = 0, short_text = 0;
  for (const auto &rec : dump.records) {
    auto country = corpus::ResolveCountry(rec.geo, gazetteer);
    if (!country) {
      ++outside;
      continue;
    }
    auto pre = corpus::PreprocessTweet(rec, stopwords);
    if (!pre) {
      ++short_text;
      continue;
    }
    StageTweet t;
    t.id = rec.id;
    t.created_at = rec.created_at;
    t.year = rec.Year();
    t.country = *country;
    t.place_name = rec.geo.place_name;
    t.point = rec.geo.point;
    t.reply_count = rec.reply_count;
    t.tokens = pre->tokens;
    t.hashtag_tokens = pre->hashtag_tokens;
    t.hashtag_labels = pre->hashtag_labels;
    kept.push_back(std::move(t));
  }
  st.Write("tweets.jsonl", TweetsJsonl(kept));
  st.counts() = {{"records", dump.records.size()},
                 {"malformed_lines", dump.warnings.size()},
                 {"outside_destination_countries", outside},
                 {"too_short", short_text},
                 {"tweets", kept.size()}};
  return st.Finish({{"dump_format", "jsonl"}});
}

bool MatchesLexicon(const StageTweet &t, const lexicon::Lexicon &lex) {
  for (const auto &label : t.hashtag_labels)
    if (lex.hashtags.count(AsciiLower(label))) return true;
  for (const auto &tok : t.hashtag_tokens)
    if (lex.hashtags.count(tok)) return true;
  for (const auto &kw : lex.keywords) {
    std::vector<std::string> parts;
    for (const auto &p : Split(kw, ' '))
      if (!p.empty()) parts.push_back(p);
    if (parts.empty()) continue;
    auto it = std::search(t.tokens.begin(), t.tokens.end(), parts.begin(), parts.end());
    if (it != t.tokens.end()) return true;
  }
  return false;
}

StageResult Expand(const PipelineConfig &config) {
  Stage st("expand", config);
  auto tweets = ReadTweets(st.Upstream("ingest", "tweets.jsonl"));
  auto stopwords = corpus::LoadStopWords(st.External("stopwords"));
  const json &lc = config.Section("lexicon");
  auto seeds = lc.value("seeds", std::vector<std::string>{"immigration", "refugee"});
  int k = lc.value("k", 50);
  std::size_t min_tweets = lc.value("min_hashtag_tweets", 100);

  json snapshot = {{"seeds", seeds}, {"k", k}, {"min_hashtag_tweets", min_tweets}};
  embed::SkipGramModel model;
  if (auto path = config.OptionalPath("expansion_model")) {
    model = embed::LoadModel(st.External("expansion_model"));
    snapshot["expansion_model"] = "file";
  } else {
    // Stand-in for a general-purpose pretrained model.
    embed::SkipGramConfig sg = SkipGramFrom(config);
    model = embed::TrainSkipGram(Sentences(tweets), sg);
    snapshot["expansion_model"] = SkipGramJson(sg);
  }
  auto rankings = lexicon::ExpandSeeds(seeds, model, k);
  std::vector<lexicon::Candidate> candidates;
  json ranking_json = json::object();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    candidates.push_back({seeds[i], lexicon::Origin::kSeed});
    json list = json::array();
    for (const auto &[term, sim] : rankings[i]) {
      candidates.push_back({term, lexicon::Origin::kEmbeddingExpansion});
      list.push_back({{"term", term}, {"cosine", sim}});
    }
    ranking_json[seeds[i]] = list;
  }
  auto lex = lexicon::ApplyAllowlist(candidates, st.External("keyword_allowlist"),
                                     lexicon::Target::kKeywords, &stopwords);
  auto popular = lexicon::SelectPopularHashtags(AsPreprocessed(tweets), min_tweets);
  std::vector<lexicon::Candidate> tag_candidates;
  for (const auto &[tag, n] : popular)
    tag_candidates.push_back({tag, lexicon::Origin::kHashtagMining});
  lex.Merge(lexicon::ApplyAllowlist(tag_candidates, st.External("hashtag_allowlist"),
                                    lexicon::Target::kHashtags, &stopwords));

  std::vector<StageTweet> matched;
  for (const auto &t : tweets)
    if (MatchesLexicon(t, lex)) matched.push_back(t);

  json lj;
  auto entries = [&](const std::set<std::string> &terms) {
    json arr = json::array();
    for (const auto &term : terms) {
      auto it = lex.provenance.find(term);
      arr.push_back({{"term", term},
                     {"origin", it == lex.provenance.end()
                                    ? "manual"
                                    : std::string(lexicon::OriginName(it->second))}});
    }
    return arr;
  };
  lj["keywords"] = entries(lex.keywords);
  lj["hashtags"] = entries(lex.hashtags);
  lj["rankings"] = ranking_json;
  json pop = json::array();
  for (const auto &[tag, n] : popular) pop.push_back({{"hashtag", tag}, {"tweets", n}});
  lj["popular_hashtags"] = pop;
  st.Write("lexicon.json", lj.dump(2) + "\n");
  st.Write("tweets.jsonl", TweetsJsonl(matched));
  st.counts() = {{"input_tweets", tweets.size()},
                 {"keywords", lex.keywords.size()},
                 {"hashtags", lex.hashtags.size()},
                 {"popular_hashtags", popular.size()},
                 {"matched_tweets", matched.size()}};
  return st.Finish(snapshot);
}

StageResult Embed(const PipelineConfig &config) {
  Stage st("embed", config);
  auto tweets = ReadTweets(st.Upstream("expand", "tweets.jsonl"));
  embed::SkipGramConfig sg = SkipGramFrom(config);
  auto model = embed::TrainSkipGram(Sentences(tweets), sg);
  embed::SaveModel(model, st.Output("skipgram.bin"));
  st.counts() = {{"sentences", tweets.size()},
                 {"vocabulary", model.vocab.size()},
                 {"epoch_loss", model.epoch_loss}};
  return st.Finish({{"skipgram", SkipGramJson(sg)}});
}

etm::EtmConfig EtmFrom(const PipelineConfig &config) {
  const json &e = config.Section("etm");
  etm::EtmConfig c;
  c.topics = e.value("topics", c.topics);
  c.hidden = e.value("hidden", c.hidden);
  c.batch = e.value("batch", c.batch);
  c.epochs = e.value("epochs", c.epochs);
  c.learning_rate = e.value("learning_rate", c.learning_rate);
  c.select_best_epoch = e.value("select_best_epoch", c.select_best_epoch);
  c.seed = config.seed;
  return c;
}

StageResult EtmTrain(const PipelineConfig &config) {
  Stage st("etm-train", config);
  auto tweets = ReadTweets(st.Upstream("expand", "tweets.jsonl"));
  auto sg = embed::LoadModel(st.Upstream("embed", "skipgram.bin"));
  etm::EtmConfig ec = EtmFrom(config);
  double max_df = config.Section("etm").value("max_df", 0.70);
  auto pre = AsPreprocessed(tweets);
  // Terms kept by the document-frequency cut that also have an embedding.
  std::set<std::string> vocab;
  for (const auto &term : corpus::PruneByDocumentFrequency(pre, max_df))
    if (sg.vocab.Contains(term)) vocab.insert(term);
  auto bow = etm::BowCorpus::Build(pre, vocab, config.seed);
  auto init = etm::InitModel(bow.vocabulary, sg, ec.topics, ec.hidden, config.seed);
  auto trained = etm::TrainEtm(bow, std::move(init), ec);
  for (const auto &w : trained.warnings.messages) st.warnings().Add(w);
  etm::SaveCheckpoint(trained.model, st.Output("model.bin"));
  st.Write("topics.tsv", etm::TopicsReport(trained.model, 20));
  auto diag = etm::Diagnose(trained, bow);
  json dj = {{"coherence", diag.coherence},   {"diversity", diag.diversity},
             {"quality", diag.quality},       {"best_epoch", diag.best_epoch},
             {"epoch_loss", trained.epoch_loss}};
  json ppl = json::array();
  for (double p : trained.val_perplexity) ppl.push_back(std::isfinite(p) ? json(p) : json());
  dj["val_perplexity"] = ppl;
  dj["best_val_perplexity"] = std::isfinite(diag.val_perplexity) ? json(diag.val_perplexity)
                                                                 : json();
  st.Write("diagnostics.json", dj.dump(2) + "\n");
  st.counts() = {{"documents", bow.documents.size()}, {"vocabulary", bow.VocabSize()},
                 {"train", bow.train.size()},         {"test", bow.test.size()},
                 {"validation", bow.validation.size()}};
  return st.Finish({{"etm",
                     {{"topics", ec.topics},
                      {"hidden", ec.hidden},
                      {"batch", ec.batch},
                      {"epochs", ec.epochs},
                      {"learning_rate", ec.learning_rate},
                      {"select_best_epoch", ec.select_best_epoch},
                      {"max_df", max_df}}}});
}

StageResult EtmFilter(const PipelineConfig &config) {
  Stage st("etm-filter", config);
  auto model = etm::LoadCheckpoint(st.Upstream("etm-train", "model.bin"));
  auto tweets = ReadTweets(st.Upstream("expand", "tweets.jsonl"));
  auto relevant = etm::LoadRelevantTopics(st.External("relevant_topics"));
  double threshold = EtmThreshold(config);
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < model.vocabulary.size(); ++i)
    index[model.vocabulary[i]] = static_cast<int>(i);
  std::vector<std::string> ids;
  std::vector<std::vector<int>> docs;
  for (const auto &t : tweets) {
    ids.push_back(t.id);
    std::vector<int> doc;
    for (const auto &tok : t.tokens) {
      auto it = index.find(tok);
      if (it != index.end()) doc.push_back(it->second);
    }
    docs.push_back(std::move(doc));
  }
  auto result = etm::FilterByRelevance(ids, docs, model, relevant, threshold);
  for (const auto &w : result.warnings.messages) st.warnings().Add(w);
  std::map<std::string, const etm::RelevanceScore *> kept;
  for (const auto &r : result.retained) kept[r.id] = &r;
  std::vector<StageTweet> out;
  for (auto t : tweets) {
    auto it = kept.find(t.id);
    if (it == kept.end()) continue;
    t.topic = it->second->topic;
    t.relevance = it->second->max_score;
    out.push_back(std::move(t));
  }
  std::string scores = "id\ttopic\tmax_score\tretained\n";
  auto row = [&](const etm::RelevanceScore &r, bool retained) {
    scores += r.id + "\t" + std::to_string(r.topic) + "\t" + FormatDouble(r.max_score) +
              "\t" + (retained ? "1" : "0") + "\n";
  };
  for (const auto &r : result.retained) row(r, true);
  for (const auto &r : result.dropped) row(r, false);
  st.Write("tweets.jsonl", TweetsJsonl(out));
  st.Write("scores.tsv", scores);
  st.counts() = {{"input_tweets", tweets.size()},
                 {"retained", result.retained.size()},
                 {"dropped", result.dropped.size()},
                 {"no_vocabulary", tweets.size() - result.retained.size() -
                                       result.dropped.size()}};
  std::vector<int> rel(relevant.begin(), relevant.end());
  return st.Finish({{"threshold", threshold}, {"relevant_topics", rel}});
}

json EvalJson(const annotate::EvalReport &r, const std::vector<std::string> &labels) {
  return {{"labels", labels},
          {"accuracy", r.accuracy},
          {"macro_precision", r.macro_precision},
          {"macro_recall", r.macro_recall},
          {"macro_f1", r.macro_f1},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"confusion", r.confusion}};
}

struct TaskResult {
  annotate::BaselineClassifier classifier;
  json eval;
};

TaskResult TrainTask(Stage &st, const std::string &key, const std::vector<std::string> &labels,
                     int fallback, const embed::SkipGramModel &sg,
                     const corpus::StopWords &stopwords, const annotate::BaselineConfig &bc,
                     std::uint64_t seed) {
  auto docs = annotate::LoadLabeled(st.External(key), labels, stopwords);
  auto split = annotate::StratifiedSplit(docs, seed);
  auto trained = annotate::TrainBaseline(split.train, sg, labels, fallback, bc);
  for (const auto &w : trained.warnings.messages) st.warnings().Add(key + ": " + w);
  std::vector<int> predicted, gold;
  for (const auto &d : split.test) {
    predicted.push_back(annotate::Classify(trained.classifier, sg, d.tokens).label);
    gold.push_back(d.label);
  }
  json eval = EvalJson(annotate::Evaluate(predicted, gold, static_cast<int>(labels.size())),
                       labels);
  eval["split"] = {{"train", split.train.size()},
                   {"validation", split.validation.size()},
                   {"test", split.test.size()}};
  eval["epoch_loss"] = trained.epoch_loss;
  return {trained.classifier, eval};
}

StageResult Annotate(const PipelineConfig &config) {
  Stage st("annotate", config);
  auto tweets = ReadTweets(st.Upstream("etm-filter", "tweets.jsonl"));
  auto sg = embed::LoadModel(st.Upstream("embed", "skipgram.bin"));
  auto stopwords = corpus::LoadStopWords(st.External("stopwords"));
  const json &b = config.Section("baseline");
  annotate::BaselineConfig bc;
  bc.epochs = b.value("epochs", bc.epochs);
  bc.learning_rate = b.value("learning_rate", bc.learning_rate);
  bc.seed = config.seed;

  std::vector<std::string> sentiment_labels(annotate::kSentimentNames.begin(),
                                            annotate::kSentimentNames.end());
  std::vector<std::string> hate_labels(annotate::kHateNames.begin(), annotate::kHateNames.end());
  auto sentiment = TrainTask(st, "sentiment_train", sentiment_labels,
                             static_cast<int>(annotate::Sentiment::kNeutral), sg, stopwords,
                             bc, config.seed);
  auto hate = TrainTask(st, "hate_train", hate_labels,
                        static_cast<int>(annotate::Hate::kNormal), sg, stopwords, bc,
                        config.seed);

  std::map<std::string, annotate::Annotation> labels;
  std::size_t low_confidence = 0;
  for (const auto &t : tweets) {
    auto s = annotate::Classify(sentiment.classifier, sg, t.tokens);
    auto h = annotate::Classify(hate.classifier, sg, t.tokens);
    annotate::Annotation a;
    a.sentiment = static_cast<annotate::Sentiment>(s.label);
    a.hate = static_cast<annotate::Hate>(h.label);
    a.low_confidence = s.low_confidence || h.low_confidence;
    low_confidence += a.low_confidence;
    labels[t.id] = a;
  }
  // External labels replace the baseline's for the tweets they name.
  std::size_t overridden = 0;
  if (config.OptionalPath("external_annotations")) {
    overridden = annotate::IngestExternalAnnotations(st.External("external_annotations"),
                                                     &labels, &st.warnings());
  }
  std::vector<annotate::AnnotatedTweet> annotated;
  for (auto &t : tweets) {
    const annotate::Annotation &a = labels[t.id];
    t.sentiment = std::string(annotate::Name(a.sentiment));
    t.hate = std::string(annotate::Name(a.hate));
    t.low_confidence = a.low_confidence;
    t.external = a.external;
    annotated.push_back({t.id, t.country, t.year, a.sentiment, a.hate});
  }

  st.Write("tweets.jsonl", TweetsJsonl(tweets));
  st.Write("eval.json", json({{"sentiment", sentiment.eval}, {"hate", hate.eval}}).dump(2) + "\n");
  st.Write("sentiment_classifier.json", annotate::SerializeClassifier(sentiment.classifier));
  st.Write("hate_classifier.json", annotate::SerializeClassifier(hate.classifier));
  st.Write("attitudes.csv", annotate::AttitudesCsv(annotate::AggregateAttitudes(annotated)));
  st.counts() = {{"tweets", tweets.size()},
                 {"external_overrides", overridden},
                 {"low_confidence", low_confidence}};
  return st.Finish({{"baseline", {{"epochs", bc.epochs}, {"learning_rate", bc.learning_rate}}}});
}

StageResult Link(const PipelineConfig &config) {
  Stage st("link", config);
  auto tweets = ReadTweets(st.Upstream("etm-filter", "tweets.jsonl"));
  auto table = link::AliasTable::Load(st.External("alias_table"));
  std::vector<json> rows;
  std::vector<link::EntityMention> all;
  std::size_t linked_tweets = 0;
  for (const auto &t : tweets) {
    auto mentions = link::Link(t.id, t.tokens, table);
    json ms = json::array();
    for (const auto &m : mentions)
      ms.push_back({{"start", m.start}, {"end", m.end}, {"uri", m.uri}, {"label", m.label}});
    rows.push_back({{"id", t.id}, {"mentions", ms}});
    linked_tweets += !mentions.empty();
    all.insert(all.end(), mentions.begin(), mentions.end());
  }
  std::string freq = "label\ttweets\n";
  for (const auto &[label, n] : link::EntityFrequency(all))
    freq += label + "\t" + std::to_string(n) + "\n";
  st.Write("entities.jsonl", Jsonl(rows));
  st.Write("entity_frequency.tsv", freq);
  st.counts() = {{"tweets", tweets.size()},
                 {"tweets_with_entities", linked_tweets},
                 {"mentions", all.size()}};
  return st.Finish(json::object());
}

std::string IndicatorsCsv(std::vector<indicators::IndicatorRecord> records) {
  std::sort(records.begin(), records.end(), [](const auto &a, const auto &b) {
    return std::tie(a.country, a.year, a.kind) < std::tie(b.country, b.year, b.kind);
  });
  std::string out = "country,year,kind,value,source,last_updated\n";
  for (const auto &r : records)
    out += r.country + "," + std::to_string(r.year) + "," +
           std::string(indicators::KindName(r.kind)) + "," + r.value_text + "," + r.source +
           "," + r.last_updated + "\n";
  return out;
}

StageResult Indicators(const PipelineConfig &config) {
  Stage st("indicators", config);
  auto records = indicators::LoadIndicators(st.External("indicators"));
  st.Write("indicators.csv", IndicatorsCsv(records));
  std::map<std::string, std::size_t> per_kind;
  std::set<std::string> countries;
  for (const auto &r : records) {
    ++per_kind[std::string(indicators::KindName(r.kind))];
    countries.insert(r.country);
  }
  st.counts() = {{"records", records.size()}, {"per_kind", per_kind},
                 {"countries", countries.size()}};
  return st.Finish(json::object());
}

std::vector<annotate::AnnotatedTweet> Annotated(const std::vector<StageTweet> &tweets) {
  std::vector<annotate::AnnotatedTweet> out;
  for (const auto &t : tweets) {
    if (!t.sentiment || !t.hate) throw Error("tweet " + t.id + " is not annotated");
    out.push_back({t.id, t.country, t.year, *annotate::ParseSentiment(*t.sentiment),
                   *annotate::ParseHate(*t.hate)});
  }
  return out;
}

StageResult BuildKb(const PipelineConfig &config) {
  Stage st("build-kb", config);
  auto tweets = ReadTweets(st.Upstream("annotate", "tweets.jsonl"));
  auto entity_rows = ReadJsonl(st.Upstream("link", "entities.jsonl"));
  auto records = indicators::LoadIndicators(st.Upstream("indicators", "indicators.csv"));
  auto prefixes = kb::LoadPrefixes(st.External("namespaces"));
  std::map<std::string, std::vector<kb::LinkedEntity>> entities;
  for (const auto &row : entity_rows)
    for (const auto &m : row.at("mentions"))
      entities[row.at("id").get<std::string>()].push_back(
          {m.at("uri").get<std::string>(), m.at("label").get<std::string>()});
  std::vector<kb::KbTweet> kb_tweets;
  for (const auto &t : tweets) {
    if (!t.sentiment || !t.hate || !t.topic)
      throw Error("tweet " + t.id + " lacks a topic or annotation");
    kb::KbTweet k;
    k.id = t.id;
    k.created_at = t.created_at;
    k.year = t.year;
    k.country = t.country;
    k.place_name = t.place_name.value_or("");
    k.point = t.point;
    k.topic = "topic_" + std::to_string(*t.topic);
    k.sentiment = *annotate::ParseSentiment(*t.sentiment);
    k.hate = *annotate::ParseHate(*t.hate);
    k.hashtags = t.hashtag_labels;
    k.entities = entities[t.id];
    k.reply_count = t.reply_count;
    kb_tweets.push_back(std::move(k));
  }
  rdf::Graph graph = kb::BuildGraph(kb_tweets, records);
  graph.prefixes() = prefixes;
  st.Write("graph.nt", rdf::SerializeNTriples(graph));
  st.Write("graph.ttl", rdf::SerializeTurtle(graph));
  st.counts() = {{"tweets", kb_tweets.size()},
                 {"indicators", records.size()},
                 {"triples", graph.size()}};
  return st.Finish(json::object());
}

StageResult Report(const PipelineConfig &config) {
  Stage st("report", config);
  auto tweets = ReadTweets(st.Upstream("annotate", "tweets.jsonl"));
  auto records = indicators::LoadIndicators(st.Upstream("indicators", "indicators.csv"));
  const json &rc = config.Section("report");
  indicators::ReportOptions options;
  auto countries = rc.value("countries", std::vector<std::string>{});
  options.countries = {countries.begin(), countries.end()};
  options.include_2021 = rc.value("include_2021", false);
  auto attitudes = annotate::AggregateAttitudes(Annotated(tweets));
  auto report = indicators::Correlate(attitudes, records, options);
  auto panels = indicators::BuildPanels(attitudes, records, options);
  for (const auto &n : report.notes) st.warnings().Add(n);
  for (const auto &path : indicators::EmitReport(report, panels, st.dir().string()))
    st.Output(fs::path(path).filename().string());
  st.Write("attitudes.csv", annotate::AttitudesCsv(attitudes));
  st.counts() = {{"correlations", report.rows.size()}, {"panels", panels.size()},
                 {"country_years", attitudes.size()}};
  return st.Finish({{"report", {{"countries", countries},
                                {"include_2021", options.include_2021}}}});
}

}  // namespace

const std::vector<std::string> &StageNames() {
  static const std::vector<std::string> kNames = {
      "ingest", "expand", "embed", "etm-train", "etm-filter", "annotate",
      "link", "indicators", "build-kb", "report"};
  return kNames;
}

std::string PipelineConfig::Path(const std::string &key) const {
  auto p = OptionalPath(key);
  if (!p) throw Error("config: paths." + key + " is required");
  return *p;
}

std::optional<std::string> PipelineConfig::OptionalPath(const std::string &key) const {
  if (!raw.contains("paths") || !raw["paths"].contains(key) || raw["paths"][key].is_null())
    return std::nullopt;
  fs::path p = raw["paths"][key].get<std::string>();
  if (p.is_relative()) p = fs::path(base_dir) / p;
  return p.lexically_normal().string();
}

const json &PipelineConfig::Section(const std::string &name) const {
  static const json kEmpty = json::object();
  return raw.contains(name) ? raw[name] : kEmpty;
}

void PipelineConfig::Validate() const {
  if (!raw.contains("paths") || !raw["paths"].is_object())
    throw Error("config: missing paths section");
  for (const auto &[key, value] : raw["paths"].items()) {
    if (value.is_null()) continue;
    std::string p = Path(key);
    if (!fs::is_regular_file(p)) throw Error("config: paths." + key + " not found: " + p);
  }
  double threshold = EtmThreshold(*this);
  if (!(threshold > 0 && threshold <= 1)) throw Error("config: etm.threshold must be in (0, 1]");
  if (threads < 1) throw Error("config: threads must be at least 1");
  if (out.empty()) throw Error("config: out is required");
}

PipelineConfig LoadConfig(const std::string &path, const Overrides &overrides) {
  PipelineConfig c;
  try {
    c.raw = json::parse(ReadFile(path));
  } catch (const json::exception &e) {
    throw Error(path + ": " + e.what());
  }
  c.base_dir = fs::path(path).parent_path().string();
  c.seed = c.raw.value("seed", static_cast<std::uint64_t>(1));
  c.threads = c.raw.value("threads", 1);
  if (c.raw.contains("out")) {
    fs::path out = c.raw["out"].get<std::string>();
    c.out = (out.is_relative() ? fs::path(c.base_dir) / out : out).lexically_normal().string();
  }
  if (overrides.seed) c.seed = *overrides.seed;
  if (overrides.threads) c.threads = *overrides.threads;
  if (overrides.out) c.out = *overrides.out;
  c.Validate();
  return c;
}

StageResult RunStage(const std::string &stage, const PipelineConfig &config) {
  if (stage == "ingest") return Ingest(config);
  if (stage == "expand") return Expand(config);
  if (stage == "embed") return Embed(config);
  if (stage == "etm-train") return EtmTrain(config);
  if (stage == "etm-filter") return EtmFilter(config);
  if (stage == "annotate") return Annotate(config);
  if (stage == "link") return Link(config);
  if (stage == "indicators") return Indicators(config);
  if (stage == "build-kb") return BuildKb(config);
  if (stage == "report") return Report(config);
  throw Error("unknown stage '" + stage + "'");
}

std::vector<StageResult> RunAll(const PipelineConfig &config) {
  std::vector<StageResult> out;
  for (const auto &s : StageNames()) out.push_back(RunStage(s, config));
  return out;
}

std::string GraphPath(const PipelineConfig &config) {
  return (fs::path(config.out) / "build-kb" / "graph.nt").string();
}

}  // namespace pipeline
}  // namespace mgkb
