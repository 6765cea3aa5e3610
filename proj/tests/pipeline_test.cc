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

#include <unistd.h>

#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "mgkb/kb.h"
#include "mgkb/rdf.h"
#include "mgkb/sparql.h"

using namespace mgkb;
namespace fs = std::filesystem;

namespace {

const char kDemo[] = "data/demo/config.json";

// Fresh directory removed at scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string &tag)
      : path(fs::temp_directory_path() /
             ("mgkb_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

pipeline::PipelineConfig Demo(const fs::path &out) {
  pipeline::Overrides o;
  o.out = out.string();
  return pipeline::LoadConfig(kDemo, o);
}

nlohmann::json Manifest(const fs::path &out, const std::string &stage) {
  return nlohmann::json::parse(ReadFile((out / stage / "manifest.json").string()));
}

}  // namespace

TEST_CASE("all stages run, chain and reproduce") {
  TempDir a("pipeline_a"), b("pipeline_b");
  auto results = pipeline::RunAll(Demo(a.path));
  REQUIRE(results.size() == pipeline::StageNames().size());

  std::string nt = ReadFile(pipeline::GraphPath(Demo(a.path)));
  auto graph = std::make_shared<const rdf::Graph>(rdf::ParseNTriples(nt));
  CHECK(graph->size() > 1000);
  CHECK(Manifest(a.path, "build-kb")["counts"]["triples"] == graph->size());

  // Every upstream input hash equals the producing stage's output hash.
  std::size_t links = 0;
  for (const auto &stage : pipeline::StageNames()) {
    auto m = Manifest(a.path, stage);
    for (const auto &[key, hash] : m["inputs"].items()) {
      auto slash = key.find('/');
      std::string producer = key.substr(0, slash);
      if (std::find(pipeline::StageNames().begin(), pipeline::StageNames().end(), producer) ==
          pipeline::StageNames().end())
        continue;
      CHECK(Manifest(a.path, producer)["outputs"][key] == hash);
      ++links;
    }
  }
  CHECK(links >= 12);

  pipeline::RunAll(Demo(b.path));
  CHECK(ReadFile(pipeline::GraphPath(Demo(b.path))) == nt);
  for (const auto &stage : pipeline::StageNames())
    CHECK(ReadFile((a.path / stage / "manifest.json").string()) ==
          ReadFile((b.path / stage / "manifest.json").string()));

  // The demo graph answers the shipped queries.
  sparql::Store store(graph);
  auto q = sparql::ParseQuery(ReadFile("config/queries/top_hashtags.rq"), kb::DefaultPrefixes());
  CHECK(!sparql::Evaluate(q, store).rows.empty());
}

TEST_CASE("stage ordering and stale artifacts") {
  TempDir d("pipeline_order");
  auto config = Demo(d.path);
  CHECK_THROWS_WITH_AS(pipeline::RunStage("etm-filter", config),
                       doctest::Contains("run `etm-train` first"), Error);
  pipeline::RunStage("ingest", config);
  CHECK_THROWS_WITH_AS(pipeline::RunStage("embed", config),
                       doctest::Contains("run `expand` first"), Error);
  std::string tweets = (d.path / "ingest" / "tweets.jsonl").string();
  WriteFile(tweets, ReadFile(tweets) + "\n");
  CHECK_THROWS_WITH_AS(pipeline::RunStage("expand", config),
                       doctest::Contains("does not match the ingest manifest"), Error);
  CHECK_THROWS_WITH_AS(pipeline::RunStage("nope", config), doctest::Contains("unknown stage"),
                       Error);
}

TEST_CASE("config validation") {
  TempDir d("pipeline_config");
  fs::create_directories(d.path);
  auto raw = nlohmann::json::parse(ReadFile(kDemo));
  auto write = [&](const nlohmann::json &j) {
    std::string path = (fs::absolute(fs::path(kDemo)).parent_path() / "config_test.json").string();
    WriteFile(path, j.dump());
    return path;
  };
  auto bad = raw;
  bad["etm"]["threshold"] = 0.0;
  std::string path = write(bad);
  CHECK_THROWS_WITH_AS(pipeline::LoadConfig(path), doctest::Contains("threshold"), Error);
  bad = raw;
  bad["paths"]["dump"] = "missing.jsonl";
  path = write(bad);
  CHECK_THROWS_WITH_AS(pipeline::LoadConfig(path), doctest::Contains("paths.dump not found"),
                       Error);
  fs::remove(path);

  pipeline::Overrides o;
  o.seed = 99;
  o.out = d.path.string();
  auto c = pipeline::LoadConfig(kDemo, o);
  CHECK(c.seed == 99);
  CHECK(c.out == d.path.string());
  CHECK(c.Path("dump") == "data/demo/dump.jsonl");
}
