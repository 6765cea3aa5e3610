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

#include <set>

#include "doctest.h"
#include "mgkb/entity_link.h"
#include "mgkb/random.h"

using namespace mgkb;
using namespace mgkb::link;

namespace {

const char kTable[] =
    "# surface\turi\tlabel\tprior\n"
    "refugee\thttps://en.wikipedia.org/wiki/Refugee\tRefugee\t0.9\n"
    "world refugee day\thttps://en.wikipedia.org/wiki/World_Refugee_Day\t"
    "World Refugee Day\t1.0\n"
    "unhcr\thttps://en.wikipedia.org/wiki/UNHCR\t"
    "United Nations High Commissioner for Refugees\t0.8\n"
    "unhcr\thttps://en.wikipedia.org/wiki/UNHCR_(band)\tUNHCR band\t0.1\n"
    "refugee camp\thttps://en.wikipedia.org/wiki/Refugee_camp\tRefugee camp\t1\n";

}  // namespace

TEST_CASE("greedy longest match") {
  AliasTable table = AliasTable::Parse(kTable);
  CHECK(table.MaxLength() == 3);
  CHECK(Link("t", {"world", "refugee", "day"}, AliasTable()).empty());

  auto m = Link("t1", {"world", "refugee", "day"}, table);
  REQUIRE(m.size() == 1);
  CHECK(m[0].label == "World Refugee Day");
  CHECK(m[0].start == 0);
  CHECK(m[0].end == 3);

  m = Link("t2", {"unhcr", "visit", "refugee", "camp", "refugee"}, table);
  REQUIRE(m.size() == 3);
  CHECK(m[0].label == "United Nations High Commissioner for Refugees");
  CHECK(m[1].label == "Refugee camp");
  CHECK(m[2].label == "Refugee");
  CHECK(m[2].start == 4);
}

TEST_CASE("mentions never overlap") {
  AliasTable table = AliasTable::Parse(kTable);
  const std::vector<std::string> pool = {"world", "refugee", "day", "camp",
                                         "unhcr", "help"};
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> tokens;
    for (int i = 0, n = rng.Below(12); i < n; ++i)
      tokens.push_back(pool[rng.Below(pool.size())]);
    auto mentions = Link("t", tokens, table);
    std::size_t last = 0;
    for (const auto &m : mentions) {
      CHECK(m.start >= last);
      CHECK(m.end > m.start);
      CHECK(m.end <= tokens.size());
      last = m.end;
    }
  }
}

TEST_CASE("alias table validation") {
  CHECK_THROWS_AS(AliasTable::Parse("a\trelative/uri\tA\t0.5\n"), Error);
  CHECK_THROWS_AS(AliasTable::Parse("a\thttp://x/1\tA\t0.7\na\thttp://x/2\tB\t0.4\n"),
                  Error);
  CHECK_THROWS_AS(AliasTable::Parse("a\thttp://x/1\tA\n"), Error);
  CHECK_THROWS_AS(AliasTable::Parse("a\thttp://x/1\tA\tmuch\n"), Error);
  // Equal priors rank by URI.
  AliasTable t = AliasTable::Parse("A\thttp://x/b\tB\t0.5\na\thttp://x/a\tA\t0.5\n");
  CHECK(t.Find("a")->front().uri == "http://x/a");
}

TEST_CASE("entity frequency") {
  CHECK(EntityFrequency({}).empty());
  std::vector<EntityMention> twice = {{"t1", 0, 1, "http://x/u", "UNHCR"},
                                      {"t1", 3, 4, "http://x/u", "UNHCR"}};
  auto f = EntityFrequency(twice);
  REQUIRE(f.size() == 1);
  CHECK(f[0].second == 1);

  // Published entity counts: tweet i mentions every entity whose count exceeds i.
  const std::vector<std::pair<std::string, std::size_t>> table10 = {
      {"United Nations High Commissioner for Refugees", 791},
      {"Refugee", 183},
      {"Refugee Nation", 149},
      {"Refugee Week", 120},
      {"Convention Relating to the Status of Refugees", 115},
      {"World Refugee Day", 105},
      {"Refugee camp", 46},
      {"European Refugee Fund", 35},
      {"Refugee Council", 34},
      {"Refugee Studies Centre", 33}};
  std::vector<EntityMention> mentions;
  for (std::size_t i = 0; i < 791; ++i)
    for (const auto &[label, count] : table10)
      if (count > i)
        mentions.push_back({"t" + std::to_string(i), 0, 1, "http://x/" + label,
                            label});
  auto ranking = EntityFrequency(mentions);
  REQUIRE(ranking.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(ranking[i] == table10[i]);
}
