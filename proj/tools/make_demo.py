# Copyright 2026 The mgkb Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the synthetic demo inputs under data/demo with a fixed seed."""

import csv
import json
import os
import random

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "demo")
rng = random.Random(20220601)

PLACES = [
    ("DE", {"place": "Berlin, Germany"}), ("DE", {"lat": 48.14, "lon": 11.58}),
    ("GB", {"place": "London, England"}), ("GB", {"lat": 53.48, "lon": -2.24}),
    ("FR", {"place": "Paris, France"}), ("FR", {"lat": 43.3, "lon": 5.37}),
    ("IT", {"place": "Rome, Italy"}), ("IT", {"lat": 45.46, "lon": 9.19}),
    ("SE", {"place": "Stockholm, Sweden"}), ("AT", {"lat": 48.2, "lon": 16.37}),
    ("HU", {"place": "Budapest, Hungary"}), ("NL", {"lat": 52.37, "lon": 4.9}),
]
OUTSIDE = [{"place": "New York, USA"}, {"lat": 40.71, "lon": -74.0}]

SUBJECTS = ["refugees", "asylum seekers", "migrants", "immigrants", "refugee families",
            "displaced people", "newcomers"]
MIGRATION = [
    "{s} arrive at the border after a long journey",
    "new asylum law debated as {s} wait for decisions",
    "volunteers welcome {s} at the station with food and shelter",
    "immigration policy must protect {s} and their children",
    "deportation flights for {s} criticised by UNHCR",
    "the refugee camp is overcrowded and {s} need support",
    "integration courses help {s} find work and housing",
    "{s} crossing the sea need rescue and protection",
    "Refugee Week celebrates the courage of {s}",
    "World Refugee Day events bring {s} and neighbours together",
]
POSITIVE = ["great", "proud", "welcome", "wonderful", "hope"]
NEGATIVE = ["sad", "terrible", "angry", "awful", "worried"]
HATEFUL = ["invaders", "vermin", "parasites"]
OFFENSIVE = ["idiots", "stupid", "ridiculous"]
OFFTOPIC = [
    "football match tonight the stadium was loud and the team played well",
    "rain again today weather forecast says sunshine tomorrow afternoon",
    "new coffee shop opened downtown lovely cake and friendly staff",
    "concert tickets sold out the band plays guitar songs all night",
    "morning run along the river park before work feels amazing",
    "recipe for pasta with tomato sauce garlic basil and cheese",
]
TAGS = ["#RefugeesWelcome", "#refugees", "#WorldRefugeeDay", "#refugee", "#immigration",
        "#asylum", "#RefugeeWeek", "#WithRefugees"]


def migration_text():
    s = rng.choice(SUBJECTS)
    text = rng.choice(MIGRATION).format(s=s)
    mood = rng.random()
    if mood < 0.3:
        text += " " + rng.choice(POSITIVE)
    elif mood < 0.55:
        text += " " + rng.choice(NEGATIVE)
    elif mood < 0.62:
        text = rng.choice(HATEFUL) + " " + text
    elif mood < 0.67:
        text += " " + rng.choice(OFFENSIVE)
    if rng.random() < 0.6:
        text += " " + " ".join(rng.sample(TAGS, rng.randint(1, 2)))
    return text


def timestamp():
    year = rng.randint(2013, 2020)
    return "%d-%02d-%02dT%02d:%02d:00Z" % (year, rng.randint(1, 12), rng.randint(1, 28),
                                          rng.randint(0, 23), rng.randint(0, 59))


def dump():
    rows = []
    for i in range(200):
        if i % 50 == 49:
            geo = OUTSIDE[(i // 50) % 2]
        else:
            geo = rng.choice(PLACES)[1]
        text = migration_text() if rng.random() < 0.7 else rng.choice(OFFTOPIC)
        row = {"id": "d%03d" % i, "text": text, "created_at": timestamp(), "geo": geo}
        if rng.random() < 0.3:
            row["reply_count"] = rng.randint(0, 12)
        rows.append(row)
    with open(os.path.join(OUT, "dump.jsonl"), "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def labeled(path, classes, maker, per_class):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "label", "text"])
        n = 0
        for label in classes:
            for _ in range(per_class):
                w.writerow(["%s%03d" % (label[0], n), label, maker(label)])
                n += 1


def sentiment_text(label):
    base = rng.choice(MIGRATION).format(s=rng.choice(SUBJECTS))
    if label == "positive":
        return base + " " + " ".join(rng.sample(POSITIVE, 2))
    if label == "negative":
        return base + " " + " ".join(rng.sample(NEGATIVE, 2))
    return base


def hate_text(label):
    base = rng.choice(MIGRATION).format(s=rng.choice(SUBJECTS))
    if label == "hate":
        return " ".join(rng.sample(HATEFUL, 2)) + " " + base
    if label == "offensive":
        return base + " " + " ".join(rng.sample(OFFENSIVE, 2))
    return base


def indicators():
    gb_gdp = {2013: "2.2", 2014: "2.9", 2015: "2.4", 2016: "1.7", 2017: "1.7",
              2018: "1.3", 2019: "1.4", 2020: "-9.7"}
    with open(os.path.join(OUT, "indicators.csv"), "w", encoding="utf-8") as f:
        f.write("country,year,kind,value,source,last_updated\n")
        for country in ["AT", "DE", "FR", "GB", "HU", "IT", "NL", "SE"]:
            for year in range(2013, 2021):
                if country == "GB":
                    gdp = gb_gdp[year]
                else:
                    gdp = "%.1f" % (rng.uniform(0.5, 3.0) if year < 2020 else rng.uniform(-9, -3))
                f.write("%s,%d,gdp_growth_rate,%s,demo,2021-07-01\n" % (country, year, gdp))
                f.write("%s,%d,total_unemployment_rate,%.1f,demo,2021-07-01\n"
                        % (country, year, rng.uniform(3, 11)))
                f.write("%s,%d,youth_unemployment_rate,%.1f,demo,2021-07-01\n"
                        % (country, year, rng.uniform(6, 30)))


def aliases():
    rows = [
        ("unhcr", "http://dbpedia.org/resource/United_Nations_High_Commissioner_for_Refugees",
         "United Nations High Commissioner for Refugees", "1.0"),
        ("refugee camp", "http://dbpedia.org/resource/Refugee_camp", "Refugee camp", "1.0"),
        ("refugee week", "http://dbpedia.org/resource/Refugee_Week", "Refugee Week", "1.0"),
        ("world refugee day", "http://dbpedia.org/resource/World_Refugee_Day",
         "World Refugee Day", "1.0"),
        ("refugee", "http://dbpedia.org/resource/Refugee", "Refugee", "0.9"),
        ("asylum", "http://dbpedia.org/resource/Right_of_asylum", "Right of asylum", "0.8"),
        ("border", "http://dbpedia.org/resource/Border", "Border", "0.6"),
        ("deportation", "http://dbpedia.org/resource/Deportation", "Deportation", "1.0"),
    ]
    with open(os.path.join(OUT, "aliases.tsv"), "w", encoding="utf-8") as f:
        f.write("# surface\turi\tlabel\tprior\n")
        for r in rows:
            f.write("\t".join(r) + "\n")


def main():
    os.makedirs(OUT, exist_ok=True)
    dump()
    labeled(os.path.join(OUT, "sentiment_train.csv"), ["negative", "neutral", "positive"],
            sentiment_text, 40)
    labeled(os.path.join(OUT, "hate_train.csv"), ["hate", "offensive", "normal"],
            hate_text, 40)
    indicators()
    aliases()
    with open(os.path.join(OUT, "external_annotations.csv"), "w", encoding="utf-8") as f:
        f.write("id,sentiment,hate\nd000,positive,normal\nd001,negative,offensive\n"
                "d002,neutral,hate\n")


if __name__ == "__main__":
    main()
