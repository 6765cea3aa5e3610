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

#ifndef MGKB_INDICATORS_H_
#define MGKB_INDICATORS_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mgkb/annotate.h"
#include "mgkb/common.h"

namespace mgkb {
namespace indicators {

enum class Kind { kGdpGrowthRate, kTotalUnemploymentRate, kYouthUnemploymentRate };

std::string_view KindName(Kind kind);
std::optional<Kind> ParseKind(std::string_view name);

inline constexpr int kFirstYear = 2013;
inline constexpr int kLastYear = 2021;

struct IndicatorRecord {
  std::string country;
  int year = 0;
  Kind kind = Kind::kGdpGrowthRate;
  double value = 0;           // percent
  std::string value_text;     // lexical form as read, e.g. "-9.7"
  std::string source;
  std::string last_updated;   // YYYY-MM-DD
};

// CSV with header "country,year,kind,value,source,last_updated". Bad fields
// and duplicate (country, year, kind) keys are fatal with the row number.
std::vector<IndicatorRecord> ParseIndicators(std::string_view contents,
                                             const std::string &source);
std::vector<IndicatorRecord> LoadIndicators(const std::string &path);

// Pearson product-moment coefficient. Throws on length mismatch, fewer than
// two points or zero variance.
double Pearson(const std::vector<double> &x, const std::vector<double> &y);

struct CorrelationRow {
  std::string country;
  std::string measure;  // hate_pct, negative_pct, hate_count, negative_count
  Kind kind;
  double r = 0;
  std::size_t n = 0;
};

struct CorrelationReport {
  std::vector<CorrelationRow> rows;
  std::vector<std::string> notes;  // omitted pairs
};

struct ReportOptions {
  std::set<std::string> countries;  // empty: every country with data
  bool include_2021 = false;        // 2021 only covers part of the year
};

// Yearly attitude measures against each indicator kind per country.
CorrelationReport Correlate(const annotate::AttitudeTable &attitudes,
                            const std::vector<IndicatorRecord> &indicators,
                            const ReportOptions &options = {});

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y), x ascending
};

struct CountryPanel {
  std::string country;
  std::vector<Series> series;  // percent units
};

// Per country: hate and negative percentages and every indicator by year.
std::vector<CountryPanel> BuildPanels(
    const annotate::AttitudeTable &attitudes,
    const std::vector<IndicatorRecord> &indicators,
    const ReportOptions &options = {});

// Chart geometry. The x range maps linearly onto
// [kLeft, kWidth - kRight] and y onto [kHeight - kBottom, kTop].
struct ChartLayout {
  static constexpr double kWidth = 640, kHeight = 400;
  static constexpr double kLeft = 60, kRight = 20, kTop = 30, kBottom = 40;
};

// Standalone SVG line chart, one polyline per series.
std::string LineChartSvg(const std::string &title,
                         const std::vector<Series> &series);

std::string CorrelationsCsv(const CorrelationReport &report);
std::string PanelCsv(const CountryPanel &panel);

// Writes correlations.csv plus <country>.csv and <country>.svg per panel.
// Returns the written file names.
std::vector<std::string> EmitReport(const CorrelationReport &report,
                                    const std::vector<CountryPanel> &panels,
                                    const std::string &out_dir);

}  // namespace indicators
}  // namespace mgkb

#endif  // MGKB_INDICATORS_H_
