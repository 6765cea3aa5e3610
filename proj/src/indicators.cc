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

#include "mgkb/indicators.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <tuple>

namespace mgkb {
namespace indicators {
namespace {

constexpr std::string_view kHeader = "country,year,kind,value,source,last_updated";
constexpr std::array<std::string_view, 3> kKindNames = {
    "gdp_growth_rate", "total_unemployment_rate", "youth_unemployment_rate"};

bool ValidDate(const std::string &s) {
  static const std::regex re(R"((\d{4})-(\d{2})-(\d{2}))");
  std::smatch m;
  if (!std::regex_match(s, m, re)) return false;
  int y = std::stoi(m[1]), mo = std::stoi(m[2]), d = std::stoi(m[3]);
  if (mo < 1 || mo > 12 || d < 1) return false;
  static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max = kDays[mo - 1];
  if (mo == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) max = 29;
  return d <= max;
}

std::string Fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string EscapeXml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Measure {
  std::string name;
  double (*value)(const annotate::AttitudeCell &);
};

const std::vector<Measure> &Measures() {
  static const std::vector<Measure> kMeasures = {
      {"hate_pct", [](const annotate::AttitudeCell &c) {
         return c.HatePercent()[static_cast<int>(annotate::Hate::kHate)];
       }},
      {"negative_pct", [](const annotate::AttitudeCell &c) {
         return c.SentimentPercent()[static_cast<int>(
             annotate::Sentiment::kNegative)];
       }},
      {"hate_count", [](const annotate::AttitudeCell &c) {
         return static_cast<double>(
             c.hate_counts[static_cast<int>(annotate::Hate::kHate)]);
       }},
      {"negative_count", [](const annotate::AttitudeCell &c) {
         return static_cast<double>(c.sentiment_counts[static_cast<int>(
             annotate::Sentiment::kNegative)]);
       }},
  };
  return kMeasures;
}

bool YearAllowed(int year, const ReportOptions &options) {
  return options.include_2021 || year != 2021;
}

// Countries with attitude data, restricted to the filter.
std::set<std::string> Countries(const annotate::AttitudeTable &attitudes,
                                const ReportOptions &options) {
  std::set<std::string> out;
  for (const auto &[key, cell] : attitudes) {
    if (cell.total == 0) continue;
    if (options.countries.empty() || options.countries.count(key.first))
      out.insert(key.first);
  }
  return out;
}

}  // namespace

std::string_view KindName(Kind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<Kind> ParseKind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == name) return static_cast<Kind>(i);
  return std::nullopt;
}

std::vector<IndicatorRecord> ParseIndicators(std::string_view contents,
                                             const std::string &source) {
  std::vector<IndicatorRecord> out;
  auto lines = Split(contents, '\n');
  std::size_t first = 0;
  while (first < lines.size() && Trim(lines[first]).empty()) ++first;
  if (first == lines.size()) return out;
  if (Trim(lines[first]) != kHeader)
    throw Error(source + ": expected header " + std::string(kHeader));
  static const std::regex decimal(R"(-?\d+(\.\d+)?)");
  std::set<std::tuple<std::string, int, int>> seen;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::string where = source + ": row " + std::to_string(i + 1);
    std::vector<std::string> cells;
    try {
      cells = SplitCsv(line);
    } catch (const Error &e) {
      throw Error(where + ": " + e.what());
    }
    if (cells.size() != 6) throw Error(where + ": expected 6 columns");
    IndicatorRecord r;
    r.country = cells[0];
    if (r.country.size() != 2 || !std::isupper(static_cast<unsigned char>(r.country[0])) ||
        !std::isupper(static_cast<unsigned char>(r.country[1])))
      throw Error(where + ": bad country code '" + cells[0] + "'");
    char *end = nullptr;
    long year = std::strtol(cells[1].c_str(), &end, 10);
    if (cells[1].empty() || *end != '\0' || year < kFirstYear || year > kLastYear)
      throw Error(where + ": bad year '" + cells[1] + "'");
    r.year = static_cast<int>(year);
    auto kind = ParseKind(cells[2]);
    if (!kind) throw Error(where + ": unknown kind '" + cells[2] + "'");
    r.kind = *kind;
    if (!std::regex_match(cells[3], decimal))
      throw Error(where + ": bad value '" + cells[3] + "'");
    r.value = std::strtod(cells[3].c_str(), nullptr);
    r.value_text = cells[3];
    if (r.kind != Kind::kGdpGrowthRate && r.value < 0)
      throw Error(where + ": negative unemployment rate");
    r.source = cells[4];
    if (r.source.empty()) throw Error(where + ": empty source");
    r.last_updated = cells[5];
    if (!ValidDate(r.last_updated))
      throw Error(where + ": bad last_updated '" + cells[5] + "'");
    if (!seen.emplace(r.country, r.year, static_cast<int>(r.kind)).second)
      throw Error(where + ": duplicate record for (" + r.country + ", " +
                  cells[1] + ", " + cells[2] + ")");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<IndicatorRecord> LoadIndicators(const std::string &path) {
  return ParseIndicators(ReadFile(path), path);
}

double Pearson(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size()) throw Error("pearson: series differ in length");
  if (x.size() < 2) throw Error("pearson: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw Error("pearson: zero variance");
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

CorrelationReport Correlate(const annotate::AttitudeTable &attitudes,
                            const std::vector<IndicatorRecord> &indicators,
                            const ReportOptions &options) {
  CorrelationReport report;
  for (const auto &country : Countries(attitudes, options)) {
    for (Kind kind : {Kind::kGdpGrowthRate, Kind::kTotalUnemploymentRate,
                      Kind::kYouthUnemploymentRate}) {
      std::map<int, double> ind;
      for (const auto &r : indicators)
        if (r.country == country && r.kind == kind && YearAllowed(r.year, options))
          ind[r.year] = r.value;
      for (const auto &m : Measures()) {
        std::vector<double> xs, ys;
        for (const auto &[year, value] : ind) {
          auto it = attitudes.find({country, year});
          if (it == attitudes.end() || it->second.total == 0) continue;
          xs.push_back(m.value(it->second));
          ys.push_back(value);
        }
        std::string pair = country + " " + m.name + " vs " +
                           std::string(KindName(kind));
        if (xs.size() < 2) {
          report.notes.push_back(pair + ": " + std::to_string(xs.size()) +
                                 " overlapping year(s), omitted");
          continue;
        }
        try {
          report.rows.push_back({country, m.name, kind, Pearson(xs, ys), xs.size()});
        } catch (const Error &e) {
          report.notes.push_back(pair + ": " + e.what() + ", omitted");
        }
      }
    }
  }
  return report;
}

std::vector<CountryPanel> BuildPanels(
    const annotate::AttitudeTable &attitudes,
    const std::vector<IndicatorRecord> &indicators,
    const ReportOptions &options) {
  std::vector<CountryPanel> panels;
  for (const auto &country : Countries(attitudes, options)) {
    CountryPanel panel;
    panel.country = country;
    for (const auto &m : Measures()) {
      if (EndsWith(m.name, "_count")) continue;
      Series s{m.name, {}};
      for (const auto &[key, cell] : attitudes)
        if (key.first == country && cell.total > 0 && YearAllowed(key.second, options))
          s.points.emplace_back(key.second, m.value(cell));
      panel.series.push_back(std::move(s));
    }
    for (Kind kind : {Kind::kGdpGrowthRate, Kind::kTotalUnemploymentRate,
                      Kind::kYouthUnemploymentRate}) {
      Series s{std::string(KindName(kind)), {}};
      for (const auto &r : indicators)
        if (r.country == country && r.kind == kind && YearAllowed(r.year, options))
          s.points.emplace_back(r.year, r.value);
      std::sort(s.points.begin(), s.points.end());
      if (!s.points.empty()) panel.series.push_back(std::move(s));
    }
    panels.push_back(std::move(panel));
  }
  return panels;
}

std::string LineChartSvg(const std::string &title,
                         const std::vector<Series> &series) {
  using L = ChartLayout;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto &s : series) {
    for (const auto &[x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x0 == x1) x0 -= 1, x1 += 1;
  if (y0 == y1) y0 -= 1, y1 += 1;
  auto px = [&](double x) {
    return L::kLeft + (x - x0) / (x1 - x0) * (L::kWidth - L::kLeft - L::kRight);
  };
  auto py = [&](double y) {
    return L::kHeight - L::kBottom -
           (y - y0) / (y1 - y0) * (L::kHeight - L::kTop - L::kBottom);
  };
  static const char *kColors[] = {"#d62728", "#1f77b4", "#2ca02c",
                                  "#ff7f0e", "#9467bd", "#8c564b"};
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
      "viewBox=\"0 0 640 400\">\n";
  out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         EscapeXml(title) + "</text>\n";
  // Axes with their extreme values.
  out += "<line x1=\"" + Fixed2(L::kLeft) + "\" y1=\"" + Fixed2(L::kHeight - L::kBottom) +
         "\" x2=\"" + Fixed2(L::kWidth - L::kRight) + "\" y2=\"" +
         Fixed2(L::kHeight - L::kBottom) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + Fixed2(L::kLeft) + "\" y1=\"" + Fixed2(L::kTop) + "\" x2=\"" +
         Fixed2(L::kLeft) + "\" y2=\"" + Fixed2(L::kHeight - L::kBottom) +
         "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + Fixed2(L::kLeft) + "\" y=\"" + Fixed2(L::kHeight - 20) +
         "\" font-size=\"11\">" + FormatDouble(x0) + "</text>\n";
  out += "<text x=\"" + Fixed2(L::kWidth - L::kRight) + "\" y=\"" +
         Fixed2(L::kHeight - 20) + "\" font-size=\"11\" text-anchor=\"end\">" +
         FormatDouble(x1) + "</text>\n";
  out += "<text x=\"" + Fixed2(L::kLeft - 5) + "\" y=\"" + Fixed2(L::kTop + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + Fixed2(y1) + "</text>\n";
  out += "<text x=\"" + Fixed2(L::kLeft - 5) + "\" y=\"" +
         Fixed2(L::kHeight - L::kBottom) + "\" font-size=\"11\" text-anchor=\"end\">" +
         Fixed2(y0) + "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto &s = series[i];
    const char *color = kColors[i % std::size(kColors)];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      if (j) out += ' ';
      out += Fixed2(px(s.points[j].first)) + "," + Fixed2(py(s.points[j].second));
    }
    out += "\"/>\n";
    double ly = L::kTop + 14.0 * i;
    out += "<text x=\"" + Fixed2(L::kWidth - L::kRight - 150) + "\" y=\"" +
           Fixed2(ly) + "\" font-size=\"11\" fill=\"" + color + "\">" +
           EscapeXml(s.name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string CorrelationsCsv(const CorrelationReport &report) {
  std::string out = "country,measure,indicator,r,n\n";
  for (const auto &row : report.rows) {
    out += row.country + "," + row.measure + "," + std::string(KindName(row.kind)) +
           "," + FormatDouble(row.r) + "," + std::to_string(row.n) + "\n";
  }
  return out;
}

std::string PanelCsv(const CountryPanel &panel) {
  std::set<double> years;
  for (const auto &s : panel.series)
    for (const auto &p : s.points) years.insert(p.first);
  std::string out = "year";
  for (const auto &s : panel.series) out += "," + s.name;
  out += '\n';
  for (double year : years) {
    out += FormatDouble(year);
    for (const auto &s : panel.series) {
      out += ',';
      for (const auto &p : s.points)
        if (p.first == year) out += FormatDouble(p.second);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> EmitReport(const CorrelationReport &report,
                                    const std::vector<CountryPanel> &panels,
                                    const std::string &out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create report directory " + out_dir + ": " + ec.message());
  std::vector<std::string> written;
  auto emit = [&](const std::string &name, const std::string &contents) {
    WriteFile(out_dir + "/" + name, contents);
    written.push_back(name);
  };
  emit("correlations.csv", CorrelationsCsv(report));
  for (const auto &panel : panels) {
    emit(panel.country + ".csv", PanelCsv(panel));
    emit(panel.country + ".svg",
         LineChartSvg(panel.country + ": attitudes and indicators (percent)",
                      panel.series));
  }
  return written;
}

}  // namespace indicators
}  // namespace mgkb
