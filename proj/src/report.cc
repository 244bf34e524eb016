/* Copyright 2026 The maskinfo Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "maskinfo/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "maskinfo/csv.h"
#include "maskinfo/error.h"

namespace maskinfo {

namespace {

const CsvRow kMiHeader = {"dataset", "target_kind", "strategy", "mi_bits", "h_y_bits", "relative_gain", "n_pairs",
                          "seed_mean", "seed_std", "version", "seed", "config_hash"};
const CsvRow kJsdHeader = {"dataset", "target_kind", "tau", "jsd_bits", "labels_kept", "defined",
                           "version", "seed", "config_hash"};

double ToDouble(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::kIOFailure, "bad number '" + s + "' in report");
  return v;
}

std::uint64_t ToU64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::kIOFailure, "bad integer '" + s + "' in report");
  return v;
}

std::string FormatTau(double tau) { return fmt::format("{:g}", tau); }

}  // namespace

void SortRows(AnalysisReport& report) {
  std::stable_sort(report.mi_rows.begin(), report.mi_rows.end(), [](const MiRow& a, const MiRow& b) {
    return std::tie(a.dataset, a.target_kind, a.strategy) < std::tie(b.dataset, b.target_kind, b.strategy);
  });
  std::stable_sort(report.jsd_rows.begin(), report.jsd_rows.end(), [](const JsdRow& a, const JsdRow& b) {
    if (a.dataset != b.dataset) return a.dataset < b.dataset;
    if (a.target_kind != b.target_kind) return a.target_kind < b.target_kind;
    return a.tau > b.tau;
  });
}

std::string FormatBits(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  return fmt::format("{:.10f}", v);
}

std::string ReportToCsv(const AnalysisReport& report) {
  const Provenance& p = report.provenance;
  std::string out;
  if (report.kind == ReportKind::kMi) {
    out += CsvLine(kMiHeader);
    for (const auto& r : report.mi_rows) {
      out += CsvLine({r.dataset, r.target_kind, r.strategy, FormatBits(r.mi_bits), FormatBits(r.h_y_bits),
                      FormatBits(r.relative_gain), std::to_string(r.n_pairs), FormatBits(r.seed_mean),
                      FormatBits(r.seed_std), p.version, std::to_string(p.seed), p.config_hash});
    }
  } else {
    out += CsvLine(kJsdHeader);
    for (const auto& r : report.jsd_rows) {
      out += CsvLine({r.dataset, r.target_kind, FormatTau(r.tau), r.jsd_bits ? FormatBits(*r.jsd_bits) : "",
                      std::to_string(r.labels_kept), r.jsd_bits ? "1" : "0", p.version, std::to_string(p.seed),
                      p.config_hash});
    }
  }
  return out;
}

AnalysisReport ReportFromCsv(std::string_view text) {
  const auto rows = ParseCsv(text);
  if (rows.empty()) throw Error(ErrorCode::kIOFailure, "empty report");
  AnalysisReport report;
  const CsvRow& header = rows.front();
  if (header == kMiHeader) {
    report.kind = ReportKind::kMi;
  } else if (header == kJsdHeader) {
    report.kind = ReportKind::kJsd;
  } else {
    throw Error(ErrorCode::kIOFailure, "unrecognized report header");
  }
  for (size_t i = 1; i < rows.size(); ++i) {
    const CsvRow& r = rows[i];
    if (r.size() != header.size()) throw Error(ErrorCode::kIOFailure, fmt::format("report row {} has {} fields", i, r.size()));
    if (report.kind == ReportKind::kMi) {
      report.mi_rows.push_back({r[0], r[1], r[2], ToDouble(r[3]), ToDouble(r[4]), ToDouble(r[5]), ToU64(r[6]),
                                ToDouble(r[7]), ToDouble(r[8])});
    } else {
      JsdRow row{r[0], r[1], ToDouble(r[2]), std::nullopt, static_cast<int>(ToU64(r[4]))};
      if (r[5] == "1") row.jsd_bits = ToDouble(r[3]);
      report.jsd_rows.push_back(row);
    }
    report.provenance = {r[r.size() - 3], ToU64(r[r.size() - 2]), r[r.size() - 1]};
  }
  return report;
}

std::string Fnv1aHex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

// ---- SVG ----

namespace {

constexpr double kWidth = 820, kHeight = 480;
constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 80;
const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string Num(double v) { return fmt::format("{:.2f}", v); }

// Round the axis maximum up to 1, 2 or 5 times a power of ten.
double NiceCeil(double v) {
  if (!(v > 0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (v <= m * p * (1 + 1e-12)) return m * p;
  }
  return 10 * p;
}

struct Canvas {
  std::string body;
  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;

  void Text(double x, double y, std::string_view s, std::string_view anchor = "middle", int size = 12,
            std::string_view extra = "") {
    body += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{}\"{}>{}</text>\n", Num(x), Num(y), size,
                        anchor, extra, XmlEscape(s));
  }
  void Line(double x1, double y1, double x2, double y2, std::string_view stroke = "#000") {
    body += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"/>\n", Num(x1), Num(y1), Num(x2), Num(y2),
                        stroke);
  }
  void Axes(std::string_view x_label, std::string_view y_label) {
    Line(kLeft, kTop, kLeft, kTop + plot_h);
    Line(kLeft, kTop + plot_h, kLeft + plot_w, kTop + plot_h);
    Text(kLeft + plot_w / 2, kHeight - 15, x_label);
    body += fmt::format("<text x=\"18\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{}</text>\n",
                        Num(kTop + plot_h / 2), Num(kTop + plot_h / 2), XmlEscape(y_label));
  }
  void YTicks(double y_max) {
    for (int t = 0; t <= 5; ++t) {
      const double v = y_max * t / 5.0;
      const double y = kTop + plot_h - plot_h * t / 5.0;
      Line(kLeft - 4, y, kLeft, y);
      Text(kLeft - 6, y + 4, fmt::format("{:.3g}", v), "end", 10);
    }
  }
  void Legend(const std::vector<std::string>& names) {
    if (names.empty()) return;
    body += "<g class=\"legend\">\n";
    for (size_t i = 0; i < names.size(); ++i) {
      const double y = kTop + 10 + 18.0 * static_cast<double>(i);
      body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", Num(kWidth - kRight + 15),
                          Num(y - 10), kPalette[i % std::size(kPalette)]);
      Text(kWidth - kRight + 32, y, names[i], "start", 11);
    }
    body += "</g>\n";
  }
  std::string Finish(std::string_view title) const {
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\">\n<rect width=\"{0}\" height=\"{1}\" fill=\"#fff\"/>\n",
        kWidth, kHeight);
    out += fmt::format("<text x=\"{}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
                       Num(kLeft + plot_w / 2), XmlEscape(title));
    out += body;
    out += "</svg>\n";
    return out;
  }
};

std::string RenderMi(const AnalysisReport& report) {
  Canvas c;
  c.Axes("dataset / target", "MI (bits)");
  if (report.mi_rows.empty()) {
    c.YTicks(1.0);
    c.Text(kLeft + c.plot_w / 2, kTop + c.plot_h / 2, "no data", "middle", 16);
    return c.Finish("Mutual information");
  }
  std::vector<std::string> groups, series;
  std::map<std::pair<std::string, std::string>, const MiRow*> cell;
  double y_max = 0;
  for (const auto& r : report.mi_rows) {
    const std::string g = r.dataset + " / " + r.target_kind;
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    if (std::find(series.begin(), series.end(), r.strategy) == series.end()) series.push_back(r.strategy);
    cell[{g, r.strategy}] = &r;
    y_max = std::max(y_max, r.mi_bits + r.seed_std);
  }
  y_max = NiceCeil(y_max);
  c.YTicks(y_max);
  const double group_w = c.plot_w / static_cast<double>(groups.size());
  const double bar_w = group_w * 0.8 / static_cast<double>(series.size());
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    const double gx = kLeft + group_w * static_cast<double>(gi) + group_w * 0.1;
    for (size_t si = 0; si < series.size(); ++si) {
      auto it = cell.find({groups[gi], series[si]});
      if (it == cell.end()) continue;
      const MiRow& r = *it->second;
      const double h = c.plot_h * std::max(r.mi_bits, 0.0) / y_max;
      const double x = gx + bar_w * static_cast<double>(si);
      c.body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", Num(x),
                            Num(kTop + c.plot_h - h), Num(bar_w * 0.95), Num(h), kPalette[si % std::size(kPalette)]);
      if (r.seed_std > 0) {
        const double cx = x + bar_w * 0.475;
        const double lo = kTop + c.plot_h - c.plot_h * std::max(r.mi_bits - r.seed_std, 0.0) / y_max;
        const double hi = kTop + c.plot_h - c.plot_h * (r.mi_bits + r.seed_std) / y_max;
        c.Line(cx, lo, cx, hi, "#333");
      }
    }
    c.Text(kLeft + group_w * (static_cast<double>(gi) + 0.5), kTop + c.plot_h + 16, groups[gi], "middle", 10);
  }
  c.Legend(series);
  return c.Finish("Mutual information");
}

std::string RenderJsd(const AnalysisReport& report) {
  Canvas c;
  c.Axes("tau (log scale)", "JSD (bits)");
  std::vector<std::string> series;
  std::map<std::string, std::vector<std::pair<double, double>>> points;
  double lo = 0, hi = 0, y_max = 0;
  bool first = true;
  for (const auto& r : report.jsd_rows) {
    if (!r.jsd_bits || !(r.tau > 0)) continue;
    const std::string s = r.dataset + " / " + r.target_kind;
    if (!points.count(s)) series.push_back(s);
    points[s].emplace_back(std::log10(r.tau), *r.jsd_bits);
    const double lt = std::log10(r.tau);
    lo = first ? lt : std::min(lo, lt);
    hi = first ? lt : std::max(hi, lt);
    first = false;
    y_max = std::max(y_max, *r.jsd_bits);
  }
  if (series.empty()) {
    c.YTicks(1.0);
    c.Text(kLeft + c.plot_w / 2, kTop + c.plot_h / 2, "no data", "middle", 16);
    return c.Finish("JSD of class-conditional label distributions");
  }
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi <= lo) hi = lo + 1;
  y_max = NiceCeil(y_max);
  c.YTicks(y_max);
  auto px = [&](double lt) { return kLeft + c.plot_w * (lt - lo) / (hi - lo); };
  auto py = [&](double v) { return kTop + c.plot_h - c.plot_h * v / y_max; };
  for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); ++d) {
    c.Line(px(d), kTop + c.plot_h, px(d), kTop + c.plot_h + 4);
    c.Text(px(d), kTop + c.plot_h + 16, fmt::format("{:g}", std::pow(10.0, d)), "middle", 10);
  }
  for (size_t si = 0; si < series.size(); ++si) {
    auto pts = points[series[si]];
    std::sort(pts.begin(), pts.end());
    std::string attr;
    for (const auto& [lt, v] : pts) attr += (attr.empty() ? "" : " ") + Num(px(lt)) + "," + Num(py(v));
    const char* color = kPalette[si % std::size(kPalette)];
    c.body += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, attr);
    for (const auto& [lt, v] : pts) {
      c.body += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n", Num(px(lt)), Num(py(v)), color);
    }
  }
  c.Legend(series);
  return c.Finish("JSD of class-conditional label distributions");
}

}  // namespace

std::string RenderSvg(const AnalysisReport& report) {
  return report.kind == ReportKind::kMi ? RenderMi(report) : RenderJsd(report);
}

}  // namespace maskinfo
