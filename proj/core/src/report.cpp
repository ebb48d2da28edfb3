// Copyright 2026 The Brier Authors
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

#include "brier/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <system_error>

#include "brier/error.hpp"
#include "csv.hpp"

namespace brier {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string opt_double(double v) { return std::isnan(v) ? std::string() : format_double(v); }

double parse_double_field(const std::string& s, const std::string& what) {
  if (s.empty()) return kNaN;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("bad number '" + s + "' in column " + what);
  }
  return v;
}

std::uint64_t parse_uint_field(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("bad integer '" + s + "' in column " + what);
  }
  return v;
}

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string mean_std(const GroupSummary* g, const std::string& metric) {
  if (g == nullptr) return "-";
  auto it = g->metrics.find(metric);
  if (it == g->metrics.end()) return g->n_ok == 0 ? "failed" : "-";
  std::string s = pct(it->second.mean) + " ± " + pct(it->second.std);
  if (g->n_failed > 0) s += " (" + std::to_string(g->n_failed) + " failed)";
  return s;
}

std::string metric_title(const std::string& metric) {
  if (metric == "accuracy") return "accuracy (%)";
  if (metric == "error_rate") return "classification error rate (%)";
  if (metric == "f1") return "F1 (%)";
  if (metric.starts_with("top")) return "top-" + metric.substr(3) + " accuracy (%)";
  return metric;
}

std::vector<std::string> square_losses(const ComparisonReport& r) {
  std::vector<std::string> out;
  for (const auto& g : r.summary.groups) {
    if (g.loss != "ce" && std::find(out.begin(), out.end(), g.loss) == out.end()) {
      out.push_back(g.loss);
    }
  }
  return out;
}

std::vector<std::uint64_t> seeds_of(const ComparisonReport& r) {
  std::vector<std::uint64_t> out;
  for (const auto& c : r.cells) {
    if (std::find(out.begin(), out.end(), c.seed) == out.end()) out.push_back(c.seed);
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                    "#8172b3", "#937860", "#da8bc3", "#8c8c8c"};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "md") return ReportFormat::kMarkdown;
  if (text == "svg") return ReportFormat::kSvg;
  throw InvalidArgument("unknown report format '" + text + "' (expected csv, md or svg)");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, std::span<const EpochStats> history) {
  out << "epoch,train_loss,train_acc,val_acc\n";
  for (const auto& e : history) {
    out << e.epoch << ',' << format_double(e.train_loss) << ','
        << format_double(e.train_accuracy) << ',' << opt_double(e.val_accuracy) << '\n';
  }
}

std::vector<EpochStats> read_curve_csv(std::istream& in) {
  const std::string text = read_all(in);
  csv::Reader reader(text);
  std::vector<std::string> f;
  if (!reader.next(f) || f != std::vector<std::string>{"epoch", "train_loss", "train_acc", "val_acc"}) {
    throw DataError("curve CSV: unexpected header");
  }
  std::vector<EpochStats> out;
  while (reader.next(f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 4) {
      throw DataError("curve CSV line " + std::to_string(reader.record_line()) +
                      ": expected 4 fields");
    }
    EpochStats e;
    e.epoch = parse_uint_field(f[0], "epoch");
    e.train_loss = parse_double_field(f[1], "train_loss");
    e.train_accuracy = parse_double_field(f[2], "train_acc");
    e.val_accuracy = parse_double_field(f[3], "val_acc");
    out.push_back(e);
  }
  return out;
}

void write_runs_csv(std::ostream& out, std::span<const Cell> cells,
                    const std::vector<std::string>& metrics) {
  out << "loss,protocol,seed,status,selected_epoch,total_epochs,selected_val_acc,"
         "n_test,init_digest,config";
  for (const auto& m : metrics) out << ',' << m;
  out << ",error\n";
  for (const auto& c : cells) {
    out << csv::quote(c.loss) << ',' << c.protocol << ',' << c.seed << ','
        << (c.ok ? "ok" : "failed") << ',';
    if (c.ok) {
      out << c.record.selected_epoch << ',' << c.record.total_epochs_run << ','
          << opt_double(c.record.selected_val_accuracy) << ','
          << (c.record.test ? std::to_string(c.record.test->n_samples) : "");
    } else {
      out << ",,,";
    }
    out << ',' << c.init_digest << ',' << csv::quote(c.record.config_fingerprint);
    for (const auto& m : metrics) {
      const auto v = metric_value(c, m);
      out << ',' << (v ? format_double(*v) : "");
    }
    out << ',' << csv::quote(c.error) << '\n';
  }
}

std::vector<Cell> read_runs_csv(std::istream& in) {
  const std::string text = read_all(in);
  csv::Reader reader(text);
  std::vector<std::string> header;
  if (!reader.next(header) || header.size() < 11 || header[0] != "loss" ||
      header.back() != "error") {
    throw DataError("runs CSV: unexpected header");
  }
  constexpr std::size_t kFirstMetric = 10;
  const std::vector<std::string> metrics(header.begin() + kFirstMetric, header.end() - 1);

  std::vector<Cell> cells;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != header.size()) {
      throw DataError("runs CSV line " + std::to_string(reader.record_line()) +
                      ": expected " + std::to_string(header.size()) + " fields");
    }
    Cell c;
    c.loss = f[0];
    c.protocol = f[1];
    c.seed = parse_uint_field(f[2], "seed");
    c.ok = f[3] == "ok";
    c.init_digest = f[8];
    c.record.config_fingerprint = f[9];
    c.record.seed = c.seed;
    c.record.protocol = c.protocol == "p2" ? ProtocolKind::kFixedEpochs : ProtocolKind::kEarlyStop;
    c.error = f.back();
    if (c.ok) {
      c.record.selected_epoch = parse_uint_field(f[4], "selected_epoch");
      c.record.total_epochs_run = parse_uint_field(f[5], "total_epochs");
      c.record.selected_val_accuracy = parse_double_field(f[6], "selected_val_acc");
      EvalResult t;
      t.n_samples = f[7].empty() ? 0 : parse_uint_field(f[7], "n_test");
      for (std::size_t i = 0; i < metrics.size(); ++i) {
        const std::string& m = metrics[i];
        const std::string& v = f[kFirstMetric + i];
        if (v.empty()) continue;
        const double x = parse_double_field(v, m);
        if (m == "accuracy") {
          t.accuracy = x;
          t.topk[1] = x;
        } else if (m == "error_rate") {
          t.error_rate = x;
        } else if (m == "f1") {
          t.f1 = x;
        } else if (m.starts_with("top")) {
          t.topk[static_cast<std::size_t>(parse_uint_field(m.substr(3), "top-k"))] = x;
        }
      }
      c.record.test = t;
    }
    cells.push_back(std::move(c));
  }
  return cells;
}

std::string render_markdown(const ComparisonReport& report) {
  const auto& agg = report.summary;
  const auto metrics = metric_names(report.cells);
  const GroupSummary* ce = agg.find("ce", "p1");
  auto sq = square_losses(report);
  const auto seeds = seeds_of(report);

  std::ostringstream md;
  md << "# " << report.name << "\n\n";
  md << "Test accuracy (%), mean ± standard deviation over " << seeds.size()
     << (seeds.size() == 1 ? " seed" : " seeds") << ".\n\n";
  // Main table: accuracy, one row per (model, task) and square-loss variant.
  const bool multi = sq.size() > 1;
  if (sq.empty()) sq.push_back("");
  auto row = [&](const std::string& m, bool with_metric) {
    for (const auto& loss : sq) {
      md << "| " << report.model_label << " | " << report.task_label << " | ";
      if (with_metric) md << metric_title(m) << " | ";
      if (multi || with_metric) md << (loss.empty() ? "-" : "`" + loss + "`") << " | ";
      md << (loss.empty() ? "-" : mean_std(agg.find(loss, "p1"), m)) << " | "
         << mean_std(ce, m) << " | "
         << (loss.empty() ? "-" : mean_std(agg.find(loss, "p2"), m)) << " |\n";
    }
  };
  md << "| Model | Task | " << (multi ? "Square loss | " : "")
     << "Train with square loss | Train with cross-entropy | "
        "Square loss w/ same epochs as CE |\n";
  md << "|---|---|" << (multi ? "---|" : "") << "---|---|---|\n";
  row("accuracy", false);

  if (metrics.size() > 1) {
    md << "\n## Other metrics\n\n";
    md << "| Model | Task | Metric | Square loss | Train with square loss | "
          "Train with cross-entropy | Square loss w/ same epochs as CE |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const auto& m : metrics) {
      if (m != "accuracy") row(m, true);
    }
  }

  md << "\n## Epochs\n\n";
  md << "| Loss | Protocol | Selected epoch (mean) | Epochs run (mean) |\n";
  md << "|---|---|---|---|\n";
  for (const auto& g : agg.groups) {
    double sel = 0.0;
    double total = 0.0;
    for (const auto& c : report.cells) {
      if (c.loss == g.loss && c.protocol == g.protocol && c.ok) {
        sel += static_cast<double>(c.record.selected_epoch);
        total += static_cast<double>(c.record.total_epochs_run);
      }
    }
    const double n = static_cast<double>(g.n_ok);
    md << "| `" << g.loss << "` | " << g.protocol << " | "
       << (g.n_ok ? fixed(sel / n, 1) : "-") << " | " << (g.n_ok ? fixed(total / n, 1) : "-")
       << " |\n";
  }

  md << "\n## Per-seed results\n\n";
  md << "| Loss | Protocol | Seed | Status | Selected epoch | Epochs run | Accuracy (%) |\n";
  md << "|---|---|---|---|---|---|---|\n";
  for (const auto& c : report.cells) {
    md << "| `" << c.loss << "` | " << c.protocol << " | " << c.seed << " | "
       << (c.ok ? "ok" : "failed") << " | ";
    if (c.ok) {
      md << c.record.selected_epoch << " | " << c.record.total_epochs_run << " | "
         << pct(c.record.test->accuracy) << " |\n";
    } else {
      md << "- | - | - |\n";
    }
  }

  if (!agg.deltas.empty()) {
    md << "\n## Per-seed deltas (accuracy, percentage points)\n\n";
    md << "| Square loss | Protocol |";
    for (auto s : seeds) md << " seed " << s << " |";
    md << " mean ± std |\n|---|---|";
    for (std::size_t i = 0; i < seeds.size(); ++i) md << "---|";
    md << "---|\n";
    for (const auto& ds : agg.delta_stats) {
      if (ds.metric != "accuracy") continue;
      md << "| `" << ds.loss << "` | " << ds.protocol << " |";
      for (auto s : seeds) {
        auto it = std::find_if(agg.deltas.begin(), agg.deltas.end(), [&](const SeedDelta& d) {
          return d.loss == ds.loss && d.protocol == ds.protocol && d.seed == s &&
                 d.metric == "accuracy";
        });
        md << ' ' << (it == agg.deltas.end() ? "-" : fixed(100.0 * it->delta, 2)) << " |";
      }
      md << ' ' << fixed(100.0 * ds.stats.mean, 2) << " ± " << fixed(100.0 * ds.stats.std, 2)
         << " |\n";
    }
  }

  std::vector<const Cell*> failed;
  for (const auto& c : report.cells) {
    if (!c.ok) failed.push_back(&c);
  }
  if (!failed.empty()) {
    md << "\n## Failed runs\n\n";
    for (const Cell* c : failed) {
      md << "- `" << c->loss << "` " << c->protocol << " seed " << c->seed << ": "
         << c->error << "\n";
    }
  }

  md << "\n---\n\n";
  md << "- Standard deviations are sample standard deviations (divisor n − 1); "
        "a group with a single run reports 0.\n";
  md << "- Deltas are square loss − cross-entropy for accuracy-type metrics and "
        "cross-entropy − square loss for error rates, so a positive delta favours "
        "the square loss. Runs of the same seed share initial weights.\n";
  md << "- Error rate is the classification error rate, 1 − accuracy.\n";
  md << "- Protocol p1 stops after 5 epochs without a strict improvement in "
        "validation accuracy and keeps the best checkpoint; p2 trains the square loss "
        "for the epoch count "
     << (report.selection == EpochSelection::kBestEpoch ? "selected (best epoch)"
                                                        : "run in total")
     << " by the same-seed cross-entropy p1 run.\n";
  md << "- Failed runs are listed above and excluded from every statistic.\n";
  return md.str();
}

std::string render_delta_svg(const ComparisonReport& report, const std::string& metric) {
  const auto seeds = seeds_of(report);
  std::vector<const DeltaSummary*> groups;
  for (const auto& ds : report.summary.delta_stats) {
    if (ds.metric == metric) groups.push_back(&ds);
  }

  const double bar_w = 18.0;
  const double gap = 36.0;
  const double left = 70.0;
  const double top = 50.0;
  const double plot_h = 260.0;
  const double group_w = std::max<double>(1, seeds.size()) * bar_w + gap;
  const double width = left + std::max<double>(1, groups.size()) * group_w + 20.0;
  const double height = top + plot_h + 90.0;

  double extent = 1e-9;
  for (const auto& d : report.summary.deltas) {
    if (d.metric == metric) extent = std::max(extent, std::abs(100.0 * d.delta));
  }
  for (const auto* g : groups) {
    extent = std::max(extent, 100.0 * (std::abs(g->stats.mean) + g->stats.std));
  }
  extent *= 1.15;
  const double zero_y = top + plot_h / 2.0;
  auto y_of = [&](double pts) { return zero_y - pts / extent * (plot_h / 2.0); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0)
      << "\" height=\"" << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' '
      << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<title>" << xml_escape(report.name) << ": per-seed " << xml_escape(metric)
      << " delta</title>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(width / 2, 1) << "\" y=\"22\" text-anchor=\"middle\" "
         "font-size=\"13\">"
      << xml_escape(report.name) << ": " << xml_escape(metric_title(metric))
      << " delta per seed (positive favours square loss)</text>\n";
  for (double frac : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const double v = frac * extent / 1.15;
    const double y = y_of(v);
    svg << "<line x1=\"" << left << "\" x2=\"" << fixed(width - 20, 1) << "\" y1=\""
        << fixed(y, 2) << "\" y2=\"" << fixed(y, 2) << "\" stroke=\""
        << (frac == 0.0 ? "#000" : "#ddd") << "\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y + 4, 2)
        << "\" text-anchor=\"end\">" << fixed(v, 2) << "</text>\n";
  }
  svg << "<text transform=\"translate(16," << fixed(zero_y, 1)
      << ") rotate(-90)\" text-anchor=\"middle\">delta (percentage points)</text>\n";

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto* g = groups[gi];
    const double x0 = left + gap / 2 + static_cast<double>(gi) * group_w;
    const char* color = kPalette[gi % std::size(kPalette)];
    svg << "<g class=\"delta-group\" data-loss=\"" << xml_escape(g->loss)
        << "\" data-protocol=\"" << g->protocol << "\">\n";
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      auto it = std::find_if(report.summary.deltas.begin(), report.summary.deltas.end(),
                             [&](const SeedDelta& d) {
                               return d.loss == g->loss && d.protocol == g->protocol &&
                                      d.metric == metric && d.seed == seeds[si];
                             });
      if (it == report.summary.deltas.end()) continue;
      const double v = 100.0 * it->delta;
      const double y = std::min(y_of(v), zero_y);
      const double h = std::abs(y_of(v) - zero_y);
      svg << "  <rect class=\"delta-bar\" data-seed=\"" << seeds[si] << "\" data-delta=\""
          << format_double(it->delta) << "\" x=\""
          << fixed(x0 + static_cast<double>(si) * bar_w, 2) << "\" y=\"" << fixed(y, 2)
          << "\" width=\"" << fixed(bar_w - 3, 2) << "\" height=\"" << fixed(h, 2)
          << "\" fill=\"" << color << "\"/>\n";
    }
    const double x_mid = x0 + static_cast<double>(seeds.size()) * bar_w / 2.0;
    const double mean = 100.0 * g->stats.mean;
    const double sd = 100.0 * g->stats.std;
    svg << "  <line class=\"delta-mean\" x1=\"" << fixed(x0 - 4, 2) << "\" x2=\""
        << fixed(x0 + static_cast<double>(seeds.size()) * bar_w + 1, 2) << "\" y1=\""
        << fixed(y_of(mean), 2) << "\" y2=\"" << fixed(y_of(mean), 2)
        << "\" stroke=\"#222\" stroke-dasharray=\"4 2\"/>\n";
    svg << "  <path class=\"delta-errorbar\" d=\"M" << fixed(x_mid, 2) << ' '
        << fixed(y_of(mean - sd), 2) << " V" << fixed(y_of(mean + sd), 2) << " M"
        << fixed(x_mid - 5, 2) << ' ' << fixed(y_of(mean - sd), 2) << " h10 M"
        << fixed(x_mid - 5, 2) << ' ' << fixed(y_of(mean + sd), 2)
        << " h10\" stroke=\"#222\" fill=\"none\" stroke-width=\"1.5\"/>\n";
    svg << "  <text x=\"" << fixed(x_mid, 2) << "\" y=\"" << fixed(top + plot_h + 20, 1)
        << "\" text-anchor=\"middle\">" << xml_escape(g->loss) << "</text>\n";
    svg << "  <text x=\"" << fixed(x_mid, 2) << "\" y=\"" << fixed(top + plot_h + 34, 1)
        << "\" text-anchor=\"middle\">" << g->protocol << " (" << fixed(mean, 2) << " ± "
        << fixed(sd, 2) << ")</text>\n";
    svg << "</g>\n";
  }
  if (groups.empty()) {
    svg << "<text x=\"" << fixed(width / 2, 1) << "\" y=\"" << fixed(zero_y - 10, 1)
        << "\" text-anchor=\"middle\">no square-loss / cross-entropy pairs</text>\n";
  }
  svg << "<text x=\"" << left << "\" y=\"" << fixed(height - 20, 1)
      << "\">bars: one per seed; dashed line: mean; whisker: ±1 sample std</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string render_curves_svg(const ComparisonReport& report) {
  const double left = 60.0;
  const double top = 40.0;
  const double plot_w = 520.0;
  const double plot_h = 300.0;
  const double width = left + plot_w + 200.0;
  const double height = top + plot_h + 60.0;

  std::size_t max_epoch = 1;
  double lo = 1.0;
  for (const auto& c : report.cells) {
    if (!c.ok) continue;
    max_epoch = std::max(max_epoch, c.record.history.size());
    for (const auto& e : c.record.history) {
      if (!std::isnan(e.val_accuracy)) lo = std::min(lo, e.val_accuracy);
    }
  }
  lo = std::max(0.0, std::floor(lo * 20.0) / 20.0);
  if (lo >= 1.0) lo = 0.95;
  auto x_of = [&](double epoch) {
    return left + (max_epoch > 1 ? (epoch - 1) / static_cast<double>(max_epoch - 1) : 0.5) * plot_w;
  };
  auto y_of = [&](double acc) { return top + (1.0 - (acc - lo) / (1.0 - lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0)
      << "\" height=\"" << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<title>" << xml_escape(report.name) << ": validation accuracy per epoch</title>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(left + plot_w / 2, 1)
      << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(report.name)
      << ": validation accuracy per epoch</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double acc = lo + (1.0 - lo) * i / 4.0;
    svg << "<line x1=\"" << left << "\" x2=\"" << left + plot_w << "\" y1=\""
        << fixed(y_of(acc), 2) << "\" y2=\"" << fixed(y_of(acc), 2) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y_of(acc) + 4, 2)
        << "\" text-anchor=\"end\">" << pct(acc) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(left + plot_w / 2, 1) << "\" y=\"" << fixed(top + plot_h + 30, 1)
      << "\" text-anchor=\"middle\">epoch (1.." << max_epoch << ")</text>\n";

  std::vector<std::string> keys;
  for (const auto& c : report.cells) {
    const std::string key = c.loss + " " + c.protocol;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& c : report.cells) {
    if (!c.ok || c.record.history.empty()) continue;
    const auto gi = static_cast<std::size_t>(
        std::find(keys.begin(), keys.end(), c.loss + " " + c.protocol) - keys.begin());
    svg << "<polyline class=\"curve\" data-cell=\"" << xml_escape(c.id())
        << "\" fill=\"none\" stroke-width=\"1.2\" stroke=\"" << kPalette[gi % std::size(kPalette)]
        << "\" points=\"";
    for (const auto& e : c.record.history) {
      if (std::isnan(e.val_accuracy)) continue;
      svg << fixed(x_of(static_cast<double>(e.epoch)), 2) << ','
          << fixed(y_of(e.val_accuracy), 2) << ' ';
    }
    svg << "\"/>\n";
  }
  for (std::size_t gi = 0; gi < keys.size(); ++gi) {
    const double y = top + 10.0 + 18.0 * static_cast<double>(gi);
    svg << "<line x1=\"" << left + plot_w + 20 << "\" x2=\"" << left + plot_w + 40
        << "\" y1=\"" << y << "\" y2=\"" << y << "\" stroke=\""
        << kPalette[gi % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plot_w + 46 << "\" y=\"" << y + 4 << "\">"
        << xml_escape(keys[gi]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_report(const ComparisonReport& report,
                                               const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& file, const std::string& content) {
    const auto path = dir / file;
    write_file(path, content);
    written.push_back(path);
  };
  if (formats.contains(ReportFormat::kCsv)) {
    std::ostringstream runs;
    write_runs_csv(runs, report.cells, metric_names(report.cells));
    emit("runs.csv", runs.str());
    for (const auto& c : report.cells) {
      if (!c.ok) continue;
      std::ostringstream curve;
      write_curve_csv(curve, c.record.history);
      emit("curves_" + c.id() + ".csv", curve.str());
    }
  }
  if (formats.contains(ReportFormat::kMarkdown)) emit(report.name + ".md", render_markdown(report));
  if (formats.contains(ReportFormat::kSvg)) {
    emit(report.name + "_deltas.svg", render_delta_svg(report));
    emit(report.name + "_curves.svg", render_curves_svg(report));
  }
  return written;
}

}  // namespace brier
