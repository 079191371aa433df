#include "causal_econf/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "causal_econf/error.hpp"

namespace causal_econf {
namespace {

using nlohmann::json;

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorCode::MissingField, fmt::format("report lacks '{}'", key));
  }
  return doc.at(key);
}

double number(const json& doc, const char* key) {
  const auto& v = field(doc, key);
  if (!v.is_number()) throw Error(ErrorCode::MissingField, fmt::format("'{}' is not a number", key));
  return v.get<double>();
}

const json& nonempty_array(const json& doc, const char* key) {
  const auto& v = field(doc, key);
  if (!v.is_array() || v.empty()) {
    throw Error(ErrorCode::MissingField, fmt::format("'{}' must be a non-empty array", key));
  }
  return v;
}

std::string escape(std::string_view s) {
  std::string out;
  for (const char ch : s) {
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

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Point {
  double x = 0.0;
  double y = 0.0;
  double err = 0.0;  // half-height of an error bar; 0 draws none
};

struct Series {
  std::string label;
  std::vector<Point> points;
  bool dashed = false;
  bool markers = false;
};

// Minimal line chart: optional log x axis, linear y axis, legend top-right.
class Chart {
 public:
  Chart(std::string title, std::string x_label, std::string y_label, bool log_x)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)),
        log_x_(log_x) {}

  void add(Series s) { series_.push_back(std::move(s)); }
  void y_range(double lo, double hi) { y_lo_ = lo, y_hi_ = hi, fixed_y_ = true; }

  std::string render() const {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series_) {
      for (const auto& p : s.points) {
        x_lo = std::min(x_lo, tx(p.x));
        x_hi = std::max(x_hi, tx(p.x));
        y_lo = std::min(y_lo, p.y - p.err);
        y_hi = std::max(y_hi, p.y + p.err);
      }
    }
    if (fixed_y_) y_lo = y_lo_, y_hi = y_hi_;
    if (!(x_hi > x_lo)) x_lo -= 0.5, x_hi += 0.5;
    if (!(y_hi > y_lo)) y_lo -= 0.5, y_hi += 0.5;
    const double pad = 0.05 * (y_hi - y_lo);
    if (!fixed_y_) y_lo -= pad, y_hi += pad;

    auto sx = [&](double v) { return kLeft + (tx(v) - x_lo) / (x_hi - x_lo) * kPlotW; };
    auto sy = [&](double v) {
      const double c = std::clamp(v, y_lo, y_hi);
      return kTop + (1.0 - (c - y_lo) / (y_hi - y_lo)) * kPlotH;
    };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
        "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight, kWidth, kHeight);
    svg += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       kWidth / 2, escape(title_));
    svg += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        kLeft, kTop, kPlotW, kPlotH);

    // ticks
    for (int i = 0; i <= 5; ++i) {
      const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
      svg += fmt::format(
          "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>"
          "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:.3g}</text>\n",
          kLeft, sy(yv), kLeft + kPlotW, kLeft - 6, sy(yv) + 4, yv);
    }
    if (log_x_) {
      for (int e = static_cast<int>(std::ceil(x_lo)); e <= static_cast<int>(std::floor(x_hi)); ++e) {
        const double px = kLeft + (e - x_lo) / (x_hi - x_lo) * kPlotW;
        svg += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#ddd\"/>"
            "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:g}</text>\n",
            px, kTop, kTop + kPlotH, kTop + kPlotH + 16, std::pow(10.0, e));
      }
    } else {
      for (int i = 0; i <= 5; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
        const double px = kLeft + (xv - x_lo) / (x_hi - x_lo) * kPlotW;
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n",
                           px, kTop + kPlotH + 16, xv);
      }
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + kPlotW / 2, kHeight - 10, escape(x_label_));
    svg += fmt::format(
        "<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
        kTop + kPlotH / 2, escape(y_label_));

    for (std::size_t i = 0; i < series_.size(); ++i) {
      const auto& s = series_[i];
      const char* color = kPalette[i % std::size(kPalette)];
      std::string path;
      for (const auto& p : s.points) {
        path += fmt::format("{}{:.2f},{:.2f}", path.empty() ? "M" : " L", sx(p.x), sy(p.y));
      }
      svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{}/>\n",
                         path, color, s.dashed ? " stroke-dasharray=\"6,4\"" : "");
      for (const auto& p : s.points) {
        if (s.markers) {
          svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n",
                             sx(p.x), sy(p.y), color);
        }
        if (p.err > 0.0) {
          svg += fmt::format(
              "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"{3}\"/>\n",
              sx(p.x), sy(p.y - p.err), sy(p.y + p.err), color);
        }
      }
      const int ly = kTop + 14 + 16 * static_cast<int>(i);
      svg += fmt::format(
          "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"{4}/>"
          "<text x=\"{5}\" y=\"{6}\">{7}</text>\n",
          kLeft + kPlotW - 150, ly, kLeft + kPlotW - 125, color,
          s.dashed ? " stroke-dasharray=\"6,4\"" : "", kLeft + kPlotW - 120, ly + 4,
          escape(s.label));
    }
    svg += "</svg>\n";
    return svg;
  }

 private:
  static constexpr int kWidth = 720, kHeight = 480;
  static constexpr int kLeft = 70, kTop = 40, kPlotW = 610, kPlotH = 380;

  double tx(double v) const { return log_x_ ? std::log10(v) : v; }

  std::string title_, x_label_, y_label_;
  bool log_x_;
  std::vector<Series> series_;
  double y_lo_ = 0.0, y_hi_ = 1.0;
  bool fixed_y_ = false;
};

std::string error_vs_alpha(const json& report) {
  const auto& runs = nonempty_array(field(report, "details"), "validity");
  Chart chart("Error probability vs significance level", "alpha (log scale)",
              "P(Y not in region)", true);
  chart.y_range(0.0, 1.0);
  std::vector<Point> envelope;
  for (const auto& run : runs) {
    const auto& curve = nonempty_array(run, "error_curve");
    Series s{fmt::format("Q = {}", run.value("q", std::string("?"))), {}, false, false};
    for (const auto& pt : curve) {
      s.points.push_back({number(pt, "alpha"), number(pt, "rate"), 0.0});
    }
    if (envelope.empty()) {
      for (const auto& pt : curve) {
        const double a = number(pt, "alpha");
        envelope.push_back({a, std::min(1.0, 1.0 / a), 0.0});
      }
    }
    chart.add(std::move(s));
  }
  chart.add(Series{"1/alpha (Markov)", std::move(envelope), true, false});
  return chart.render();
}

std::string region_size(const json& report) {
  Chart chart("E-prediction region size", "alpha (log scale)", "labels in region", true);
  auto sizes = [](const json& regions, std::string label, bool dashed) {
    Series s{std::move(label), {}, dashed, true};
    for (const auto& r : regions) s.points.push_back({number(r, "alpha"), number(r, "size"), 0.0});
    return s;
  };
  chart.add(sizes(nonempty_array(report, "regions"), "estimated", false));
  if (report.contains("oracle")) {
    chart.add(sizes(nonempty_array(report.at("oracle"), "regions"), "oracle", true));
  }
  return chart.render();
}

std::string sweep(const json& report) {
  const auto& rows = nonempty_array(field(report, "details"), "sweep");
  Chart chart("Regularization sweep: mean of p_y / F_y", "y", "estimate (+/- 4 stderr)", false);
  double y_max = 0.0;
  for (const auto& row : rows) {
    const auto& per_y = nonempty_array(row, "per_y");
    Series s{fmt::format("c = {:g}", number(row, "c")), {}, false, true};
    for (const auto& r : per_y) {
      s.points.push_back({number(r, "y"), number(r, "estimate"), 4.0 * number(r, "stderr")});
      y_max = std::max(y_max, s.points.back().y);
    }
    chart.add(std::move(s));
  }
  const double last_y = rows.front().at("per_y").size() - 1.0;
  chart.add(Series{"bound 1", {{0.0, 1.0, 0.0}, {std::max(last_y, 1.0), 1.0, 0.0}}, true, false});
  chart.y_range(0.0, std::max(1.2, 1.1 * y_max));
  return chart.render();
}

}  // namespace

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "error-vs-alpha") return PlotKind::ErrorVsAlpha;
  if (name == "region-size") return PlotKind::RegionSize;
  if (name == "sweep") return PlotKind::Sweep;
  throw Error(ErrorCode::Config, fmt::format("unknown plot kind '{}'", name));
}

std::string render_plot(const json& report, PlotKind kind) {
  switch (kind) {
    case PlotKind::ErrorVsAlpha: return error_vs_alpha(report);
    case PlotKind::RegionSize: return region_size(report);
    case PlotKind::Sweep: return sweep(report);
  }
  throw Error(ErrorCode::Config, "unknown plot kind");
}

}  // namespace causal_econf
