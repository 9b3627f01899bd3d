#include "shiftgate/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "shiftgate/errors.hpp"
#include "text_io.hpp"

namespace shiftgate {
namespace {

std::string fixed(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
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

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, std::optional<double>>> points;
};

// Minimal line chart: one polyline per series, optional vertical markers.
class SvgPlot {
 public:
  explicit SvgPlot(const SvgOptions& options) : opt_(options) {}

  void add(Series s) { series_.push_back(std::move(s)); }
  void add_vertical(double x) { verticals_.push_back(x); }

  void write(std::ostream& out, std::string_view x_label) const {
    double x_lo = HUGE_VAL, x_hi = -HUGE_VAL, y_lo = HUGE_VAL, y_hi = -HUGE_VAL;
    for (const auto& s : series_) {
      for (const auto& [x, y] : s.points) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        if (y && std::isfinite(*y)) {
          y_lo = std::min(y_lo, *y);
          y_hi = std::max(y_hi, *y);
        }
      }
    }
    for (const double v : verticals_) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0;
    if (!std::isfinite(y_lo)) y_lo = 0.0, y_hi = 1.0;
    if (x_hi - x_lo <= 0.0) x_lo -= 1.0, x_hi += 1.0;
    if (y_hi - y_lo <= 0.0) y_lo -= 0.5, y_hi += 0.5;

    constexpr double kLeft = 60, kRight = 140, kTop = 40, kBottom = 50;
    const double w = opt_.width, h = opt_.height;
    const double pw = w - kLeft - kRight, ph = h - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    const auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt_.width << "\" height=\""
        << opt_.height << "\" viewBox=\"0 0 " << opt_.width << ' ' << opt_.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt_.title.empty()) {
      out << "<text x=\"" << fixed(w / 2, 1) << "\" y=\"24\" text-anchor=\"middle\" "
          << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(opt_.title) << "</text>\n";
    }
    out << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << kTop + ph << "\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
        << "\" y2=\"" << kTop + ph << "\"/>\n</g>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
      const double xv = x_lo + (x_hi - x_lo) * i / kTicks;
      const double yv = y_lo + (y_hi - y_lo) * i / kTicks;
      out << "<text x=\"" << fixed(px(xv), 2) << "\" y=\"" << fixed(kTop + ph + 16, 2)
          << "\" text-anchor=\"middle\">" << fixed(xv, 0) << "</text>\n";
      out << "<text x=\"" << fixed(kLeft - 6, 2) << "\" y=\"" << fixed(py(yv) + 4, 2)
          << "\" text-anchor=\"end\">" << fixed(yv, 2) << "</text>\n";
    }
    out << "<text x=\"" << fixed(kLeft + pw / 2, 1) << "\" y=\"" << fixed(h - 10, 1)
        << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n</g>\n";

    for (const double v : verticals_) {
      out << "<line class=\"safe-limit\" x1=\"" << fixed(px(v), 2) << "\" y1=\"" << kTop
          << "\" x2=\"" << fixed(px(v), 2) << "\" y2=\"" << kTop + ph
          << "\" stroke=\"cyan\" stroke-width=\"1.5\"/>\n";
    }

    for (std::size_t i = 0; i < series_.size(); ++i) {
      const auto& s = series_[i];
      out << "<polyline class=\"series\" data-label=\"" << xml_escape(s.label)
          << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (const auto& [x, y] : s.points) {
        if (!y || !std::isfinite(*y)) continue;
        out << (first ? "" : " ") << fixed(px(x), 2) << ',' << fixed(py(*y), 2);
        first = false;
      }
      out << "\"/>\n";
      const double ly = kTop + 14.0 * static_cast<double>(i);
      out << "<text x=\"" << fixed(kLeft + pw + 10, 1) << "\" y=\"" << fixed(ly + 4, 1)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << s.color << "\">"
          << xml_escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
  }

 private:
  SvgOptions opt_;
  std::vector<Series> series_;
  std::vector<double> verticals_;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kUnwritablePath, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kUnwritablePath, "failed writing " + path.string());
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepResult>& results) {
  out << "shift,space,hi,kl,db\n";
  for (const auto& r : results) {
    out << r.shift << ',' << to_string(r.space) << ',' << detail::format_double(r.hi) << ','
        << detail::format_double(r.kl) << ',' << detail::format_optional(r.db) << '\n';
  }
}

std::vector<SweepResult> read_sweep_csv(std::istream& in) {
  detail::expect_header(in, "shift,space,hi,kl,db");
  std::vector<SweepResult> rows;
  std::string line;
  while (detail::next_line(in, line)) {
    const auto f = detail::split_fields(line);
    if (f.size() != 5) throw Error(ErrorCode::kMalformedRecord, "sweep row '" + line + "'");
    rows.push_back({static_cast<int>(detail::parse_int(f[0])), detail::parse_double(f[2]),
                    detail::parse_double(f[3]), detail::parse_optional(f[4]),
                    parse_color_space(f[1])});
  }
  return rows;
}

void write_pair_table_csv(std::ostream& out, const PairTable& table) {
  out << "ID1,ID2";
  for (const int s : table.shifts) out << ',' << s;
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.id1 << ',' << row.id2;
    for (const auto& v : row.values) out << ',' << detail::format_optional(v);
    out << '\n';
  }
}

PairTable read_pair_table_csv(std::istream& in, Metric metric, ColorSpace space) {
  std::string line;
  if (!detail::next_line(in, line)) {
    throw Error(ErrorCode::kMalformedRecord, "pair table CSV is empty");
  }
  const auto header = detail::split_fields(line);
  if (header.size() < 2 || header[0] != "ID1" || header[1] != "ID2") {
    throw Error(ErrorCode::kMalformedRecord, "pair table header '" + line + "'");
  }
  PairTable table;
  table.metric = metric;
  table.space = space;
  for (std::size_t i = 2; i < header.size(); ++i) {
    table.shifts.push_back(static_cast<int>(detail::parse_int(header[i])));
  }
  while (detail::next_line(in, line)) {
    const auto f = detail::split_fields(line);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kMalformedRecord, "pair table row '" + line + "'");
    }
    PairTableRow row;
    row.id1 = detail::parse_int(f[0]);
    row.id2 = detail::parse_int(f[1]);
    for (std::size_t i = 2; i < f.size(); ++i) row.values.push_back(detail::parse_optional(f[i]));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_pair_table(const PairTable& table) {
  std::ostringstream out;
  char cell[32];
  std::snprintf(cell, sizeof(cell), "%4s %6s %6s", "#", "ID1", "ID2");
  out << cell;
  for (const int s : table.shifts) {
    std::snprintf(cell, sizeof(cell), " %7d", s);
    out << cell;
  }
  out << '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    std::snprintf(cell, sizeof(cell), "%4zu %6lld %6lld", i + 1, static_cast<long long>(row.id1),
                  static_cast<long long>(row.id2));
    out << cell;
    for (const auto& v : row.values) {
      std::snprintf(cell, sizeof(cell), " %7s", v ? fixed(*v, 2).c_str() : "inf");
      out << cell;
    }
    out << '\n';
  }
  return out.str();
}

void write_residuals_csv(std::ostream& out, const std::vector<Residual>& residuals) {
  out << "frame,truth,prediction,residual\n";
  for (const auto& r : residuals) {
    out << r.frame << ',' << detail::format_double(r.truth) << ','
        << detail::format_double(r.prediction) << ',' << detail::format_double(r.residual)
        << '\n';
  }
}

std::vector<Residual> read_residuals_csv(std::istream& in) {
  detail::expect_header(in, "frame,truth,prediction,residual");
  std::vector<Residual> rows;
  std::string line;
  while (detail::next_line(in, line)) {
    const auto f = detail::split_fields(line);
    if (f.size() != 4) throw Error(ErrorCode::kMalformedRecord, "residual row '" + line + "'");
    rows.push_back({detail::parse_int(f[0]), detail::parse_double(f[1]),
                    detail::parse_double(f[2]), detail::parse_double(f[3])});
  }
  return rows;
}

void write_sweep_svg(std::ostream& out, const std::vector<SweepResult>& results,
                     const SvgOptions& options) {
  SvgPlot plot(options);
  Series hi{"hi", kPalette[0], {}}, kl{"kl", kPalette[1], {}}, db{"db", kPalette[2], {}};
  for (const auto& r : results) {
    hi.points.emplace_back(r.shift, r.hi);
    kl.points.emplace_back(r.shift, r.kl);
    db.points.emplace_back(r.shift, r.db);
  }
  plot.add(std::move(hi));
  plot.add(std::move(kl));
  plot.add(std::move(db));
  if (options.safe_shift > 0) {
    plot.add_vertical(-options.safe_shift);
    plot.add_vertical(options.safe_shift);
  }
  plot.write(out, "pixel intensity shift");
}

void write_pair_table_svg(std::ostream& out, const PairTable& table, const SvgOptions& options) {
  SvgPlot plot(options);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    Series s{std::to_string(row.id1) + "/" + std::to_string(row.id2),
             kPalette[i % std::size(kPalette)], {}};
    for (std::size_t c = 0; c < table.shifts.size() && c < row.values.size(); ++c) {
      s.points.emplace_back(table.shifts[c], row.values[c]);
    }
    plot.add(std::move(s));
  }
  if (options.safe_shift > 0) {
    plot.add_vertical(-options.safe_shift);
    plot.add_vertical(options.safe_shift);
  }
  plot.write(out, std::string("pixel intensity shift (") + std::string(to_string(table.metric)) + ")");
}

void write_residuals_svg(std::ostream& out, const std::vector<Residual>& residuals,
                         const SvgOptions& options) {
  SvgPlot plot(options);
  Series truth{"ground truth", kPalette[0], {}}, pred{"prediction", kPalette[1], {}};
  for (const auto& r : residuals) {
    truth.points.emplace_back(static_cast<double>(r.frame), r.truth);
    pred.points.emplace_back(static_cast<double>(r.frame), r.prediction);
  }
  plot.add(std::move(truth));
  plot.add(std::move(pred));
  plot.write(out, "frame");
}

void emit_report(const std::vector<SweepResult>& results, ReportFormat format,
                 const std::filesystem::path& path, const SvgOptions& options) {
  if (results.empty()) throw Error(ErrorCode::kEmptyResults, "no sweep rows to report");
  auto out = open_for_write(path);
  if (format == ReportFormat::kCsv) {
    write_sweep_csv(out, results);
  } else {
    write_sweep_svg(out, results, options);
  }
  finish(out, path);
}

void emit_report(const PairTable& table, ReportFormat format, const std::filesystem::path& path,
                 const SvgOptions& options) {
  if (table.rows.empty()) throw Error(ErrorCode::kEmptyResults, "no pair rows to report");
  auto out = open_for_write(path);
  if (format == ReportFormat::kCsv) {
    write_pair_table_csv(out, table);
  } else {
    write_pair_table_svg(out, table, options);
  }
  finish(out, path);
}

void emit_report(const ErrorEvaluation& evaluation, ReportFormat format,
                 const std::filesystem::path& path, const SvgOptions& options) {
  if (evaluation.residuals.empty()) {
    throw Error(ErrorCode::kEmptyResults, "no residuals to report");
  }
  auto out = open_for_write(path);
  if (format == ReportFormat::kCsv) {
    write_residuals_csv(out, evaluation.residuals);
  } else {
    SvgOptions annotated = options;
    if (annotated.title.empty()) {
      annotated.title = "shift " + std::to_string(evaluation.shift) +
                        ", st. err. (MAE) " + fixed(evaluation.summary.mae, 4);
    }
    write_residuals_svg(out, evaluation.residuals, annotated);
  }
  finish(out, path);
}

}  // namespace shiftgate
