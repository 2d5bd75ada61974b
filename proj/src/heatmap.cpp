#include "morphoseq/heatmap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "morphoseq/errors.hpp"

namespace morphoseq {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string attention_csv(const AttentionTrace& trace) {
  std::ostringstream out;
  for (const auto& t : trace.col_labels) out << ',' << csv_field(t.text);
  out << '\n';
  for (std::size_t r = 0; r < trace.weights.rows(); ++r) {
    out << csv_field(r < trace.row_labels.size() ? trace.row_labels[r].text : "");
    for (double w : trace.weights.row(r)) out << ',' << shortest(w);
    out << '\n';
  }
  return out.str();
}

AttentionTrace parse_attention_csv(std::string_view csv) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < csv.size();) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    if (end > pos) lines.push_back(csv.substr(pos, end - pos));
    pos = end + 1;
  }
  if (lines.empty()) throw ParseError(1, "empty attention CSV");
  AttentionTrace trace;
  const auto header = csv_split(lines[0]);
  for (std::size_t i = 1; i < header.size(); ++i) trace.col_labels.push_back({TokenKind::StemChar, header[i]});
  const std::size_t cols = trace.col_labels.size();
  std::vector<double> values;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = csv_split(lines[l]);
    if (fields.size() != cols + 1) throw ParseError(l + 1, "wrong number of attention columns");
    trace.row_labels.push_back({TokenKind::StemChar, fields[0]});
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      const auto& f = fields[i];
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError(l + 1, "bad weight '" + f + "'");
      }
      values.push_back(v);
    }
  }
  trace.weights = Matrix(lines.size() - 1, cols, std::move(values));
  return trace;
}

std::string attention_svg(const AttentionTrace& trace) {
  constexpr int cell = 24;
  constexpr int left = 90;
  constexpr int top = 90;
  const auto rows = static_cast<int>(trace.weights.rows());
  const auto cols = static_cast<int>(trace.weights.cols());
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + cols * cell + 10
      << "\" height=\"" << top + rows * cell + 10 << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int c = 0; c < cols; ++c) {
    const int x = left + c * cell + cell / 2;
    const std::string label = c < int(trace.col_labels.size()) ? trace.col_labels[c].text : "";
    out << "<text class=\"col-label\" x=\"" << x << "\" y=\"" << top - 6
        << "\" transform=\"rotate(-60 " << x << ' ' << top - 6 << ")\">" << xml_escape(label)
        << "</text>\n";
  }
  for (int r = 0; r < rows; ++r) {
    const std::string label = r < int(trace.row_labels.size()) ? trace.row_labels[r].text : "";
    out << "<text class=\"row-label\" x=\"" << left - 6 << "\" y=\"" << top + r * cell + cell * 2 / 3
        << "\" text-anchor=\"end\">" << xml_escape(label) << "</text>\n";
    for (int c = 0; c < cols; ++c) {
      const double w = std::clamp(trace.weights(r, c), 0.0, 1.0);
      const int g = static_cast<int>(std::lround(255.0 * (1.0 - w)));
      out << "<rect class=\"cell\" x=\"" << left + c * cell << "\" y=\"" << top + r * cell
          << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << g << ','
          << g << ',' << g << ")\"><title>" << shortest(trace.weights(r, c)) << "</title></rect>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace morphoseq
