#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include "morphoseq/errors.hpp"
#include "morphoseq/eval.hpp"

namespace morphoseq {
namespace {

constexpr std::string_view kCsvHeader = "lang,mode,experiment,test,right,wrong,acc,lev,p_value,significant";

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  // Width in code points; the dagger is three bytes but one column.
  std::size_t cols = 0;
  for (unsigned char c : s) cols += (c & 0xC0) != 0x80;
  if (cols < width) s.append(width - cols, ' ');
  return s;
}

template <class T>
std::optional<T> parse_opt(std::string_view field) {
  if (field.empty()) return std::nullopt;
  T v{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError(0, "bad numeric field '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::vector<ReportRow> report_rows(const std::vector<ExperimentResult>& results) {
  std::vector<ReportRow> rows;
  for (const auto& exp : results) {
    std::map<Mode, std::pair<double, double>> sums;  // acc, lev
    std::map<Mode, std::size_t> counts;
    std::vector<Mode> mode_order;
    for (const auto& lr : exp.languages) {
      Mode winner = Mode::CharMorpheme;
      bool has_winner = false;
      if (lr.significance && lr.significance->significant && lr.significance->statistic != 0.0) {
        winner = lr.significance->statistic > 0.0 ? Mode::CharMorpheme : Mode::CharOnly;
        has_winner = true;
      }
      for (const auto& run : lr.runs) {
        const EvalReport& r = run.report;
        ReportRow row;
        row.lang = lr.lang;
        row.mode = std::string(to_string(run.mode));
        row.experiment = exp.id;
        row.test = r.test_size;
        row.right = r.right;
        row.wrong = r.wrong;
        row.acc = r.accuracy;
        row.lev = r.mean_ratio;
        if (lr.significance) row.p_value = lr.significance->p_value;
        row.significant = has_winner && winner == run.mode;
        rows.push_back(row);
        if (!counts.contains(run.mode)) mode_order.push_back(run.mode);
        sums[run.mode].first += r.accuracy;
        sums[run.mode].second += r.mean_ratio;
        ++counts[run.mode];
      }
    }
    for (Mode m : mode_order) {
      ReportRow total;
      total.lang = "Total";
      total.mode = std::string(to_string(m));
      total.experiment = exp.id;
      const auto n = static_cast<double>(counts[m]);
      total.acc = sums[m].first / n;
      total.lev = sums[m].second / n;
      rows.push_back(total);
    }
  }
  return rows;
}

RenderedReport render_report(const std::vector<ExperimentResult>& results) {
  const auto rows = report_rows(results);
  RenderedReport out;

  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  for (const auto& r : rows) {
    csv << r.lang << ',' << r.mode << ',' << r.experiment << ','
        << (r.test ? std::to_string(*r.test) : "") << ','
        << (r.right ? std::to_string(*r.right) : "") << ','
        << (r.wrong ? std::to_string(*r.wrong) : "") << ',' << shortest(r.acc) << ','
        << shortest(r.lev) << ',' << (r.p_value ? shortest(*r.p_value) : "") << ','
        << (r.significant ? 1 : 0) << '\n';
  }
  out.csv = csv.str();

  std::ostringstream txt;
  int current = -1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ReportRow& r = rows[i];
    if (r.experiment != current) {
      if (current != -1) txt << '\n';
      current = r.experiment;
      txt << "Experiment " << current << '\n'
          << pad("lang", 14) << pad("test", 8) << pad("right", 9) << pad("wrong", 8)
          << pad("acc", 11) << pad("lev", 10) << "p\n";
    }
    const bool total = r.lang == "Total";
    std::string label = total ? "Total" : r.lang;
    if (r.mode == to_string(Mode::CharOnly)) label += total ? " char" : "_char";

    // Best of the pair: compare with the other mode of the same language.
    const ReportRow* other = nullptr;
    for (const auto& o : rows) {
      if (&o != &r && o.experiment == r.experiment && o.lang == r.lang && o.mode != r.mode) {
        other = &o;
      }
    }
    auto mark = [&](double mine, std::optional<double> theirs) {
      return theirs && mine > *theirs ? "*" : "";
    };
    std::string right = r.right ? std::to_string(*r.right) : "";
    std::string acc = fixed4(r.acc);
    std::string lev = fixed4(r.lev);
    if (other) {
      if (r.right && other->right) right += mark(double(*r.right), double(*other->right));
      acc += mark(r.acc, other->acc);
      lev += mark(r.lev, other->lev);
    }
    if (r.significant) acc += "\xE2\x80\xA0";  // dagger
    txt << pad(label, 14) << pad(r.test ? std::to_string(*r.test) : "", 8) << pad(right, 9)
        << pad(r.wrong ? std::to_string(*r.wrong) : "", 8) << pad(acc, 11) << pad(lev, 10)
        << (r.p_value && r.mode == to_string(Mode::CharMorpheme) ? fixed4(*r.p_value) : "")
        << '\n';
  }
  out.text = txt.str();
  return out;
}

std::vector<ReportRow> parse_report_csv(std::string_view csv) {
  std::vector<ReportRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kCsvHeader) throw ParseError(1, "unexpected report header");
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t s = 0;
    while (true) {
      const std::size_t c = line.find(',', s);
      f.push_back(line.substr(s, c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (f.size() != 10) throw ParseError(line_no, "expected 10 report columns");
    try {
      ReportRow r;
      r.lang = std::string(f[0]);
      r.mode = std::string(f[1]);
      r.experiment = parse_opt<int>(f[2]).value_or(0);
      r.test = parse_opt<std::size_t>(f[3]);
      r.right = parse_opt<std::size_t>(f[4]);
      r.wrong = parse_opt<std::size_t>(f[5]);
      r.acc = parse_opt<double>(f[6]).value_or(0.0);
      r.lev = parse_opt<double>(f[7]).value_or(0.0);
      r.p_value = parse_opt<double>(f[8]);
      r.significant = f[9] == "1";
      rows.push_back(std::move(r));
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return rows;
}

}  // namespace morphoseq
