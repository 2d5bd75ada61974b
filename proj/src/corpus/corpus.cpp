#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "morphoseq/corpus.hpp"
#include "morphoseq/errors.hpp"
#include "morphoseq/utf8.hpp"

namespace morphoseq {
namespace {

constexpr std::string_view kZero = "\xE2\x88\x85";  // ∅
constexpr std::string_view kEndOfWord = "<\\w>";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_segment(const std::string& seg, std::size_t line) {
  if (seg.empty()) throw ValidationError(line, "empty morpheme segment");
  if (!utf8::is_valid(seg)) throw ValidationError(line, "segment is not valid UTF-8");
  if (seg.find(kZero) != std::string::npos) {
    throw ValidationError(line, "segment '" + seg + "' contains the reserved zero morpheme");
  }
  if (seg.find(kEndOfWord) != std::string::npos) {
    throw ValidationError(line, "segment '" + seg + "' contains the reserved end-of-word symbol");
  }
  if (seg.find_first_of(" \t\r\n") != std::string::npos) {
    throw ValidationError(line, "segment '" + seg + "' contains whitespace");
  }
}

bool has_bad_feature_chars(const std::string& s) {
  return s.empty() || s.find_first_of(" \t\r\n;|") != std::string::npos || !utf8::is_valid(s);
}

std::vector<std::string> parse_affixes(const std::string& field, std::size_t line) {
  if (field.empty()) return {};
  auto parts = split(field, ';');
  for (const auto& p : parts) check_segment(p, line);
  return parts;
}

void check_lang(const std::string& lang, std::size_t line) {
  const bool ok = lang.size() == 3 &&
                  std::all_of(lang.begin(), lang.end(), [](char c) { return c >= 'a' && c <= 'z'; });
  if (!ok) throw ValidationError(line, "'" + lang + "' is not an ISO 639-3 code");
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

FeatureSet::FeatureSet(std::string pos, std::vector<std::pair<std::string, std::string>> features)
    : pos_(std::move(pos)), features_(std::move(features)) {
  if (has_bad_feature_chars(pos_) || pos_.find('=') != std::string::npos) {
    throw ValidationError(0, "invalid part-of-speech tag '" + pos_ + "'");
  }
  for (const auto& [k, v] : features_) {
    if (has_bad_feature_chars(k) || k.find('=') != std::string::npos || has_bad_feature_chars(v) ||
        v.find('=') != std::string::npos) {
      throw ValidationError(0, "invalid feature '" + k + "=" + v + "'");
    }
  }
  std::sort(features_.begin(), features_.end());
  for (std::size_t i = 1; i < features_.size(); ++i) {
    if (features_[i].first == features_[i - 1].first) {
      throw ValidationError(0, "duplicate feature key '" + features_[i].first + "'");
    }
  }
}

FeatureSet FeatureSet::parse(const std::string& text, std::size_t line) {
  const auto parts = split(text, ';');
  std::vector<std::pair<std::string, std::string>> feats;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& p = parts[i];
    const std::size_t eq = p.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == p.size() ||
        p.find('=', eq + 1) != std::string::npos) {
      throw ValidationError(line, "feature '" + p + "' is not of the form Key=Value");
    }
    feats.emplace_back(p.substr(0, eq), p.substr(eq + 1));
  }
  try {
    return FeatureSet(parts[0], std::move(feats));
  } catch (const ValidationError& e) {
    throw ValidationError(line, e.what());
  }
}

std::string FeatureSet::to_string() const {
  std::string out = pos_;
  for (const auto& [k, v] : features_) out += ";" + k + "=" + v;
  return out;
}

Segmentation Segmentation::parse(const std::string& text, std::size_t line) {
  const auto parts = split(text, '|');
  if (parts.size() != 3) {
    throw ParseError(line, "segmentation '" + text + "' must look like prefixes|stem|suffixes");
  }
  Segmentation seg;
  seg.prefixes = parse_affixes(parts[0], line);
  if (parts[1].empty()) throw ValidationError(line, "empty stem in '" + text + "'");
  check_segment(parts[1], line);
  seg.stem = parts[1];
  seg.suffixes = parse_affixes(parts[2], line);
  return seg;
}

std::string Segmentation::surface() const {
  std::string out;
  for (const auto& p : prefixes) out += p;
  out += stem;
  for (const auto& s : suffixes) out += s;
  return out;
}

std::string Segmentation::to_string() const {
  return join(prefixes, ';') + "|" + stem + "|" + join(suffixes, ';');
}

std::string InflectionEntry::to_tsv() const {
  return lang + "\t" + lemma_seg.to_string() + "\t" + lemma_feats.to_string() + "\t" +
         form_seg.to_string() + "\t" + form_feats.to_string();
}

std::vector<InflectionEntry> parse_corpus(std::istream& in, const ParseOptions& opts) {
  std::vector<InflectionEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 5) {
      throw ParseError(lineno, "expected 5 tab-separated columns, found " +
                                   std::to_string(cols.size()));
    }
    InflectionEntry e;
    e.lang = cols[0];
    check_lang(e.lang, lineno);
    if (!opts.languages.empty() && !opts.languages.contains(e.lang)) {
      throw ValidationError(lineno, "language '" + e.lang + "' is not configured");
    }
    e.lemma_seg = Segmentation::parse(cols[1], lineno);
    e.lemma_feats = FeatureSet::parse(cols[2], lineno);
    e.form_seg = Segmentation::parse(cols[3], lineno);
    e.form_feats = FeatureSet::parse(cols[4], lineno);
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<InflectionEntry> parse_corpus_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open corpus file '" + path + "'");
  return parse_corpus(in, opts);
}

void write_corpus(std::ostream& out, const std::vector<InflectionEntry>& entries) {
  for (const auto& e : entries) out << e.to_tsv() << '\n';
}

std::map<std::string, LanguageStats> corpus_stats(const std::vector<InflectionEntry>& entries) {
  std::map<std::string, LanguageStats> stats;
  std::map<std::string, std::unordered_set<std::string>> lemmas;
  for (const auto& e : entries) {
    ++stats[e.lang].words;
    lemmas[e.lang].insert(e.lemma());
  }
  for (auto& [lang, s] : stats) s.lemmas = lemmas[lang].size();
  return stats;
}

std::vector<std::pair<std::string, std::vector<InflectionEntry>>> by_language(
    const std::vector<InflectionEntry>& entries) {
  std::vector<std::pair<std::string, std::vector<InflectionEntry>>> groups;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& e : entries) {
    auto [it, inserted] = index.try_emplace(e.lang, groups.size());
    if (inserted) groups.emplace_back(e.lang, std::vector<InflectionEntry>{});
    groups[it->second].second.push_back(e);
  }
  return groups;
}

}  // namespace morphoseq
