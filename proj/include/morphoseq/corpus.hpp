#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace morphoseq {

/// Part of speech plus UD-style Key=Value pairs, kept in canonical order
/// (keys sorted lexicographically) so serialization is deterministic.
class FeatureSet {
public:
  FeatureSet() = default;
  /// Throws ValidationError on an empty POS, a malformed pair or a duplicate key.
  FeatureSet(std::string pos, std::vector<std::pair<std::string, std::string>> features);

  /// Parses `POS;Key=Val;...`.
  static FeatureSet parse(const std::string& text, std::size_t line = 0);

  const std::string& pos() const noexcept { return pos_; }
  const std::vector<std::pair<std::string, std::string>>& features() const noexcept {
    return features_;
  }

  /// `POS;Key=Val;...` in canonical order.
  std::string to_string() const;

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
  friend auto operator<=>(const FeatureSet&, const FeatureSet&) = default;

private:
  std::string pos_;
  std::vector<std::pair<std::string, std::string>> features_;
};

/// A word split into prefixes, stem and suffixes. Infixes live inside the stem.
struct Segmentation {
  std::vector<std::string> prefixes;
  std::string stem;
  std::vector<std::string> suffixes;

  /// Parses `pre1;pre2|stem|suf1;suf2`; throws ParseError / ValidationError.
  static Segmentation parse(const std::string& text, std::size_t line = 0);

  std::string surface() const;
  std::string to_string() const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

struct InflectionEntry {
  std::string lang;
  Segmentation lemma_seg;
  FeatureSet lemma_feats;
  Segmentation form_seg;
  FeatureSet form_feats;

  std::string lemma() const { return lemma_seg.surface(); }
  std::string form() const { return form_seg.surface(); }

  /// One corpus-TSV line, without the trailing newline.
  std::string to_tsv() const;

  friend bool operator==(const InflectionEntry&, const InflectionEntry&) = default;
};

struct ParseOptions {
  /// When non-empty, entries of any other language are rejected.
  std::set<std::string> languages;
};

/// Reads corpus-TSV: lang, lemma segmentation, lemma features, form segmentation,
/// form features. Blank lines and lines starting with '#' are skipped.
std::vector<InflectionEntry> parse_corpus(std::istream& in, const ParseOptions& opts = {});
std::vector<InflectionEntry> parse_corpus_file(const std::string& path,
                                               const ParseOptions& opts = {});

void write_corpus(std::ostream& out, const std::vector<InflectionEntry>& entries);

struct LanguageStats {
  std::size_t lemmas = 0;
  std::size_t words = 0;
  friend bool operator==(const LanguageStats&, const LanguageStats&) = default;
};

/// Distinct lemma surfaces and entry counts per language.
std::map<std::string, LanguageStats> corpus_stats(const std::vector<InflectionEntry>& entries);

struct CorpusSplit {
  std::vector<InflectionEntry> train;
  std::vector<InflectionEntry> test;
  std::vector<InflectionEntry> unseen;
  std::uint64_t seed = 0;
};

struct SplitOptions {
  std::size_t n_holdout_lemmas = 100;
  double test_fraction = 0.2;
};

/// Holds out `n_holdout_lemmas` random lemmas per language as `unseen`, then
/// moves ceil(test_fraction * k) of each remaining lemma's k distinct forms
/// (never all of them) to `test`. Throws ArgumentError when a language has
/// too few lemmas.
CorpusSplit split_standard(const std::vector<InflectionEntry>& entries, std::uint64_t seed,
                           const SplitOptions& opts = {});

struct LowResourceOptions {
  std::size_t train_size = 3000;
  std::size_t test_max = 500;
};

/// Subsamples train and test without replacement; `unseen` is carried through.
CorpusSplit split_low_resource(const CorpusSplit& split, std::uint64_t seed,
                               const LowResourceOptions& opts = {});

/// Describes the first violated split invariant, or nullopt when all hold.
std::optional<std::string> check_split_invariants(const CorpusSplit& split);

/// Entries grouped by language, in order of first appearance.
std::vector<std::pair<std::string, std::vector<InflectionEntry>>> by_language(
    const std::vector<InflectionEntry>& entries);

}  // namespace morphoseq
