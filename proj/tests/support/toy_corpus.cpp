#include "support/toy_corpus.hpp"

#include <set>

#include "morphoseq/rng.hpp"

namespace morphoseq::testing {
namespace {

constexpr const char* kCases[] = {"Nom", "Gen", "Par", "Ine", "Ela"};
constexpr const char* kCaseSuffix[] = {"", "n", "ta", "ssa", "sta"};

}  // namespace

ToyLanguage ToyLanguage::generate(std::size_t n_stems, std::uint64_t seed) {
  const std::string consonants = "ptkmnslrvhd";
  const std::string vowels = "aeiouy";
  Rng rng(seed);
  ToyLanguage lang;
  std::set<std::string> seen;
  while (lang.stems.size() < n_stems) {
    const std::size_t syllables = 2 + rng.below(2);
    std::string stem;
    for (std::size_t s = 0; s < syllables; ++s) {
      stem += consonants[rng.below(consonants.size())];
      stem += vowels[rng.below(vowels.size())];
    }
    if (rng.coin()) stem += consonants[rng.below(consonants.size())];
    if (seen.insert(stem).second) lang.stems.push_back(stem);
  }
  return lang;
}

Segmentation ToyLanguage::inflect(const std::string& stem, std::size_t slot) {
  const std::size_t number = slot / 10;
  const std::size_t c = (slot / 2) % 5;
  const std::size_t poss = slot % 2;
  Segmentation seg;
  seg.stem = stem;
  if (number == 1) seg.suffixes.push_back("i");
  if (c != 0) seg.suffixes.push_back(kCaseSuffix[c]);
  if (poss == 1) seg.suffixes.push_back("ni");
  return seg;
}

FeatureSet ToyLanguage::features(std::size_t slot) {
  const std::size_t number = slot / 10;
  const std::size_t c = (slot / 2) % 5;
  const std::size_t poss = slot % 2;
  std::vector<std::pair<std::string, std::string>> f{
      {"Case", kCases[c]}, {"Number", number == 1 ? "Plur" : "Sing"}};
  if (poss == 1) f.emplace_back("Person[psor]", "1");
  return FeatureSet("NOUN", std::move(f));
}

std::vector<InflectionEntry> ToyLanguage::paradigm_entries(std::size_t stem_index) const {
  std::vector<InflectionEntry> out;
  for (std::size_t slot = 0; slot < kSlots; ++slot) {
    out.push_back({"toy", inflect(stems[stem_index], 0), features(0),
                   inflect(stems[stem_index], slot), features(slot)});
  }
  return out;
}

std::vector<InflectionEntry> ToyLanguage::reinflection_entries(std::size_t stem_index) const {
  std::vector<InflectionEntry> out;
  for (std::size_t src = 0; src < kSlots; ++src) {
    for (std::size_t dst = 0; dst < kSlots; ++dst) {
      out.push_back({"toy", inflect(stems[stem_index], src), features(src),
                     inflect(stems[stem_index], dst), features(dst)});
    }
  }
  return out;
}

std::vector<InflectionEntry> small_toy_corpus(std::size_t n, std::uint64_t seed) {
  const ToyLanguage lang = ToyLanguage::generate((n + ToyLanguage::kSlots - 1) / 5 + 1, seed);
  Rng rng(seed ^ 0x5bd1e995);
  std::vector<InflectionEntry> out;
  for (std::size_t s = 0; out.size() < n; ++s) {
    auto p = lang.paradigm_entries(s);
    // Five random slots per stem keeps the corpus varied.
    for (std::size_t i : rng.sample_indices(p.size(), 5)) {
      if (out.size() < n) out.push_back(p[i]);
    }
  }
  return out;
}

std::vector<InflectionEntry> random_corpus(std::uint64_t seed, std::size_t n_lemmas,
                                           std::size_t max_forms) {
  const ToyLanguage lang = ToyLanguage::generate(n_lemmas, seed);
  Rng rng(seed + 1);
  std::vector<InflectionEntry> out;
  for (std::size_t s = 0; s < n_lemmas; ++s) {
    const std::size_t k = 1 + rng.below(max_forms);
    auto p = lang.paradigm_entries(s);
    for (std::size_t i : rng.sample_indices(p.size(), k)) out.push_back(p[i]);
    // occasional exact duplicate line
    if (rng.below(10) == 0) out.push_back(out.back());
  }
  rng.shuffle(out);
  return out;
}

InflectionEntry retrogradinen_entry() {
  InflectionEntry e;
  e.lang = "fin";
  e.lemma_seg = Segmentation{{}, "retrogradi", {"nen"}};
  e.lemma_feats = FeatureSet("ADJ", {{"Case", "Nom"}, {"Number", "Sing"}});
  e.form_seg = Segmentation{{}, "retrogradi", {"sta"}};
  e.form_feats = FeatureSet("ADJ", {{"Case", "Par"}, {"Number", "Sing"}});
  return e;
}

}  // namespace morphoseq::testing
