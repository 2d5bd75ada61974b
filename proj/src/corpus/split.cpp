#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "morphoseq/corpus.hpp"
#include "morphoseq/errors.hpp"
#include "morphoseq/rng.hpp"

namespace morphoseq {
namespace {

enum class Dest { Train, Test, Unseen };

std::string lemma_key(const InflectionEntry& e) { return e.lang + '\t' + e.lemma(); }

std::string item_key(const InflectionEntry& e) {
  return e.lang + '\t' + e.lemma() + '\t' + e.form() + '\t' + e.form_feats.to_string();
}

template <class F>
std::vector<InflectionEntry> sample_per_language(const std::vector<InflectionEntry>& entries,
                                                 std::size_t per_language, const Rng& rng,
                                                 F&& label) {
  std::vector<InflectionEntry> out;
  for (const auto& [lang, group] : by_language(entries)) {
    Rng r = rng.split(label(lang));
    for (std::size_t i : r.sample_indices(group.size(), per_language)) out.push_back(group[i]);
  }
  return out;
}

}  // namespace

CorpusSplit split_standard(const std::vector<InflectionEntry>& entries, std::uint64_t seed,
                           const SplitOptions& opts) {
  if (!(opts.test_fraction >= 0.0 && opts.test_fraction < 1.0)) {
    throw ArgumentError("test_fraction must be in [0, 1)");
  }
  const Rng root(derive_seed(seed, "split_standard"));

  // Distinct lemmas per language and distinct (form, features) items per lemma,
  // both in order of first appearance.
  struct LemmaInfo {
    std::vector<std::string> items;
  };
  std::unordered_map<std::string, std::vector<std::string>> lemmas_by_lang;
  std::unordered_map<std::string, LemmaInfo> lemma_info;
  std::unordered_set<std::string> seen_items;
  std::vector<std::string> lang_order;
  for (const auto& e : entries) {
    const std::string lk = lemma_key(e);
    auto [it, fresh_lemma] = lemma_info.try_emplace(lk);
    if (fresh_lemma) {
      auto [lit, fresh_lang] = lemmas_by_lang.try_emplace(e.lang);
      if (fresh_lang) lang_order.push_back(e.lang);
      lit->second.push_back(lk);
    }
    const std::string ik = item_key(e);
    if (seen_items.insert(ik).second) it->second.items.push_back(ik);
  }

  std::unordered_map<std::string, Dest> lemma_dest;  // only for held-out lemmas
  std::unordered_map<std::string, Dest> item_dest;
  for (const auto& lang : lang_order) {
    const auto& lemmas = lemmas_by_lang[lang];
    if (lemmas.size() <= opts.n_holdout_lemmas) {
      throw ArgumentError("language '" + lang + "' has " + std::to_string(lemmas.size()) +
                          " lemmas; need more than " + std::to_string(opts.n_holdout_lemmas) +
                          " to hold some out");
    }
    Rng rng = root.split("lang:" + lang);
    std::unordered_set<std::size_t> held;
    for (std::size_t i : rng.sample_indices(lemmas.size(), opts.n_holdout_lemmas)) held.insert(i);

    for (std::size_t li = 0; li < lemmas.size(); ++li) {
      if (held.contains(li)) {
        lemma_dest[lemmas[li]] = Dest::Unseen;
        continue;
      }
      const auto& items = lemma_info[lemmas[li]].items;
      const std::size_t k = items.size();
      std::size_t n_test = 0;
      if (k >= 2) {
        // The epsilon keeps products like 0.2 * 15 from rounding up past an integer.
        n_test = static_cast<std::size_t>(std::ceil(opts.test_fraction * double(k) - 1e-9));
        n_test = std::min(n_test, k - 1);
      }
      std::unordered_set<std::size_t> to_test;
      for (std::size_t i : rng.sample_indices(k, n_test)) to_test.insert(i);
      for (std::size_t i = 0; i < k; ++i) {
        item_dest[items[i]] = to_test.contains(i) ? Dest::Test : Dest::Train;
      }
    }
  }

  CorpusSplit out;
  out.seed = seed;
  for (const auto& e : entries) {
    Dest d;
    if (auto it = lemma_dest.find(lemma_key(e)); it != lemma_dest.end()) {
      d = it->second;
    } else {
      d = item_dest.at(item_key(e));
    }
    switch (d) {
      case Dest::Train: out.train.push_back(e); break;
      case Dest::Test: out.test.push_back(e); break;
      case Dest::Unseen: out.unseen.push_back(e); break;
    }
  }
  return out;
}

CorpusSplit split_low_resource(const CorpusSplit& split, std::uint64_t seed,
                               const LowResourceOptions& opts) {
  if (split.train.empty()) throw ArgumentError("split_low_resource: empty training set");
  const Rng root(derive_seed(seed, "split_low_resource"));
  CorpusSplit out;
  out.seed = seed;
  out.train = sample_per_language(split.train, opts.train_size, root,
                                  [](const std::string& l) { return "train:" + l; });
  out.test = sample_per_language(split.test, opts.test_max, root,
                                 [](const std::string& l) { return "test:" + l; });
  out.unseen = split.unseen;
  return out;
}

std::optional<std::string> check_split_invariants(const CorpusSplit& split) {
  std::unordered_map<std::string, int> owner;
  const std::vector<InflectionEntry>* lists[] = {&split.train, &split.test, &split.unseen};
  const char* names[] = {"train", "test", "unseen"};
  for (int l = 0; l < 3; ++l) {
    for (const auto& e : *lists[l]) {
      auto [it, inserted] = owner.try_emplace(item_key(e), l);
      if (!inserted && it->second != l) {
        return "item " + item_key(e) + " appears in both " + names[it->second] + " and " +
               names[l];
      }
    }
  }
  std::unordered_set<std::string> train_lemmas, test_lemmas;
  for (const auto& e : split.train) train_lemmas.insert(lemma_key(e));
  for (const auto& e : split.test) test_lemmas.insert(lemma_key(e));
  for (const auto& e : split.unseen) {
    if (train_lemmas.contains(lemma_key(e)) || test_lemmas.contains(lemma_key(e))) {
      return "unseen lemma '" + e.lemma() + "' also occurs in train or test";
    }
  }
  for (const auto& e : split.test) {
    if (!train_lemmas.contains(lemma_key(e))) {
      return "test lemma '" + e.lemma() + "' never occurs in train";
    }
  }
  return std::nullopt;
}

}  // namespace morphoseq
