#include <algorithm>
#include <cmath>

#include "morphoseq/errors.hpp"
#include "morphoseq/eval.hpp"
#include "morphoseq/rng.hpp"
#include "morphoseq/utf8.hpp"

namespace morphoseq {

std::size_t indel_distance(std::u32string_view a, std::u32string_view b) {
  // Single-row DP over b; prev[j] = distance(a[0..i), b[0..j)).
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double lev_ratio(std::string_view w1, std::string_view w2) {
  const std::u32string a = utf8::decode(w1);
  const std::u32string b = utf8::decode(w2);
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  const std::size_t dist = indel_distance(a, b);
  return static_cast<double>(total - dist) / static_cast<double>(total);
}

PredictionRecord make_record(std::string item_key, std::string target, std::string predicted) {
  PredictionRecord r;
  r.item_key = std::move(item_key);
  r.correct = target == predicted;
  r.ratio = r.correct ? 1.0 : lev_ratio(target, predicted);
  r.target_surface = std::move(target);
  r.predicted_surface = std::move(predicted);
  return r;
}

std::string record_key(const InflectionEntry& e, std::size_t position) {
  return std::to_string(position) + '\t' + e.to_tsv();
}

EvalReport summarize(std::string lang, Mode mode, int experiment,
                     std::vector<PredictionRecord> records) {
  EvalReport r;
  r.lang = std::move(lang);
  r.mode = mode;
  r.experiment = experiment;
  r.test_size = records.size();
  double ratio_sum = 0.0;
  for (const auto& rec : records) {
    if (rec.correct) ++r.right;
    ratio_sum += rec.ratio;
  }
  r.wrong = r.test_size - r.right;
  if (r.test_size > 0) {
    r.accuracy = static_cast<double>(r.right) / static_cast<double>(r.test_size);
    r.mean_ratio = ratio_sum / static_cast<double>(r.test_size);
  }
  r.records = std::move(records);
  return r;
}

SignificanceResult paired_significance(const std::vector<PredictionRecord>& a,
                                       const std::vector<PredictionRecord>& b,
                                       std::size_t n_permutations, std::uint64_t seed) {
  if (a.size() != b.size()) {
    throw ArgumentError("paired_significance: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + " records");
  }
  if (a.empty()) throw ArgumentError("paired_significance: no records");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].item_key != b[i].item_key || a[i].target_surface != b[i].target_surface) {
      throw ArgumentError("paired_significance: records differ at position " + std::to_string(i));
    }
  }
  // Only discordant pairs change under swapping; work with integer count differences.
  std::vector<int> diffs;
  long observed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = int(a[i].correct) - int(b[i].correct);
    observed += d;
    if (d != 0) diffs.push_back(d);
  }
  const long abs_observed = std::labs(observed);
  Rng rng(derive_seed(seed, "paired_significance"));
  std::size_t at_least = 0;
  for (std::size_t p = 0; p < n_permutations; ++p) {
    long sum = 0;
    for (int d : diffs) sum += rng.coin() ? -d : d;
    if (std::labs(sum) >= abs_observed) ++at_least;
  }
  SignificanceResult res;
  res.n_permutations = n_permutations;
  res.statistic = static_cast<double>(observed) / static_cast<double>(a.size());
  res.p_value = static_cast<double>(at_least + 1) / static_cast<double>(n_permutations + 1);
  res.significant = res.p_value <= kSignificanceLevel;
  return res;
}

}  // namespace morphoseq
