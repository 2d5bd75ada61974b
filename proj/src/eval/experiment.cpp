#include "morphoseq/errors.hpp"
#include "morphoseq/eval.hpp"
#include "morphoseq/rng.hpp"

namespace morphoseq {

LanguageResult run_experiment_on_split(int id, const std::string& lang, const CorpusSplit& split,
                                       const ExperimentConfig& config, std::uint64_t seed,
                                       const EpochCallback& on_epoch) {
  if (id < 1 || id > 3) throw ArgumentError("experiment id must be 1, 2 or 3");
  if (config.modes.empty()) throw ArgumentError("no modes to run");

  const std::vector<InflectionEntry>* train_set = &split.train;
  const std::vector<InflectionEntry>* test_set = nullptr;
  CorpusSplit reduced;
  switch (id) {
    case 1: test_set = &split.test; break;
    case 2:
      if (split.unseen.empty()) throw ArgumentError("experiment 2 needs unseen lemmas");
      test_set = &split.unseen;
      break;
    case 3:
      reduced = split_low_resource(split, derive_seed(seed, "low_resource"), config.low_resource);
      train_set = &reduced.train;
      test_set = &reduced.test;
      break;
  }
  if (train_set->empty()) throw ArgumentError("empty training set for '" + lang + "'");

  // Experiments 1 and 2 share the model seed so experiment 2 reuses experiment 1's models.
  ModelConfig model_cfg = config.model;
  model_cfg.seed = derive_seed(seed, id == 3 ? "model-low-resource:" + lang : "model:" + lang);

  LanguageResult result;
  result.lang = lang;
  result.train_size = train_set->size();
  for (Mode mode : config.modes) {
    Vocabulary vocab = Vocabulary::build(*train_set, mode);
    TrainResult trained = train(*train_set, vocab, model_cfg, on_epoch);
    EvalReport report = evaluate(trained.params, vocab, *test_set, model_cfg, config.eval);
    report.lang = lang;
    report.experiment = id;
    result.runs.push_back({mode, std::move(report), std::move(trained.epoch_losses),
                           std::move(trained.params), std::move(vocab)});
  }

  const ModeRun* morph = nullptr;
  const ModeRun* chars = nullptr;
  for (const auto& r : result.runs) {
    if (r.mode == Mode::CharMorpheme) morph = &r;
    if (r.mode == Mode::CharOnly) chars = &r;
  }
  if (morph && chars && !test_set->empty()) {
    result.significance =
        paired_significance(morph->report.records, chars->report.records, config.n_permutations,
                            derive_seed(seed, "significance:" + lang));
  }
  return result;
}

ExperimentResult run_experiment(int id, const std::vector<InflectionEntry>& corpus,
                                const ExperimentConfig& config, std::uint64_t seed,
                                const EpochCallback& on_epoch) {
  if (id < 1 || id > 3) throw ArgumentError("experiment id must be 1, 2 or 3");
  if (corpus.empty()) throw ArgumentError("empty corpus");
  ExperimentResult out;
  out.id = id;
  out.seed = seed;
  const CorpusSplit split = split_standard(corpus, derive_seed(seed, "split"), config.split);
  for (const auto& [lang, entries] : by_language(corpus)) {
    CorpusSplit lang_split;
    lang_split.seed = split.seed;
    for (const auto& e : split.train) if (e.lang == lang) lang_split.train.push_back(e);
    for (const auto& e : split.test) if (e.lang == lang) lang_split.test.push_back(e);
    for (const auto& e : split.unseen) if (e.lang == lang) lang_split.unseen.push_back(e);
    out.languages.push_back(run_experiment_on_split(id, lang, lang_split, config, seed, on_epoch));
  }
  return out;
}

}  // namespace morphoseq
