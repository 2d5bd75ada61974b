#include "morphoseq/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "morphoseq/checkpoint.hpp"
#include "morphoseq/corpus.hpp"
#include "morphoseq/errors.hpp"
#include "morphoseq/eval.hpp"
#include "morphoseq/heatmap.hpp"
#include "morphoseq/rng.hpp"

#ifndef MORPHOSEQ_VERSION
#define MORPHOSEQ_VERSION "0.0.0"
#endif

namespace morphoseq::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

/// Raised for bad flag combinations found after CLI11 parsing succeeded.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File-system trouble: unreadable input or unwritable output.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

// Flags shared by the subcommands, with their defaults.
struct Options {
  std::string corpus;
  std::string mode = "both";
  std::uint64_t seed = 1;
  ModelConfig model;
  std::size_t train_size = 3000;
  std::size_t test_max = 500;
  std::size_t holdout = 100;
  double test_fraction = 0.2;
  std::size_t permutations = 10000;
  std::string out = ".";
  bool dump_tokens = false;
  bool quiet = false;
  bool save_models = false;

  std::string checkpoint;
  std::string lemma;
  std::string lemma_feats;
  std::string form_feats;
  std::string input;
  std::string lang = "und";
  int experiment = 0;
  std::string manifest;
};

std::vector<Mode> modes_of(const std::string& name) {
  if (name == "both") return {Mode::CharMorpheme, Mode::CharOnly};
  if (auto m = parse_mode(name)) return {*m};
  throw UsageError("--mode must be char, charmorph or both");
}

json model_json(const ModelConfig& c) {
  return {{"embed_dim", c.embed_dim},   {"hidden_dim", c.hidden_dim},
          {"batch_size", c.batch_size}, {"epochs", c.epochs},
          {"max_decode_len", c.max_decode_len}, {"adadelta_rho", c.adadelta.rho},
          {"adadelta_eps", c.adadelta.eps}};
}

class Manifest {
public:
  Manifest(const std::vector<std::string>& argv, std::string command)
      : started_(utc_now()) {
    doc_["tool"] = "morphoseq";
    doc_["version"] = MORPHOSEQ_VERSION;
    doc_["command"] = std::move(command);
    doc_["argv"] = argv;
    doc_["started"] = started_;
  }

  json& operator[](const char* key) { return doc_[key]; }

  void corpus(const std::string& path, const std::string& bytes, std::size_t entries) {
    doc_["corpus"] = {{"path", path}, {"fnv1a64", fnv1a64_hex(bytes)}, {"entries", entries}};
  }

  void output(const fs::path& p) { outputs_.push_back(p.filename().string()); }

  void write(const fs::path& dir) {
    doc_["outputs"] = outputs_;
    doc_["finished"] = utc_now();
    write_file(dir / "manifest.json", doc_.dump(2) + "\n");
  }

private:
  std::string started_;
  json doc_;
  std::vector<std::string> outputs_;
};

struct LoadedCorpus {
  std::string bytes;
  std::vector<InflectionEntry> entries;
};

LoadedCorpus load_corpus(const std::string& path) {
  if (path.empty()) throw UsageError("--corpus is required");
  LoadedCorpus c;
  c.bytes = read_file(path);
  std::istringstream in(c.bytes);
  c.entries = parse_corpus(in);
  if (c.entries.empty()) throw ArgumentError("corpus '" + path + "' has no entries");
  return c;
}

std::string corpus_text(const std::vector<InflectionEntry>& entries) {
  std::ostringstream out;
  write_corpus(out, entries);
  return out.str();
}

EpochCallback progress(std::ostream& err, bool quiet, std::string label) {
  if (quiet) return {};
  return [&err, label = std::move(label)](std::size_t epoch, double loss) {
    err << label << " epoch " << epoch + 1 << " loss " << std::setprecision(6) << loss << '\n';
  };
}

std::string loss_csv(const std::vector<double>& losses) {
  std::ostringstream out;
  out << "epoch,loss\n" << std::setprecision(17);
  for (std::size_t i = 0; i < losses.size(); ++i) out << i + 1 << ',' << losses[i] << '\n';
  return out.str();
}

// ---- subcommands ---------------------------------------------------------

int cmd_stats(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  const LoadedCorpus c = load_corpus(o.corpus);
  std::ostringstream table;
  table << "lang\tlemmas\twords\n";
  std::size_t lemmas = 0, words = 0;
  for (const auto& [lang, s] : corpus_stats(c.entries)) {
    table << lang << '\t' << s.lemmas << '\t' << s.words << '\n';
    lemmas += s.lemmas;
    words += s.words;
  }
  table << "Total\t" << lemmas << '\t' << words << '\n';
  out << table.str();
  if (o.out != ".") {
    const fs::path dir = ensure_dir(o.out);
    Manifest m(argv, "stats");
    m.corpus(o.corpus, c.bytes, c.entries.size());
    write_file(dir / "stats.tsv", table.str());
    m.output(dir / "stats.tsv");
    m.write(dir);
  }
  return kOk;
}

int cmd_prepare(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  const LoadedCorpus c = load_corpus(o.corpus);
  const std::uint64_t split_seed = derive_seed(o.seed, "split");
  const CorpusSplit split = split_standard(c.entries, split_seed, {o.holdout, o.test_fraction});
  if (auto bad = check_split_invariants(split)) throw ArgumentError("split invariant: " + *bad);

  const fs::path dir = ensure_dir(o.out);
  Manifest m(argv, "prepare");
  m.corpus(o.corpus, c.bytes, c.entries.size());
  m["seeds"] = {{"seed", o.seed}, {"split", split_seed}};
  m["split"] = {{"n_holdout_lemmas", o.holdout}, {"test_fraction", o.test_fraction}};

  const std::pair<const char*, const std::vector<InflectionEntry>*> parts[] = {
      {"train.tsv", &split.train}, {"test.tsv", &split.test}, {"unseen.tsv", &split.unseen}};
  for (const auto& [name, entries] : parts) {
    write_file(dir / name, corpus_text(*entries));
    m.output(dir / name);
  }

  // Corpus size per language and how it was divided.
  const auto all = corpus_stats(c.entries);
  const auto tr = corpus_stats(split.train);
  const auto te = corpus_stats(split.test);
  const auto un = corpus_stats(split.unseen);
  auto words = [](const std::map<std::string, LanguageStats>& s, const std::string& l) {
    auto it = s.find(l);
    return it == s.end() ? std::size_t{0} : it->second.words;
  };
  auto lemmas = [](const std::map<std::string, LanguageStats>& s, const std::string& l) {
    auto it = s.find(l);
    return it == s.end() ? std::size_t{0} : it->second.lemmas;
  };
  std::ostringstream table;
  table << "lang\tlemmas\twords\ttrain_words\ttest_words\tunseen_lemmas\tunseen_words\n";
  for (const auto& [lang, s] : all) {
    table << lang << '\t' << s.lemmas << '\t' << s.words << '\t' << words(tr, lang) << '\t'
          << words(te, lang) << '\t' << lemmas(un, lang) << '\t' << words(un, lang) << '\n';
  }
  write_file(dir / "stats.tsv", table.str());
  m.output(dir / "stats.tsv");
  m.write(dir);
  out << table.str();
  return kOk;
}

ModelConfig validated(const ModelConfig& c) {
  try {
    c.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return c;
}

int cmd_train(const Options& o, const std::vector<std::string>& argv, std::ostream& out,
              std::ostream& err) {
  const auto modes = modes_of(o.mode);
  ModelConfig cfg = validated(o.model);
  const LoadedCorpus c = load_corpus(o.corpus);
  cfg.seed = derive_seed(o.seed, "model");

  const fs::path dir = ensure_dir(o.out);
  Manifest m(argv, "train");
  m.corpus(o.corpus, c.bytes, c.entries.size());
  m["config"] = model_json(cfg);
  m["seeds"] = {{"seed", o.seed}, {"model", cfg.seed}};
  json runs = json::array();
  for (Mode mode : modes) {
    const std::string name(to_string(mode));
    Model model{cfg, Vocabulary::build(c.entries, mode), {}};
    TrainResult r = train(c.entries, model.vocab, cfg, progress(err, o.quiet, "[" + name + "]"));
    model.params = std::move(r.params);
    const fs::path ckpt = dir / ("model_" + name + ".ckpt");
    const fs::path log = dir / ("loss_" + name + ".csv");
    save_checkpoint_file(ckpt.string(), model);
    write_file(log, loss_csv(r.epoch_losses));
    m.output(ckpt);
    m.output(log);
    runs.push_back({{"mode", name}, {"vocab_size", model.vocab.size()},
                    {"final_loss", r.epoch_losses.empty() ? 0.0 : r.epoch_losses.back()}});
    out << name << ": " << ckpt.string() << '\n';
  }
  m["runs"] = runs;
  m.write(dir);
  return kOk;
}

InflectionEntry single_input(const Options& o) {
  if (o.lemma.empty()) throw UsageError("--lemma is required (or --input FILE)");
  if (o.lemma_feats.empty() || o.form_feats.empty()) {
    throw UsageError("--lemma-feats and --form-feats are required with --lemma");
  }
  InflectionEntry e;
  e.lang = o.lang;
  // Plain words are taken as bare stems; `pre|stem|suf` gives the segmentation.
  e.lemma_seg = o.lemma.find('|') == std::string::npos ? Segmentation{{}, o.lemma, {}}
                                                       : Segmentation::parse(o.lemma);
  e.lemma_feats = FeatureSet::parse(o.lemma_feats);
  e.form_seg = e.lemma_seg;  // unknown; only the lemma side is encoded
  e.form_feats = FeatureSet::parse(o.form_feats);
  return e;
}

std::vector<InflectionEntry> inputs_of(const Options& o) {
  if (!o.input.empty()) return parse_corpus_file(o.input);
  return {single_input(o)};
}

int cmd_predict(const Options& o, std::ostream& out) {
  if (o.checkpoint.empty()) throw UsageError("--checkpoint is required");
  const Model model = load_checkpoint_file(o.checkpoint);
  for (const auto& e : inputs_of(o)) {
    const TokenList in_tokens = encode_input(e, model.vocab.mode());
    const auto ids = model.vocab.to_ids(in_tokens);
    const DecodeResult d = greedy_decode(model.params, ids, model.config.decode_limit(ids.size()));
    const TokenList predicted = model.vocab.to_tokens(d.tokens);
    if (o.dump_tokens) {
      out << "input:  " << join_tokens(in_tokens) << '\n'
          << "output: " << join_tokens(predicted) << '\n';
    }
    out << detokenize(predicted) << '\n';
  }
  return kOk;
}

int cmd_attn_export(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  if (o.checkpoint.empty()) throw UsageError("--checkpoint is required");
  const Model model = load_checkpoint_file(o.checkpoint);
  const auto inputs = inputs_of(o);
  const fs::path dir = ensure_dir(o.out);
  Manifest m(argv, "attn-export");
  m["checkpoint"] = {{"path", o.checkpoint}, {"fnv1a64", fnv1a64_hex(read_file(o.checkpoint))}};
  m["config"] = model_json(model.config);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto ids = model.vocab.to_ids(encode_input(inputs[i], model.vocab.mode()));
    const DecodeResult d = greedy_decode(model.params, ids, model.config.decode_limit(ids.size()));
    const AttentionTrace trace = make_trace(model.vocab, ids, d);
    const std::string stem = "attention_" + std::to_string(i + 1);
    write_file(dir / (stem + ".csv"), attention_csv(trace));
    write_file(dir / (stem + ".svg"), attention_svg(trace));
    m.output(dir / (stem + ".csv"));
    m.output(dir / (stem + ".svg"));
    out << inputs[i].lemma() << " -> " << detokenize(trace.row_labels) << "  "
        << (dir / (stem + ".svg")).string() << '\n';
  }
  m.write(dir);
  return kOk;
}

std::string predictions_tsv(const std::vector<InflectionEntry>& test, const EvalReport& r) {
  std::ostringstream out;
  out << "lemma\tlemma_feats\tform_feats\ttarget\tpredicted\tcorrect\tratio\n"
      << std::setprecision(17);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    const auto& e = test[i];
    out << e.lemma() << '\t' << e.lemma_feats.to_string() << '\t' << e.form_feats.to_string()
        << '\t' << rec.target_surface << '\t' << rec.predicted_surface << '\t'
        << (rec.correct ? 1 : 0) << '\t' << rec.ratio << '\n';
  }
  return out.str();
}

int cmd_experiment(const Options& o, const std::vector<std::string>& argv, std::ostream& out,
                   std::ostream& err) {
  ExperimentConfig cfg;
  cfg.modes = modes_of(o.mode);
  cfg.model = validated(o.model);
  cfg.split = {o.holdout, o.test_fraction};
  cfg.low_resource = {o.train_size, o.test_max};
  cfg.n_permutations = o.permutations;
  const LoadedCorpus c = load_corpus(o.corpus);

  const ExperimentResult result =
      run_experiment(o.experiment, c.entries, cfg, o.seed, progress(err, o.quiet, "[train]"));
  const RenderedReport report = render_report({result});

  const fs::path dir = ensure_dir(o.out);
  Manifest m(argv, "experiment");
  m.corpus(o.corpus, c.bytes, c.entries.size());
  m["experiment"] = o.experiment;
  m["config"] = model_json(cfg.model);
  m["split"] = {{"n_holdout_lemmas", o.holdout}, {"test_fraction", o.test_fraction},
                {"train_size", o.train_size}, {"test_max", o.test_max},
                {"permutations", o.permutations}};
  json seeds = {{"seed", o.seed}, {"split", derive_seed(o.seed, "split")}};
  if (o.experiment == 3) seeds["low_resource"] = derive_seed(o.seed, "low_resource");

  // Recreate each language's test list to label the per-item predictions.
  const CorpusSplit split = split_standard(c.entries, derive_seed(o.seed, "split"), cfg.split);
  for (const auto& lr : result.languages) {
    const std::string model_label =
        (o.experiment == 3 ? "model-low-resource:" : "model:") + lr.lang;
    seeds["model_" + lr.lang] = derive_seed(o.seed, model_label);
    CorpusSplit lang_split;
    lang_split.seed = split.seed;
    for (const auto& e : split.train) if (e.lang == lr.lang) lang_split.train.push_back(e);
    for (const auto& e : split.test) if (e.lang == lr.lang) lang_split.test.push_back(e);
    for (const auto& e : split.unseen) if (e.lang == lr.lang) lang_split.unseen.push_back(e);
    const std::vector<InflectionEntry>* test = &lang_split.test;
    CorpusSplit reduced;
    if (o.experiment == 2) test = &lang_split.unseen;
    if (o.experiment == 3) {
      reduced = split_low_resource(lang_split, derive_seed(o.seed, "low_resource"),
                                   cfg.low_resource);
      test = &reduced.test;
    }
    for (const auto& run : lr.runs) {
      const std::string name = lr.lang + "_" + std::string(to_string(run.mode));
      write_file(dir / ("predictions_" + name + ".tsv"), predictions_tsv(*test, run.report));
      write_file(dir / ("loss_" + name + ".csv"), loss_csv(run.loss_log));
      m.output(dir / ("predictions_" + name + ".tsv"));
      m.output(dir / ("loss_" + name + ".csv"));
      if (o.save_models) {
        ModelConfig saved_cfg = cfg.model;
        saved_cfg.seed = derive_seed(o.seed, model_label);
        const fs::path ckpt = dir / ("model_" + name + ".ckpt");
        save_checkpoint_file(ckpt.string(), Model{saved_cfg, run.vocab, run.params});
        m.output(ckpt);
      }
    }
  }
  m["seeds"] = seeds;
  write_file(dir / "report.txt", report.text);
  write_file(dir / "report.csv", report.csv);
  m.output(dir / "report.txt");
  m.output(dir / "report.csv");
  m.write(dir);
  out << report.text;
  return kOk;
}

int cmd_rerun(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.manifest.empty()) throw UsageError("--manifest is required");
  json doc;
  try {
    doc = json::parse(read_file(o.manifest));
  } catch (const json::exception& e) {
    throw ArgumentError("manifest '" + o.manifest + "' is not valid JSON: " + e.what());
  }
  if (!doc.contains("argv") || !doc["argv"].is_array() || doc["argv"].empty()) {
    throw ArgumentError("manifest '" + o.manifest + "' has no argv");
  }
  std::vector<std::string> args = doc["argv"].get<std::vector<std::string>>();
  if (args.size() > 1 && args[1] == "rerun") throw ArgumentError("manifest records a rerun");
  if (o.out != ".") {
    bool replaced = false;
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--out" && i + 1 < args.size()) {
        args[i + 1] = o.out;
        replaced = true;
      } else if (args[i].rfind("--out=", 0) == 0) {
        args[i] = "--out=" + o.out;
        replaced = true;
      }
    }
    if (!replaced) {
      args.push_back("--out");
      args.push_back(o.out);
    }
  }
  std::vector<const char*> raw;
  for (const auto& a : args) raw.push_back(a.c_str());
  return run(static_cast<int>(raw.size()), raw.data(), out, err);
}

void add_model_flags(CLI::App* sub, Options& o) {
  sub->add_option("--epochs", o.model.epochs, "Training epochs")->capture_default_str();
  sub->add_option("--batch", o.model.batch_size, "Batch size")->capture_default_str();
  sub->add_option("--hidden", o.model.hidden_dim, "GRU hidden size")->capture_default_str();
  sub->add_option("--embed", o.model.embed_dim, "Embedding size")->capture_default_str();
  sub->add_option("--max-decode-len", o.model.max_decode_len,
                  "Decode cap (0 = 2 x input length + 10)")
      ->capture_default_str();
}

void add_single_input_flags(CLI::App* sub, Options& o) {
  sub->add_option("--lemma", o.lemma, "Lemma, plain or segmented as pre|stem|suf");
  sub->add_option("--lemma-feats", o.lemma_feats, "Lemma features, e.g. ADJ;Case=Nom;Number=Sing");
  sub->add_option("--form-feats", o.form_feats, "Target features, e.g. ADJ;Case=Par;Number=Sing");
  sub->add_option("--input", o.input, "Corpus-TSV file of inputs (form columns ignored)");
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  Options o;
  o.model.epochs = 20;

  CLI::App app{"Morphological inflection with character-morpheme seq2seq models", "morphoseq"};
  app.set_version_flag("--version", MORPHOSEQ_VERSION);
  app.require_subcommand(1);

  auto* stats = app.add_subcommand("stats", "Lemma and word counts per language");
  stats->add_option("--corpus", o.corpus, "Corpus TSV")->required();
  stats->add_option("--out", o.out, "Also write stats.tsv and a manifest here");

  auto* prepare = app.add_subcommand("prepare", "Validate, split and write train/test/unseen");
  prepare->add_option("--corpus", o.corpus, "Corpus TSV")->required();
  prepare->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  prepare->add_option("--holdout", o.holdout, "Unseen lemmas per language")->capture_default_str();
  prepare->add_option("--test-fraction", o.test_fraction, "Share of each lemma's forms in test")
      ->check(CLI::Range(0.0, 0.999999))
      ->capture_default_str();
  prepare->add_option("--out", o.out, "Output directory")->required();

  auto* trn = app.add_subcommand("train", "Train models and write checkpoints");
  trn->add_option("--corpus", o.corpus, "Training corpus TSV")->required();
  trn->add_option("--mode", o.mode, "char, charmorph or both")->capture_default_str();
  trn->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  trn->add_option("--out", o.out, "Output directory")->required();
  trn->add_flag("--quiet", o.quiet, "No per-epoch progress");
  add_model_flags(trn, o);

  auto* predict = app.add_subcommand("predict", "Inflect one lemma (or a file of them)");
  predict->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
  predict->add_flag("--dump-tokens", o.dump_tokens, "Print the input and output token streams");
  add_single_input_flags(predict, o);

  auto* experiment = app.add_subcommand("experiment", "Run experiment 1, 2 or 3 for both models");
  experiment->add_option("id", o.experiment, "1 seen lemmas, 2 unseen lemmas, 3 low resource")
      ->required()
      ->check(CLI::Range(1, 3));
  experiment->add_option("--corpus", o.corpus, "Corpus TSV")->required();
  experiment->add_option("--mode", o.mode, "char, charmorph or both")->capture_default_str();
  experiment->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  experiment->add_option("--train-size", o.train_size, "Experiment 3 training items")
      ->capture_default_str();
  experiment->add_option("--test-max", o.test_max, "Experiment 3 test items")->capture_default_str();
  experiment->add_option("--holdout", o.holdout, "Unseen lemmas per language")
      ->capture_default_str();
  experiment->add_option("--test-fraction", o.test_fraction, "Share of each lemma's forms in test")
      ->check(CLI::Range(0.0, 0.999999))
      ->capture_default_str();
  experiment->add_option("--permutations", o.permutations, "Significance test permutations")
      ->capture_default_str();
  experiment->add_option("--out", o.out, "Output directory")->required();
  experiment->add_flag("--save-models", o.save_models, "Also write the trained checkpoints");
  experiment->add_flag("--quiet", o.quiet, "No per-epoch progress");
  add_model_flags(experiment, o);

  auto* attn = app.add_subcommand("attn-export", "Write attention heatmaps (CSV + SVG)");
  attn->add_option("--checkpoint", o.checkpoint, "Model checkpoint")->required();
  attn->add_option("--out", o.out, "Output directory")->required();
  add_single_input_flags(attn, o);

  auto* rerun = app.add_subcommand("rerun", "Repeat the command recorded in a manifest");
  rerun->add_option("--manifest", o.manifest, "manifest.json to replay")->required();
  rerun->add_option("--out", o.out, "Write to this directory instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*stats) return cmd_stats(o, args, out);
    if (*prepare) return cmd_prepare(o, args, out);
    if (*trn) return cmd_train(o, args, out, err);
    if (*predict) return cmd_predict(o, out);
    if (*experiment) return cmd_experiment(o, args, out, err);
    if (*attn) return cmd_attn_export(o, args, out);
    if (*rerun) return cmd_rerun(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace morphoseq::cli
