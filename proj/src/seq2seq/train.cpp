#include "morphoseq/train.hpp"

#include <numeric>

#include "morphoseq/errors.hpp"
#include "morphoseq/rng.hpp"

namespace morphoseq {

double batch_loss(const ModelParams& params, std::span<const EncodedPair> batch,
                  ModelParams* grads) {
  if (batch.empty()) throw ArgumentError("batch_loss: empty batch");
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  ForwardCache cache;
  for (const auto& pair : batch) {
    total += forward_loss(params, pair, &cache);
    if (grads) backward_accumulate(params, cache, *grads, scale);
  }
  return total * scale;
}

TrainResult train_encoded(const std::vector<EncodedPair>& pairs, std::size_t vocab_size,
                          const ModelConfig& config, const EpochCallback& on_epoch,
                          const StopCondition& stop) {
  if (pairs.empty()) throw ArgumentError("train: empty training set");
  config.validate();
  std::size_t longest = 0;
  for (const auto& p : pairs) longest = std::max(longest, p.target.size());
  if (config.max_decode_len != 0 && config.max_decode_len < longest) {
    throw ArgumentError("max_decode_len " + std::to_string(config.max_decode_len) +
                        " is shorter than the longest training target (" +
                        std::to_string(longest) + ")");
  }

  TrainResult result{init_params(config, vocab_size), {}};
  ModelParams& params = result.params;
  std::vector<AdadeltaState> states;
  params.for_each([&](const std::string&, const Matrix& m) {
    states.push_back(AdadeltaState::fresh(m, config.adadelta));
  });

  Rng shuffler(derive_seed(config.seed, "train_shuffle"));
  std::vector<std::size_t> order(pairs.size());
  std::vector<EncodedPair> batch;
  ModelParams grads(params.vocab_size(), params.embed_dim(), params.hidden_dim());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffler.shuffle(order);
    double epoch_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(pairs[order[i]]);
      grads.for_each([](const std::string&, Matrix& m) { m.fill(0.0); });
      epoch_total += batch_loss(params, batch, &grads) * static_cast<double>(batch.size());

      std::size_t k = 0;
      std::vector<const Matrix*> grad_list;
      grads.for_each([&](const std::string&, const Matrix& m) { grad_list.push_back(&m); });
      params.for_each([&](const std::string&, Matrix& m) {
        adadelta_step(m, *grad_list[k], states[k]);
        ++k;
      });
    }
    if (!params.all_finite()) {
      throw NumericError("train: parameters became non-finite in epoch " + std::to_string(epoch));
    }
    const double mean = epoch_total / static_cast<double>(pairs.size());
    result.epoch_losses.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
    if (stop && stop(epoch, params)) break;
  }
  return result;
}

TrainResult train(const std::vector<InflectionEntry>& train_entries, const Vocabulary& vocab,
                  const ModelConfig& config, const EpochCallback& on_epoch,
                  const StopCondition& stop) {
  if (train_entries.empty()) throw ArgumentError("train: empty training set");
  std::vector<EncodedPair> pairs;
  pairs.reserve(train_entries.size());
  for (const auto& e : train_entries) pairs.push_back(encode_pair(e, vocab));
  return train_encoded(pairs, vocab.size(), config, on_epoch, stop);
}

}  // namespace morphoseq
