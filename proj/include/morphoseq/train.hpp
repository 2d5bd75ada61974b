#pragma once

#include <functional>
#include <span>
#include <vector>

#include "morphoseq/corpus.hpp"
#include "morphoseq/model.hpp"

namespace morphoseq {

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_losses;  // mean per-example loss of each epoch
};

/// Called after every epoch with (epoch index, mean loss).
using EpochCallback = std::function<void(std::size_t, double)>;

/// Checked after every epoch (after the callback); returning true ends training early.
using StopCondition = std::function<bool(std::size_t, const ModelParams&)>;

/// Mean of the per-example losses of a batch; with `grads` non-null also adds
/// the gradient of that mean. Each example is processed at its own length, so
/// no padding positions contribute.
double batch_loss(const ModelParams& params, std::span<const EncodedPair> batch,
                  ModelParams* grads = nullptr);

/// Seeded per-epoch shuffling, batches of config.batch_size (the last may be
/// short), one Adadelta step per batch for every tensor. Throws ArgumentError
/// on an empty training set.
TrainResult train(const std::vector<InflectionEntry>& train_entries, const Vocabulary& vocab,
                  const ModelConfig& config, const EpochCallback& on_epoch = {},
                  const StopCondition& stop = {});

/// Same, starting from already-encoded pairs.
TrainResult train_encoded(const std::vector<EncodedPair>& pairs, std::size_t vocab_size,
                          const ModelConfig& config, const EpochCallback& on_epoch = {},
                          const StopCondition& stop = {});

}  // namespace morphoseq
