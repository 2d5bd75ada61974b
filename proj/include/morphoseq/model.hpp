#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "morphoseq/matrix.hpp"
#include "morphoseq/optim.hpp"
#include "morphoseq/tokenizer.hpp"

namespace morphoseq {

using Vec = std::vector<double>;

struct ModelConfig {
  std::size_t embed_dim = 300;
  std::size_t hidden_dim = 100;
  std::size_t batch_size = 20;
  std::size_t epochs = 20;
  /// 0 means "2 x input length + 10" per decoded input.
  std::size_t max_decode_len = 0;
  std::uint64_t seed = 0;
  AdadeltaConfig adadelta;

  /// Throws ArgumentError when a dimension is zero.
  void validate() const;

  std::size_t decode_limit(std::size_t input_len) const {
    return max_decode_len != 0 ? max_decode_len : 2 * input_len + 10;
  }
};

/// z = sig(Wz x + Uz h + bz), r = sig(Wr x + Ur h + br),
/// n = tanh(Wh x + Uh (r*h) + bh), h' = (1-z)*h + z*n.
struct GruWeights {
  Matrix w_z, w_r, w_h;  // hidden x input
  Matrix u_z, u_r, u_h;  // hidden x hidden
  Matrix b_z, b_r, b_h;  // hidden x 1

  GruWeights() = default;
  GruWeights(std::size_t input, std::size_t hidden);

  friend bool operator==(const GruWeights&, const GruWeights&) = default;
};

struct ModelParams {
  Matrix embedding;     // vocab x embed, shared by encoder and decoder inputs
  GruWeights encoder;
  GruWeights decoder;
  Matrix concat_proj;   // hidden x 2*hidden, applied to [context; decoder state]
  Matrix out_proj;      // vocab x hidden
  Matrix out_bias;      // vocab x 1

  ModelParams() = default;
  /// All-zero parameters of the given shape.
  ModelParams(std::size_t vocab, std::size_t embed, std::size_t hidden);

  std::size_t vocab_size() const { return embedding.rows(); }
  std::size_t embed_dim() const { return embedding.cols(); }
  std::size_t hidden_dim() const { return concat_proj.rows(); }

  /// Visits every tensor with a stable name, in a fixed order.
  template <class F>
  void for_each(F&& f) {
    visit(*this, f);
  }
  template <class F>
  void for_each(F&& f) const {
    visit(*this, f);
  }

  std::size_t parameter_count() const;
  Vec flatten() const;
  void assign_flat(std::span<const double> values);
  bool all_finite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
  template <class Self, class F>
  static void visit(Self& p, F& f) {
    f("embedding", p.embedding);
    visit_gru("encoder", p.encoder, f);
    visit_gru("decoder", p.decoder, f);
    f("concat_proj", p.concat_proj);
    f("out_proj", p.out_proj);
    f("out_bias", p.out_bias);
  }
  template <class G, class F>
  static void visit_gru(std::string_view prefix, G& g, F& f) {
    const std::string p(prefix);
    f(p + ".w_z", g.w_z);
    f(p + ".w_r", g.w_r);
    f(p + ".w_h", g.w_h);
    f(p + ".u_z", g.u_z);
    f(p + ".u_r", g.u_r);
    f(p + ".u_h", g.u_h);
    f(p + ".b_z", g.b_z);
    f(p + ".b_r", g.b_r);
    f(p + ".b_h", g.b_h);
  }
};

/// Weights ~ Uniform(-s, s) with s = 1/sqrt(fan_in), biases zero. fan_in is the
/// column count, except for the embedding lookup (one-hot input, fan_in = 1).
ModelParams init_params(const ModelConfig& config, std::size_t vocab_size);

/// Encoder hidden states, one row per input token (S x hidden), starting from h0 = 0.
/// Throws ArgumentError on an empty input or an out-of-range index.
Matrix encode(const ModelParams& params, std::span<const std::size_t> input);

struct Attention {
  Vec context;
  Vec weights;
};

/// Dot-product attention: weights = softmax_s(h . states[s]), context = sum_s w_s states[s].
Attention attend(std::span<const double> decoder_state, const Matrix& states);

struct DecodeStep {
  Vec distribution;  // over the vocabulary
  Vec hidden;
  Vec attention;
};

DecodeStep decode_step(const ModelParams& params, std::size_t prev_token,
                       std::span<const double> h_prev, const Matrix& states);

/// Intermediate values of one teacher-forced pass, consumed by backward().
struct ForwardCache {
  struct GruStep {
    std::size_t token = 0;  // index whose embedding was the input
    Vec h_prev, z, r, n, h;
  };
  struct DecoderStep {
    GruStep gru;
    Vec attention, context, combined, probs;
  };

  std::vector<std::size_t> input;
  std::vector<std::size_t> target;
  std::vector<GruStep> encoder;
  Matrix states;
  std::vector<DecoderStep> decoder;
  double loss = 0.0;
};

/// Mean per-token negative log-likelihood of `pair.target` under teacher forcing.
/// The decoder starts from the final encoder state with the last input token
/// (the end-of-word symbol) as its first input. Throws NumericError on a
/// non-finite loss, naming the decoder step.
double forward_loss(const ModelParams& params, const EncodedPair& pair,
                    ForwardCache* cache = nullptr);

/// Adds scale * dLoss/dParams for the cached pass into `grads`.
void backward_accumulate(const ModelParams& params, const ForwardCache& cache,
                         ModelParams& grads, double scale = 1.0);

/// Exact gradients of the cached forward loss.
ModelParams backward(const ModelParams& params, const ForwardCache& cache);

struct DecodeResult {
  std::vector<std::size_t> tokens;  // including the end-of-word symbol when emitted
  Matrix attention;                 // tokens.size() x input length
};

/// Argmax decoding (ties to the lowest index) until end-of-word or max_len tokens.
DecodeResult greedy_decode(const ModelParams& params, std::span<const std::size_t> input,
                           std::size_t max_len);

struct AttentionTrace {
  Matrix weights;        // rows = decoder steps, cols = input tokens
  TokenList row_labels;  // predicted tokens
  TokenList col_labels;  // input tokens
};

AttentionTrace make_trace(const Vocabulary& vocab, std::span<const std::size_t> input,
                          const DecodeResult& result);

}  // namespace morphoseq
