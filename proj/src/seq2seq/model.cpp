#include "morphoseq/model.hpp"

#include <algorithm>
#include <cmath>

#include "morphoseq/errors.hpp"
#include "morphoseq/kernels.hpp"
#include "morphoseq/rng.hpp"

namespace morphoseq {
namespace {

using GruStep = ForwardCache::GruStep;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// out = b + W x + U h, all column vectors.
void affine2(const Matrix& w, const double* x, const Matrix& u, const double* h, const Matrix& b,
             Vec& out) {
  out.assign(b.data(), b.data() + b.size());
  kernels::gemv(w.data(), w.rows(), w.cols(), x, out.data());
  kernels::gemv(u.data(), u.rows(), u.cols(), h, out.data());
}

void gru_forward(const GruWeights& w, const double* x, std::span<const double> h_prev,
                 GruStep& s) {
  const std::size_t hidden = h_prev.size();
  s.h_prev.assign(h_prev.begin(), h_prev.end());
  affine2(w.w_z, x, w.u_z, h_prev.data(), w.b_z, s.z);
  affine2(w.w_r, x, w.u_r, h_prev.data(), w.b_r, s.r);
  Vec rh(hidden);
  for (std::size_t i = 0; i < hidden; ++i) {
    s.z[i] = sigmoid(s.z[i]);
    s.r[i] = sigmoid(s.r[i]);
    rh[i] = s.r[i] * h_prev[i];
  }
  affine2(w.w_h, x, w.u_h, rh.data(), w.b_h, s.n);
  s.h.resize(hidden);
  for (std::size_t i = 0; i < hidden; ++i) {
    s.n[i] = std::tanh(s.n[i]);
    s.h[i] = (1.0 - s.z[i]) * h_prev[i] + s.z[i] * s.n[i];
  }
}

// Given dL/dh for one step, accumulates weight gradients, adds dL/dx into `dx`
// and writes dL/dh_prev into `dh_prev`.
void gru_backward(const GruWeights& w, GruWeights& g, const double* x, const GruStep& s,
                  std::span<const double> dh, double* dx, Vec& dh_prev) {
  const std::size_t hidden = dh.size();
  const std::size_t in = w.w_z.cols();
  Vec dz(hidden), dn(hidden), rh(hidden), drh(hidden, 0.0), dr(hidden);
  dh_prev.resize(hidden);
  for (std::size_t i = 0; i < hidden; ++i) {
    const double z = s.z[i], n = s.n[i], hp = s.h_prev[i];
    dz[i] = dh[i] * (n - hp) * z * (1.0 - z);
    dn[i] = dh[i] * z * (1.0 - n * n);
    dh_prev[i] = dh[i] * (1.0 - z);
    rh[i] = s.r[i] * hp;
  }
  // candidate
  kernels::axpy(1.0, dn.data(), g.b_h.data(), hidden);
  kernels::ger(g.w_h.data(), hidden, in, dn.data(), x);
  kernels::gemv_t(w.w_h.data(), hidden, in, dn.data(), dx);
  kernels::ger(g.u_h.data(), hidden, hidden, dn.data(), rh.data());
  kernels::gemv_t(w.u_h.data(), hidden, hidden, dn.data(), drh.data());
  for (std::size_t i = 0; i < hidden; ++i) {
    dr[i] = drh[i] * s.h_prev[i] * s.r[i] * (1.0 - s.r[i]);
    dh_prev[i] += drh[i] * s.r[i];
  }
  // update gate
  kernels::axpy(1.0, dz.data(), g.b_z.data(), hidden);
  kernels::ger(g.w_z.data(), hidden, in, dz.data(), x);
  kernels::ger(g.u_z.data(), hidden, hidden, dz.data(), s.h_prev.data());
  kernels::gemv_t(w.w_z.data(), hidden, in, dz.data(), dx);
  kernels::gemv_t(w.u_z.data(), hidden, hidden, dz.data(), dh_prev.data());
  // reset gate
  kernels::axpy(1.0, dr.data(), g.b_r.data(), hidden);
  kernels::ger(g.w_r.data(), hidden, in, dr.data(), x);
  kernels::ger(g.u_r.data(), hidden, hidden, dr.data(), s.h_prev.data());
  kernels::gemv_t(w.w_r.data(), hidden, in, dr.data(), dx);
  kernels::gemv_t(w.u_r.data(), hidden, hidden, dr.data(), dh_prev.data());
}

void check_token(const ModelParams& p, std::size_t token) {
  if (token >= p.vocab_size()) {
    throw ArgumentError("token index " + std::to_string(token) + " outside vocabulary of size " +
                        std::to_string(p.vocab_size()));
  }
}

// a = tanh(Wc [c; h]), logits = Wo a + bo.
void output_layer(const ModelParams& p, const Vec& context, const Vec& h, Vec& combined,
                  Vec& logits) {
  const std::size_t hidden = h.size();
  Vec ch(2 * hidden);
  std::copy(context.begin(), context.end(), ch.begin());
  std::copy(h.begin(), h.end(), ch.begin() + static_cast<std::ptrdiff_t>(hidden));
  combined.assign(hidden, 0.0);
  kernels::gemv(p.concat_proj.data(), hidden, 2 * hidden, ch.data(), combined.data());
  for (double& v : combined) v = std::tanh(v);
  logits.assign(p.out_bias.data(), p.out_bias.data() + p.out_bias.size());
  kernels::gemv(p.out_proj.data(), p.out_proj.rows(), hidden, combined.data(), logits.data());
}

double log_sum_exp(const Vec& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

}  // namespace

void ModelConfig::validate() const {
  if (embed_dim == 0 || hidden_dim == 0 || batch_size == 0) {
    throw ArgumentError("model dimensions and batch size must be positive");
  }
  if (!(adadelta.rho > 0.0 && adadelta.rho < 1.0) || !(adadelta.eps > 0.0)) {
    throw ArgumentError("adadelta needs rho in (0,1) and eps > 0");
  }
}

GruWeights::GruWeights(std::size_t input, std::size_t hidden)
    : w_z(hidden, input), w_r(hidden, input), w_h(hidden, input),
      u_z(hidden, hidden), u_r(hidden, hidden), u_h(hidden, hidden),
      b_z(hidden, 1), b_r(hidden, 1), b_h(hidden, 1) {}

ModelParams::ModelParams(std::size_t vocab, std::size_t embed, std::size_t hidden)
    : embedding(vocab, embed), encoder(embed, hidden), decoder(embed, hidden),
      concat_proj(hidden, 2 * hidden), out_proj(vocab, hidden), out_bias(vocab, 1) {}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const Matrix& m) { n += m.size(); });
  return n;
}

Vec ModelParams::flatten() const {
  Vec out;
  out.reserve(parameter_count());
  for_each([&](const std::string&, const Matrix& m) {
    out.insert(out.end(), m.values().begin(), m.values().end());
  });
  return out;
}

void ModelParams::assign_flat(std::span<const double> values) {
  if (values.size() != parameter_count()) {
    throw DimensionError("assign_flat: got " + std::to_string(values.size()) + " values for " +
                         std::to_string(parameter_count()) + " parameters");
  }
  std::size_t off = 0;
  for_each([&](const std::string&, Matrix& m) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(off), m.size(), m.data());
    off += m.size();
  });
}

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each([&](const std::string&, const Matrix& m) { ok = ok && m.all_finite(); });
  return ok;
}

ModelParams init_params(const ModelConfig& config, std::size_t vocab_size) {
  config.validate();
  if (vocab_size == 0) throw ArgumentError("init_params: empty vocabulary");
  ModelParams p(vocab_size, config.embed_dim, config.hidden_dim);
  Rng rng(derive_seed(config.seed, "init_params"));
  p.for_each([&](const std::string& name, Matrix& m) {
    const bool is_bias = name.find(".b_") != std::string::npos || name == "out_bias";
    if (is_bias) return;
    // An embedding row is selected by a one-hot input, so its fan-in is 1.
    const double fan_in = name == "embedding" ? 1.0 : static_cast<double>(m.cols());
    const double s = 1.0 / std::sqrt(fan_in);
    for (double& v : m.values()) {
      do {
        v = s * (2.0 * rng.uniform() - 1.0);
      } while (v == -s);
    }
  });
  return p;
}

Matrix encode(const ModelParams& params, std::span<const std::size_t> input) {
  if (input.empty()) throw ArgumentError("encode: empty input sequence");
  const std::size_t hidden = params.hidden_dim();
  Matrix states(input.size(), hidden);
  Vec h(hidden, 0.0);
  GruStep step;
  for (std::size_t s = 0; s < input.size(); ++s) {
    check_token(params, input[s]);
    gru_forward(params.encoder, params.embedding.row(input[s]).data(), h, step);
    h = step.h;
    std::copy(h.begin(), h.end(), states.row(s).begin());
  }
  return states;
}

Attention attend(std::span<const double> decoder_state, const Matrix& states) {
  if (states.rows() == 0 || states.cols() != decoder_state.size()) {
    throw DimensionError("attend: state of size " + std::to_string(decoder_state.size()) +
                         " against encoder states " + states.shape_string());
  }
  Attention a;
  a.weights.assign(states.rows(), 0.0);
  kernels::gemv(states.data(), states.rows(), states.cols(), decoder_state.data(),
                a.weights.data());
  softmax_inplace(a.weights);
  a.context.assign(states.cols(), 0.0);
  kernels::gemv_t(states.data(), states.rows(), states.cols(), a.weights.data(),
                  a.context.data());
  return a;
}

DecodeStep decode_step(const ModelParams& params, std::size_t prev_token,
                       std::span<const double> h_prev, const Matrix& states) {
  check_token(params, prev_token);
  if (h_prev.size() != params.hidden_dim()) {
    throw DimensionError("decode_step: hidden state has wrong size");
  }
  GruStep g;
  gru_forward(params.decoder, params.embedding.row(prev_token).data(), h_prev, g);
  Attention att = attend(g.h, states);
  Vec combined, logits;
  output_layer(params, att.context, g.h, combined, logits);
  softmax_inplace(logits);
  return {std::move(logits), std::move(g.h), std::move(att.weights)};
}

double forward_loss(const ModelParams& params, const EncodedPair& pair, ForwardCache* cache) {
  if (pair.input.empty()) throw ArgumentError("forward_loss: empty input");
  if (pair.target.empty()) throw ArgumentError("forward_loss: empty target");
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  const std::size_t hidden = params.hidden_dim();
  c.input = pair.input;
  c.target = pair.target;

  c.encoder.resize(pair.input.size());
  c.states = Matrix(pair.input.size(), hidden);
  Vec h(hidden, 0.0);
  for (std::size_t s = 0; s < pair.input.size(); ++s) {
    check_token(params, pair.input[s]);
    auto& step = c.encoder[s];
    step.token = pair.input[s];
    gru_forward(params.encoder, params.embedding.row(step.token).data(), h, step);
    h = step.h;
    std::copy(h.begin(), h.end(), c.states.row(s).begin());
  }

  double total = 0.0;
  c.decoder.resize(pair.target.size());
  std::size_t prev = pair.input.back();
  Vec logits;
  for (std::size_t t = 0; t < pair.target.size(); ++t) {
    check_token(params, pair.target[t]);
    auto& d = c.decoder[t];
    d.gru.token = prev;
    gru_forward(params.decoder, params.embedding.row(prev).data(), h, d.gru);
    h = d.gru.h;
    Attention att = attend(h, c.states);
    d.attention = std::move(att.weights);
    d.context = std::move(att.context);
    output_layer(params, d.context, h, d.combined, logits);
    const double nll = log_sum_exp(logits) - logits[pair.target[t]];
    if (!std::isfinite(nll)) {
      throw NumericError("forward_loss: non-finite loss at decoder step " + std::to_string(t));
    }
    total += nll;
    softmax_inplace(logits);
    d.probs = logits;
    prev = pair.target[t];
  }
  c.loss = total / static_cast<double>(pair.target.size());
  return c.loss;
}

void backward_accumulate(const ModelParams& params, const ForwardCache& cache, ModelParams& g,
                         double scale) {
  const std::size_t hidden = params.hidden_dim();
  const std::size_t vocab = params.vocab_size();
  const std::size_t S = cache.input.size();
  const double step_scale = scale / static_cast<double>(cache.target.size());

  Matrix dstates(S, hidden);
  Vec carry(hidden, 0.0), dh(hidden), dh_prev, dlogits(vocab), da(hidden), dch(2 * hidden),
      ch(2 * hidden), dalpha(S), dscore(S);

  for (std::size_t t = cache.decoder.size(); t-- > 0;) {
    const auto& d = cache.decoder[t];
    for (std::size_t v = 0; v < vocab; ++v) dlogits[v] = d.probs[v] * step_scale;
    dlogits[cache.target[t]] -= step_scale;

    kernels::axpy(1.0, dlogits.data(), g.out_bias.data(), vocab);
    kernels::ger(g.out_proj.data(), vocab, hidden, dlogits.data(), d.combined.data());
    std::fill(da.begin(), da.end(), 0.0);
    kernels::gemv_t(params.out_proj.data(), vocab, hidden, dlogits.data(), da.data());
    for (std::size_t i = 0; i < hidden; ++i) da[i] *= 1.0 - d.combined[i] * d.combined[i];

    std::copy(d.context.begin(), d.context.end(), ch.begin());
    std::copy(d.gru.h.begin(), d.gru.h.end(), ch.begin() + static_cast<std::ptrdiff_t>(hidden));
    kernels::ger(g.concat_proj.data(), hidden, 2 * hidden, da.data(), ch.data());
    std::fill(dch.begin(), dch.end(), 0.0);
    kernels::gemv_t(params.concat_proj.data(), hidden, 2 * hidden, da.data(), dch.data());
    const double* dcontext = dch.data();

    // attention: context = states^T alpha, alpha = softmax(states h)
    std::fill(dalpha.begin(), dalpha.end(), 0.0);
    kernels::gemv(cache.states.data(), S, hidden, dcontext, dalpha.data());
    kernels::ger(dstates.data(), S, hidden, d.attention.data(), dcontext);
    double mean = 0.0;
    for (std::size_t s = 0; s < S; ++s) mean += d.attention[s] * dalpha[s];
    for (std::size_t s = 0; s < S; ++s) dscore[s] = d.attention[s] * (dalpha[s] - mean);
    for (std::size_t i = 0; i < hidden; ++i) dh[i] = dch[hidden + i] + carry[i];
    kernels::gemv_t(cache.states.data(), S, hidden, dscore.data(), dh.data());
    kernels::ger(dstates.data(), S, hidden, dscore.data(), d.gru.h.data());

    gru_backward(params.decoder, g.decoder, params.embedding.row(d.gru.token).data(), d.gru, dh,
                 g.embedding.row(d.gru.token).data(), dh_prev);
    carry = dh_prev;
  }

  // The decoder started from the last encoder state.
  kernels::axpy(1.0, carry.data(), dstates.row(S - 1).data(), hidden);
  std::fill(carry.begin(), carry.end(), 0.0);
  for (std::size_t s = S; s-- > 0;) {
    const auto& e = cache.encoder[s];
    for (std::size_t i = 0; i < hidden; ++i) dh[i] = dstates(s, i) + carry[i];
    gru_backward(params.encoder, g.encoder, params.embedding.row(e.token).data(), e, dh,
                 g.embedding.row(e.token).data(), dh_prev);
    carry = dh_prev;
  }
}

ModelParams backward(const ModelParams& params, const ForwardCache& cache) {
  ModelParams grads(params.vocab_size(), params.embed_dim(), params.hidden_dim());
  backward_accumulate(params, cache, grads, 1.0);
  return grads;
}

DecodeResult greedy_decode(const ModelParams& params, std::span<const std::size_t> input,
                           std::size_t max_len) {
  if (max_len == 0) throw ArgumentError("greedy_decode: max_len must be positive");
  const Matrix states = encode(params, input);
  DecodeResult out;
  std::vector<Vec> rows;
  Vec h(states.row(states.rows() - 1).begin(), states.row(states.rows() - 1).end());
  std::size_t prev = input.back();
  while (out.tokens.size() < max_len) {
    DecodeStep step = decode_step(params, prev, h, states);
    const auto best = static_cast<std::size_t>(
        std::max_element(step.distribution.begin(), step.distribution.end()) -
        step.distribution.begin());
    out.tokens.push_back(best);
    rows.push_back(std::move(step.attention));
    h = std::move(step.hidden);
    prev = best;
    if (best == Vocabulary::kEndOfWord) break;
  }
  out.attention = Matrix(rows.size(), states.rows());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), out.attention.row(r).begin());
  }
  return out;
}

AttentionTrace make_trace(const Vocabulary& vocab, std::span<const std::size_t> input,
                          const DecodeResult& result) {
  return {result.attention, vocab.to_tokens(result.tokens), vocab.to_tokens(input)};
}

}  // namespace morphoseq
