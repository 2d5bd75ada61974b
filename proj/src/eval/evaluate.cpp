#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <string_view>
#include <thread>

#include "morphoseq/errors.hpp"
#include "morphoseq/eval.hpp"

namespace morphoseq {

std::size_t eval_threads(std::size_t requested) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MORPHOSEQ_THREADS")) {
    std::size_t cap = 0;
    const std::string_view s(env);
    auto res = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (res.ec == std::errc() && cap > 0) n = std::min(n, cap);
  }
  return std::max<std::size_t>(1, n);
}

EvalReport evaluate(const ModelParams& params, const Vocabulary& vocab,
                    const std::vector<InflectionEntry>& test, const ModelConfig& config,
                    const EvalOptions& opts) {
  std::vector<PredictionRecord> records(test.size());
  auto run_one = [&](std::size_t i) {
    const InflectionEntry& e = test[i];
    const auto input = vocab.to_ids(encode_input(e, vocab.mode()));
    DecodeResult out = greedy_decode(params, input, config.decode_limit(input.size()));
    const TokenList predicted = vocab.to_tokens(out.tokens);
    records[i] = make_record(record_key(e, i), e.form(), detokenize(predicted));
    if (opts.keep_attention) records[i].attention = make_trace(vocab, input, out);
  };

  const std::size_t workers = std::min(eval_threads(opts.threads), std::max<std::size_t>(1, test.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < test.size(); ++i) run_one(i);
  } else {
    // Each item writes only its own slot, so the result does not depend on scheduling.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t i; !failed && (i = next.fetch_add(1)) < test.size();) run_one(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  const std::string lang = test.empty() ? std::string() : test.front().lang;
  return summarize(lang, vocab.mode(), 0, std::move(records));
}

}  // namespace morphoseq
