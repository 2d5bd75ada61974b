#include "morphoseq/tokenizer.hpp"

#include <algorithm>
#include <set>

#include "morphoseq/errors.hpp"
#include "morphoseq/utf8.hpp"

namespace morphoseq {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Pad: return "pad";
    case TokenKind::Unknown: return "unk";
    case TokenKind::Zero: return "zero";
    case TokenKind::EndOfWord: return "eow";
    case TokenKind::FeatureIn: return "in";
    case TokenKind::FeatureOut: return "out";
    case TokenKind::StemChar: return "char";
    case TokenKind::Affix: return "affix";
  }
  return "?";
}

std::optional<TokenKind> parse_token_kind(std::string_view name) {
  for (TokenKind k : {TokenKind::Pad, TokenKind::Unknown, TokenKind::Zero, TokenKind::EndOfWord,
                      TokenKind::FeatureIn, TokenKind::FeatureOut, TokenKind::StemChar,
                      TokenKind::Affix}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Mode mode) {
  return mode == Mode::CharMorpheme ? "charmorph" : "char";
}

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "charmorph") return Mode::CharMorpheme;
  if (name == "char") return Mode::CharOnly;
  return std::nullopt;
}

namespace {

void append_chars(TokenList& out, const std::string& s) {
  for (auto& cp : utf8::split_code_points(s)) out.push_back({TokenKind::StemChar, std::move(cp)});
}

void append_features(TokenList& out, const FeatureSet& fs, TokenKind kind) {
  const std::string prefix = kind == TokenKind::FeatureIn ? "IN=" : "OUT=";
  out.push_back({kind, prefix + fs.pos()});
  for (const auto& [k, v] : fs.features()) out.push_back({kind, prefix + k + "=" + v});
}

}  // namespace

TokenList encode_word(const Segmentation& seg, Mode mode) {
  TokenList out;
  if (mode == Mode::CharOnly) {
    append_chars(out, seg.surface());
    return out;
  }
  if (seg.prefixes.empty()) out.push_back(Token::zero());
  for (const auto& p : seg.prefixes) out.push_back({TokenKind::Affix, p});
  append_chars(out, seg.stem);
  if (seg.suffixes.empty()) out.push_back(Token::zero());
  for (const auto& s : seg.suffixes) out.push_back({TokenKind::Affix, s});
  return out;
}

TokenList encode_input(const InflectionEntry& entry, Mode mode) {
  TokenList out;
  append_features(out, entry.lemma_feats, TokenKind::FeatureIn);
  append_features(out, entry.form_feats, TokenKind::FeatureOut);
  for (auto& t : encode_word(entry.lemma_seg, mode)) out.push_back(std::move(t));
  out.push_back(Token::end_of_word());
  return out;
}

TokenList encode_target(const InflectionEntry& entry, Mode mode) {
  TokenList out = encode_word(entry.form_seg, mode);
  out.push_back(Token::end_of_word());
  return out;
}

std::string detokenize(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::EndOfWord) break;
    if (t.kind == TokenKind::StemChar || t.kind == TokenKind::Affix) out += t.text;
  }
  return out;
}

std::string join_tokens(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

Vocabulary Vocabulary::build(const std::vector<InflectionEntry>& train, Mode mode) {
  if (train.empty()) throw ArgumentError("cannot build a vocabulary from an empty training set");
  std::set<Token> seen;
  for (const auto& e : train) {
    for (auto& t : encode_input(e, mode)) seen.insert(std::move(t));
    for (auto& t : encode_target(e, mode)) seen.insert(std::move(t));
  }
  std::vector<Token> tokens{Token::pad(), Token::unknown(), Token::zero(), Token::end_of_word()};
  for (const auto& t : seen) {
    if (t.kind != TokenKind::Zero && t.kind != TokenKind::EndOfWord) tokens.push_back(t);
  }
  return from_tokens(mode, std::move(tokens));
}

Vocabulary Vocabulary::from_tokens(Mode mode, std::vector<Token> tokens) {
  if (tokens.size() < kReserved || tokens[kPad] != Token::pad() ||
      tokens[kUnknown] != Token::unknown() || tokens[kZero] != Token::zero() ||
      tokens[kEndOfWord] != Token::end_of_word()) {
    throw ArgumentError("vocabulary does not start with the reserved symbols");
  }
  Vocabulary v;
  v.mode_ = mode;
  v.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    const Token& t = v.tokens_[i];
    if (i >= kReserved && (t.kind == TokenKind::Pad || t.kind == TokenKind::Unknown ||
                           t.kind == TokenKind::Zero || t.kind == TokenKind::EndOfWord)) {
      throw ArgumentError("reserved symbol kind at non-reserved index " + std::to_string(i));
    }
    if (!v.index_.emplace(t, i).second) {
      throw ArgumentError("duplicate vocabulary token '" + t.text + "'");
    }
  }
  return v;
}

std::size_t Vocabulary::index_of(const Token& t) const {
  auto it = index_.find(t);
  return it == index_.end() ? kUnknown : it->second;
}

std::vector<std::size_t> Vocabulary::to_ids(std::span<const Token> tokens) const {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(index_of(t));
  return ids;
}

TokenList Vocabulary::to_tokens(std::span<const std::size_t> ids) const {
  TokenList out;
  out.reserve(ids.size());
  for (std::size_t id : ids) out.push_back(token(id));
  return out;
}

EncodedPair encode_pair(const InflectionEntry& entry, const Vocabulary& vocab) {
  return {vocab.to_ids(encode_input(entry, vocab.mode())),
          vocab.to_ids(encode_target(entry, vocab.mode()))};
}

}  // namespace morphoseq
