#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morphoseq/corpus.hpp"

namespace morphoseq {

enum class TokenKind { Pad, Unknown, Zero, EndOfWord, FeatureIn, FeatureOut, StemChar, Affix };

std::string_view to_string(TokenKind kind);
std::optional<TokenKind> parse_token_kind(std::string_view name);

inline constexpr std::string_view kZeroText = "\xE2\x88\x85";  // ∅
inline constexpr std::string_view kEndOfWordText = "<\\w>";
inline constexpr std::string_view kPadText = "<pad>";
inline constexpr std::string_view kUnknownText = "<unk>";

struct Token {
  TokenKind kind;
  std::string text;

  static Token zero() { return {TokenKind::Zero, std::string(kZeroText)}; }
  static Token end_of_word() { return {TokenKind::EndOfWord, std::string(kEndOfWordText)}; }
  static Token pad() { return {TokenKind::Pad, std::string(kPadText)}; }
  static Token unknown() { return {TokenKind::Unknown, std::string(kUnknownText)}; }

  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token&, const Token&) = default;
};

using TokenList = std::vector<Token>;

/// How a word is split into symbols.
enum class Mode {
  CharMorpheme,  // stem characters, whole affixes, zero morpheme for empty affix slots
  CharOnly,      // every character of the surface form
};

std::string_view to_string(Mode mode);
/// Accepts "charmorph" and "char".
std::optional<Mode> parse_mode(std::string_view name);

/// `IN=` tags for the lemma features, `OUT=` tags for the target features,
/// then the lemma's tokens and the end-of-word symbol.
TokenList encode_input(const InflectionEntry& entry, Mode mode);

/// The form's tokens followed by the end-of-word stop symbol.
TokenList encode_target(const InflectionEntry& entry, Mode mode);

/// Only the word part (no features, no stop symbol) of a segmentation.
TokenList encode_word(const Segmentation& seg, Mode mode);

/// Surface string of a token stream: concatenates stem characters and affixes
/// up to the first end-of-word symbol.
std::string detokenize(std::span<const Token> tokens);

/// Space-joined rendering, as printed by `--dump-tokens`.
std::string join_tokens(std::span<const Token> tokens);

class Vocabulary {
public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnknown = 1;
  static constexpr std::size_t kZero = 2;
  static constexpr std::size_t kEndOfWord = 3;
  static constexpr std::size_t kReserved = 4;

  /// Every token of the encoded training inputs and targets, in (kind, text)
  /// order after the reserved symbols. Throws ArgumentError on an empty set.
  static Vocabulary build(const std::vector<InflectionEntry>& train, Mode mode);

  /// Rebuilds a vocabulary from its tokens in index order (checkpoint loading).
  static Vocabulary from_tokens(Mode mode, std::vector<Token> tokens);

  Mode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const Token& token(std::size_t index) const { return tokens_.at(index); }
  const std::vector<Token>& tokens() const noexcept { return tokens_; }

  /// Index of `t`, or kUnknown when absent.
  std::size_t index_of(const Token& t) const;
  bool contains(const Token& t) const { return index_.contains(t); }

  std::vector<std::size_t> to_ids(std::span<const Token> tokens) const;
  TokenList to_tokens(std::span<const std::size_t> ids) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.mode_ == b.mode_ && a.tokens_ == b.tokens_;
  }

private:
  Mode mode_ = Mode::CharMorpheme;
  std::vector<Token> tokens_;
  std::map<Token, std::size_t> index_;
};

/// Integer form of an entry under a vocabulary.
struct EncodedPair {
  std::vector<std::size_t> input;
  std::vector<std::size_t> target;
};

EncodedPair encode_pair(const InflectionEntry& entry, const Vocabulary& vocab);

}  // namespace morphoseq
