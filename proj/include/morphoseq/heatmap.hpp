#pragma once

#include <string>
#include <string_view>

#include "morphoseq/model.hpp"

namespace morphoseq {

/// Header = empty corner cell then the input tokens; each following row is an
/// output token then its attention weights at full precision. Fields are
/// quoted when they contain commas or quotes.
std::string attention_csv(const AttentionTrace& trace);

/// Inverse of attention_csv.
AttentionTrace parse_attention_csv(std::string_view csv);

/// Grayscale grid, one <rect class="cell"> per weight (0 white, 1 black),
/// input tokens along the top and output tokens down the left side.
std::string attention_svg(const AttentionTrace& trace);

}  // namespace morphoseq
