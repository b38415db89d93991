#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tnli {

using Tokens = std::vector<std::string>;

// Toolkit-wide tokenizer: lowercase, split on whitespace, and detach trailing
// sentence punctuation (. , ; : ! ?) as separate tokens. Nothing else is
// normalized.
Tokens tokenize(std::string_view text);

// Single-space join; the inverse of tokenize() on rendered text.
std::string join_tokens(std::span<const std::string> tokens);

inline constexpr std::array<std::string_view, 4> kIndicatorPhrase{"we", "do", "not", "know"};

// Contiguous occurrence of "we do not know".
bool contains_indicator(std::span<const std::string> tokens);
bool contains_indicator(std::string_view text);

// Token count with a terminal "." excluded.
std::size_t content_length(std::span<const std::string> tokens);

}  // namespace tnli
