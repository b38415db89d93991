#include "tnli/tokenize.hpp"

#include <algorithm>
#include <cctype>

namespace tnli {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_sentence_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j == i) break;

    std::string word(text.substr(i, j - i));
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::size_t end = word.size();
    while (end > 1 && is_sentence_punct(word[end - 1])) --end;
    out.push_back(word.substr(0, end));
    for (std::size_t p = end; p < word.size(); ++p) out.emplace_back(1, word[p]);
    i = j;
  }
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool contains_indicator(std::span<const std::string> tokens) {
  if (tokens.size() < kIndicatorPhrase.size()) return false;
  for (std::size_t i = 0; i + kIndicatorPhrase.size() <= tokens.size(); ++i) {
    if (std::equal(kIndicatorPhrase.begin(), kIndicatorPhrase.end(), tokens.begin() + i)) {
      return true;
    }
  }
  return false;
}

bool contains_indicator(std::string_view text) {
  const Tokens tokens = tokenize(text);
  return contains_indicator(std::span<const std::string>(tokens));
}

std::size_t content_length(std::span<const std::string> tokens) {
  if (!tokens.empty() && tokens.back() == ".") return tokens.size() - 1;
  return tokens.size();
}

}  // namespace tnli
