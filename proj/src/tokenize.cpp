#include "argprobe/tokenize.hpp"

#include <algorithm>

namespace argprobe {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_punct(char c) { return c == '.' || c == ',' || c == '!' || c == '?'; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (start == i) break;
    std::string_view word = text.substr(start, i - start);
    std::size_t end = word.size();
    while (end > 0 && is_punct(word[end - 1])) --end;
    if (end > 0) tokens.emplace_back(word.substr(0, end));
    for (std::size_t k = end; k < word.size(); ++k) tokens.emplace_back(1, word[k]);
  }
  return tokens;
}

bool is_punctuation_token(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), is_punct);
}

}  // namespace argprobe
