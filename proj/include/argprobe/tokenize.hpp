#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace argprobe {

/// Whitespace split; trailing . , ! ? are detached as their own tokens.
/// Capitalization is preserved.
std::vector<std::string> tokenize(std::string_view text);

/// True for tokens made only of . , ! ?
bool is_punctuation_token(std::string_view token);

}  // namespace argprobe
