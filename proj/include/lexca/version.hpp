#pragma once

#include <string_view>

namespace lexca {

inline constexpr std::string_view k_tool_name = "lexca";
inline constexpr std::string_view k_tool_version = "0.1.0";

// Bumped whenever the token boundary rules change; recorded in corpus
// provenance so downstream artifacts can be traced to the rule set.
inline constexpr std::string_view k_tokenizer_version = "boundary-v1";

}  // namespace lexca
