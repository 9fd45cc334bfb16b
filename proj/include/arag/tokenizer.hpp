#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace arag {

// Pluggable token counter used for chunk budgeting and retrieved-token
// accounting. The counter identity is recorded in the index manifest so
// downstream numbers stay comparable.
struct TokenCounter {
  std::string id;
  std::function<int(std::string_view)> count;
};

// Default counter: whitespace-delimited word count.
TokenCounter whitespace_token_counter();

}  // namespace arag
