#include "arag/tokenizer.hpp"

#include <cctype>

namespace arag {

TokenCounter whitespace_token_counter() {
  TokenCounter counter;
  counter.id = "whitespace";
  counter.count = [](std::string_view text) {
    int tokens = 0;
    bool in_word = false;
    for (unsigned char c : text) {
      if (std::isspace(c)) {
        in_word = false;
      } else if (!in_word) {
        in_word = true;
        ++tokens;
      }
    }
    return tokens;
  };
  return counter;
}

}  // namespace arag
