#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace arag {

// Half-open byte range [begin, end) into the source text.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const SentenceSpan&) const = default;
};

// Rule-based sentence segmentation. Splits after '.', '!' or '?' followed
// by whitespace and an uppercase letter or digit; a small abbreviation list
// suppresses splits after '.'; a blank line (paragraph break) always splits.
// Inter-sentence whitespace is attached to the preceding span so the spans
// tile the input exactly. Empty or whitespace-only input yields no spans.
std::vector<SentenceSpan> segment_sentences(std::string_view text);

}  // namespace arag
