#include "arag/sentences.hpp"

#include <array>
#include <cctype>
#include <string_view>

namespace arag {
namespace {

constexpr std::array<std::string_view, 10> kAbbreviations = {
    "Mr.", "Mrs.", "Dr.", "St.", "vs.", "e.g.", "i.e.", "etc.", "U.S.", "No."};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool starts_sentence(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isupper(u) != 0 || std::isdigit(u) != 0;
}

// The word ending at the period at `dot`, including internal periods,
// so "U.S." and "e.g." come back whole.
std::string_view word_ending_at(std::string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0) {
    char c = text[begin - 1];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '.') {
      --begin;
    } else {
      break;
    }
  }
  return text.substr(begin, dot - begin + 1);
}

bool is_abbreviation(std::string_view text, std::size_t dot) {
  std::string_view word = word_ending_at(text, dot);
  for (std::string_view abbr : kAbbreviations) {
    if (word == abbr || (word.size() > abbr.size() &&
                         word.substr(word.size() - abbr.size()) == abbr &&
                         word[word.size() - abbr.size() - 1] == '.')) {
      return true;
    }
  }
  return false;
}

bool all_space(std::string_view s) {
  for (char c : s) {
    if (!is_space(c)) return false;
  }
  return true;
}

}  // namespace

std::vector<SentenceSpan> segment_sentences(std::string_view text) {
  std::vector<SentenceSpan> spans;
  if (text.empty() || all_space(text)) return spans;

  const std::size_t n = text.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t j = i + 1;
      if (j < n && is_space(text[j]) && !(c == '.' && is_abbreviation(text, i))) {
        std::size_t k = j;
        while (k < n && is_space(text[k])) ++k;
        if (k < n && starts_sentence(text[k])) {
          spans.push_back({start, k});
          start = k;
          i = k;
          continue;
        }
      }
      ++i;
    } else if (c == '\n') {
      // A whitespace run holding a second newline is a paragraph break.
      std::size_t k = i + 1;
      int newlines = 1;
      while (k < n && is_space(text[k])) {
        if (text[k] == '\n') ++newlines;
        ++k;
      }
      if (newlines >= 2 && k < n) {
        spans.push_back({start, k});
        start = k;
        i = k;
        continue;
      }
      i = k;
    } else {
      ++i;
    }
  }
  if (start < n) {
    if (!all_space(text.substr(start)) || spans.empty()) {
      spans.push_back({start, n});
    } else {
      spans.back().end = n;
    }
  }
  return spans;
}

}  // namespace arag
