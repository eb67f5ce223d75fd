#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ppcheck {

// Lowercase, drop non-ASCII bytes, punctuation -> space, collapse whitespace.
inline std::string preprocess(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (c >= 0x80) continue;
    if (std::isspace(c) || std::ispunct(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

// Unigram + bigram counts over a preprocessed (space-separated) text.
inline std::map<std::string, int> tokenize_ngrams(const std::string& text) {
  std::map<std::string, int> grams;
  std::istringstream ss(text);
  std::vector<std::string> tokens;
  for (std::string tok; ss >> tok;) tokens.push_back(std::move(tok));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ++grams[tokens[i]];
    if (i + 1 < tokens.size()) ++grams[tokens[i] + " " + tokens[i + 1]];
  }
  return grams;
}

// Sentence split on '.', '!', '?' followed by whitespace or end of text.
// Common abbreviations do not terminate a sentence.
inline std::vector<std::string> split_sentences(const std::string& text) {
  static constexpr std::string_view kAbbreviations[] = {"e.g.", "i.e.", "etc."};
  std::vector<std::string> sentences;
  auto flush = [&](std::size_t begin, std::size_t end) {
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
      ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
      --end;
    if (end > begin) sentences.push_back(text.substr(begin, end - begin));
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    bool at_boundary = i + 1 == text.size() ||
                       std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (!at_boundary) continue;
    bool protected_abbrev = false;
    if (c == '.') {
      for (std::string_view abbrev : kAbbreviations) {
        if (i + 1 >= abbrev.size() &&
            text.compare(i + 1 - abbrev.size(), abbrev.size(), abbrev) == 0) {
          protected_abbrev = true;
          break;
        }
      }
    }
    if (protected_abbrev) continue;
    flush(start, i);
    start = i + 1;
  }
  flush(start, text.size());
  return sentences;
}

}  // namespace ppcheck
