#ifndef FVQA_TEXT_HPP_
#define FVQA_TEXT_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fvqa::text {

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_alpha(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}
inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts,
                        std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Drops leading and trailing characters that are not letters.
inline std::string_view strip_nonalpha(std::string_view s) {
  while (!s.empty() && !is_alpha(s.front())) s.remove_prefix(1);
  while (!s.empty() && !is_alpha(s.back())) s.remove_suffix(1);
  return s;
}

// True when the token is a nonempty run of A-Z only.
inline bool is_upper_run(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_upper);
}

// A placeholder token in a template surface, e.g. "TOOL" or "TOOL?".
inline bool is_placeholder(std::string_view token) {
  while (!token.empty() && (token.back() == '?' || token.back() == ',' ||
                            token.back() == '.')) {
    token.remove_suffix(1);
  }
  return token.size() >= 2 && is_upper_run(token);
}

inline std::string capitalize_first(std::string s) {
  if (!s.empty()) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  }
  return s;
}

// Canonical form for answer comparison: lowercase, trimmed, internal runs of
// whitespace collapsed to one space.
inline std::string normalize_answer(std::string_view s) {
  return join(split_ws(to_lower(s)), " ");
}

// First whitespace token lowercased with punctuation removed.
inline std::string first_word(std::string_view s) {
  auto tokens = split_ws(s);
  if (tokens.empty()) return {};
  return to_lower(strip_nonalpha(tokens.front()));
}

inline std::uint64_t fnv1a(std::string_view s,
                           std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace fvqa::text

#endif  // FVQA_TEXT_HPP_
