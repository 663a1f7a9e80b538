#include "filmner/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace filmner {

namespace {

const char* const kUnits[] = {
    "zero", "one",  "two",  "three", "four",  "five",  "six",  "seven",
    "eight", "nine", "ten",  "eleven", "twelve", "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};

const char* const kTens[] = {"",      "",      "twenty",  "thirty", "forty",
                             "fifty", "sixty", "seventy", "eighty", "ninety"};

void words_under_100(std::uint64_t n, std::vector<std::string>& out) {
  if (n < 20) {
    out.push_back(kUnits[n]);
  } else {
    out.push_back(kTens[n / 10]);
    if (n % 10) out.push_back(kUnits[n % 10]);
  }
}

void words_under_1000(std::uint64_t n, std::vector<std::string>& out) {
  if (n >= 100) {
    out.push_back(kUnits[n / 100]);
    out.push_back("hundred");
    n %= 100;
    if (n == 0) return;
  }
  words_under_100(n, out);
}

void cardinal_words(std::uint64_t n, std::vector<std::string>& out) {
  if (n == 0) {
    out.push_back("zero");
    return;
  }
  if (n >= 1000000) {
    words_under_1000(n / 1000000, out);
    out.push_back("million");
    n %= 1000000;
  }
  if (n >= 1000) {
    words_under_1000(n / 1000, out);
    out.push_back("thousand");
    n %= 1000;
  }
  if (n > 0) words_under_1000(n, out);
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool is_word_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalpha(u) || u >= 0x80;
}

// Digit runs with a leading zero (or too long for number_to_words) are read
// digit by digit, which is how ASR renders zip codes and the like.
void digit_run_words(const std::string& run, std::vector<std::string>& out) {
  if (run.size() > 9 || (run.size() > 1 && run[0] == '0')) {
    for (char c : run) out.push_back(kUnits[c - '0']);
    return;
  }
  std::uint64_t value = 0;
  for (char c : run) value = value * 10 + static_cast<std::uint64_t>(c - '0');
  auto words = number_to_words(value);
  out.insert(out.end(), words.begin(), words.end());
}

}  // namespace

std::vector<std::string> number_to_words(std::uint64_t n) {
  if (n > 999999999ull)
    throw std::invalid_argument("number_to_words: value out of range");
  std::vector<std::string> out;
  bool year_style =
      (n >= 1000 && n <= 1999) || (n >= 2010 && n <= 2099);
  if (year_style) {
    std::uint64_t high = n / 100;
    std::uint64_t low = n % 100;
    words_under_100(high, out);
    if (low == 0) {
      out.push_back("hundred");
    } else if (low < 10) {
      out.push_back("oh");
      out.push_back(kUnits[low]);
    } else {
      words_under_100(low, out);
    }
    return out;
  }
  cardinal_words(n, out);
  return out;
}

NormalizedText normalize_text(const std::string& raw) {
  NormalizedText result;
  std::string token;

  auto flush = [&]() {
    if (!token.empty()) {
      result.tokens.push_back(token);
      token.clear();
    }
  };
  auto record_break = [&]() {
    flush();
    if (result.tokens.empty()) return;
    std::size_t at = result.tokens.size() - 1;
    if (result.sentence_breaks.empty() || result.sentence_breaks.back() != at)
      result.sentence_breaks.push_back(at);
  };

  const std::size_t n = raw.size();
  std::size_t i = 0;
  while (i < n) {
    char c = raw[i];
    if (is_ascii_digit(c)) {
      flush();
      std::string run;
      while (i < n && is_ascii_digit(raw[i])) run += raw[i++];
      digit_run_words(run, result.tokens);
      // "3.5" reads "three point five"; the dot is a decimal point only when
      // digits sit on both sides of it.
      while (i + 1 < n && raw[i] == '.' && is_ascii_digit(raw[i + 1])) {
        ++i;
        result.tokens.push_back("point");
        run.clear();
        while (i < n && is_ascii_digit(raw[i])) run += raw[i++];
        digit_run_words(run, result.tokens);
      }
      continue;
    }
    if (is_word_char(c)) {
      unsigned char u = static_cast<unsigned char>(c);
      token += u < 0x80 ? static_cast<char>(std::tolower(u)) : c;
      ++i;
      continue;
    }
    if (c == '\'') {
      if (!token.empty() && i + 1 < n && is_word_char(raw[i + 1]))
        token += c;
      else
        flush();
      ++i;
      continue;
    }
    if (c == '.' || c == '!' || c == '?') {
      record_break();
      ++i;
      continue;
    }
    // Everything else (whitespace, hyphens, commas, currency marks, ...)
    // just ends the current token.
    flush();
    ++i;
  }
  flush();
  return result;
}

std::size_t token_edit_distance(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  const std::size_t la = a.size(), lb = b.size();
  std::vector<std::size_t> prev(lb + 1), cur(lb + 1);
  for (std::size_t j = 0; j <= lb; ++j) prev[j] = j;
  for (std::size_t i = 0; i < la; ++i) {
    cur[0] = i + 1;
    for (std::size_t j = 0; j < lb; ++j) {
      std::size_t sub = prev[j] + (a[i] == b[j] ? 0 : 1);
      cur[j + 1] = std::min({cur[j] + 1, prev[j + 1] + 1, sub});
    }
    prev.swap(cur);
  }
  return prev[lb];
}

double word_error_rate(const std::vector<std::string>& reference,
                       const std::vector<std::string>& hypothesis) {
  if (reference.empty())
    throw std::invalid_argument("word_error_rate: empty reference");
  return static_cast<double>(token_edit_distance(reference, hypothesis)) /
         static_cast<double>(reference.size());
}

void Transcript::validate() const {
  for (const auto& t : tokens) {
    if (t.empty())
      throw std::invalid_argument("Transcript: empty token");
    for (char c : t) {
      unsigned char u = static_cast<unsigned char>(c);
      if (std::isspace(u))
        throw std::invalid_argument("Transcript: whitespace inside token");
      if (std::isupper(u))
        throw std::invalid_argument("Transcript: token not lowercase");
    }
  }
  if (!pos_tags.empty() && pos_tags.size() != tokens.size())
    throw std::invalid_argument("Transcript: pos_tags length mismatch");
  for (std::size_t i = 0; i < sentence_breaks.size(); ++i) {
    if (sentence_breaks[i] >= tokens.size())
      throw std::invalid_argument("Transcript: sentence break out of range");
    if (i > 0 && sentence_breaks[i] <= sentence_breaks[i - 1])
      throw std::invalid_argument("Transcript: sentence breaks not increasing");
  }
}

}  // namespace filmner
