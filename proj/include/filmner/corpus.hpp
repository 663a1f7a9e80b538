#ifndef FILMNER_CORPUS_HPP
#define FILMNER_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace filmner {

// One episode as an ordered token sequence. Tokens are lowercase words with
// no whitespace inside them; sentence_breaks holds the index of the last
// token of each sentence for which the source text carried final punctuation.
struct Transcript {
  std::string channel_id;
  std::string episode_id;
  std::vector<std::string> tokens;
  std::vector<std::size_t> sentence_breaks;
  std::vector<std::string> pos_tags;  // empty, or one tag per token

  bool has_pos_tags() const { return !pos_tags.empty(); }
  std::size_t size() const { return tokens.size(); }

  // Throws std::invalid_argument when any field invariant is violated.
  void validate() const;
};

struct GoldLabel {
  std::string episode_id;
  std::string film_id;
  bool has_span = false;
  std::size_t span_start = 0;
  std::size_t span_end = 0;  // exclusive
};

struct NormalizedText {
  std::vector<std::string> tokens;
  std::vector<std::size_t> sentence_breaks;
};

// Lowercases, strips punctuation (internal apostrophes kept, hyphens split),
// converts every maximal digit run to spoken-English words, and records
// sentence-final punctuation positions. Total: empty input gives empty output.
NormalizedText normalize_text(const std::string& raw);

// Spoken-English form of n for 0 <= n <= 999,999,999. Values in [1000,1999]
// and [2010,2099] read year-style ("nineteen eighty four", "twenty seventeen");
// [2000,2009] read "two thousand five". No "and" anywhere.
std::vector<std::string> number_to_words(std::uint64_t n);

// Token-level edit distance divided by reference length. Reference must be
// non-empty.
double word_error_rate(const std::vector<std::string>& reference,
                       const std::vector<std::string>& hypothesis);

// Token-level edit distance (insertions + deletions + substitutions).
std::size_t token_edit_distance(const std::vector<std::string>& a,
                                const std::vector<std::string>& b);

}  // namespace filmner

#endif
