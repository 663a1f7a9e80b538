#ifndef FILMNER_GAZETTEER_HPP
#define FILMNER_GAZETTEER_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "filmner/corpus.hpp"

namespace filmner {

// One gazetteer entry. Any metadata field may be absent; absence is kept as
// absence, never imputed.
struct FilmRecord {
  std::string film_id;
  std::string title;
  std::vector<std::string> title_tokens;  // normalized, non-empty
  std::string title_joined;               // title_tokens joined with spaces
  std::optional<double> budget;
  std::vector<std::vector<std::string>> keywords;  // normalized token runs
  std::optional<std::string> plot;
  std::optional<std::string> logline;
  std::optional<int> release_year;

  std::size_t ngram_level() const { return title_tokens.size(); }
};

// Title collection indexed by title token count. Reads are safe to share;
// inserts need exclusive access (take a copy for a stable scan snapshot).
class Gazetteer {
 public:
  // Normalizes title and keywords, fills derived fields, and adds the record.
  // Throws std::invalid_argument on duplicate film_id or a title that
  // normalizes to no tokens.
  void insert(FilmRecord record);

  const std::vector<FilmRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const FilmRecord* find(const std::string& film_id) const;

  // Same as find but throws when the id is unknown.
  const FilmRecord& resolve(const std::string& film_id) const;

  // Records whose title length could fuzzily match an n-token window:
  // buckets n-1, n, n+1. Requires 1 <= n <= 6. Pointers stay valid until the
  // next insert.
  std::vector<const FilmRecord*> candidate_title_set(std::size_t n) const;

  // Map from title token count to the number of records in that bucket.
  std::map<std::size_t, std::size_t> bucket_sizes() const;

  static constexpr std::size_t kMinNgram = 1;
  static constexpr std::size_t kMaxNgram = 6;

 private:
  std::vector<FilmRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::map<std::size_t, std::vector<std::size_t>> by_length_;
};

}  // namespace filmner

#endif
