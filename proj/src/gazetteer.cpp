#include "filmner/gazetteer.hpp"

#include <stdexcept>

#include "filmner/util.hpp"

namespace filmner {

void Gazetteer::insert(FilmRecord record) {
  if (record.film_id.empty())
    throw std::invalid_argument("Gazetteer: empty film_id");
  if (by_id_.count(record.film_id))
    throw std::invalid_argument("Gazetteer: duplicate film_id " +
                                record.film_id);
  if (record.title.empty())
    throw std::invalid_argument("Gazetteer: empty title for " + record.film_id);

  record.title_tokens = normalize_text(record.title).tokens;
  if (record.title_tokens.empty())
    throw std::invalid_argument("Gazetteer: title normalizes to no tokens: " +
                                record.title);
  record.title_joined = join_tokens(record.title_tokens);

  // Keywords arrive as free text; normalize each and drop any that vanish.
  std::vector<std::vector<std::string>> keywords;
  for (auto& kw : record.keywords) {
    auto tokens = normalize_text(join_tokens(kw)).tokens;
    if (!tokens.empty()) keywords.push_back(std::move(tokens));
  }
  record.keywords = std::move(keywords);

  if (record.budget && *record.budget < 0)
    throw std::invalid_argument("Gazetteer: negative budget for " +
                                record.film_id);

  std::size_t index = records_.size();
  by_id_.emplace(record.film_id, index);
  by_length_[record.title_tokens.size()].push_back(index);
  records_.push_back(std::move(record));
}

const FilmRecord* Gazetteer::find(const std::string& film_id) const {
  auto it = by_id_.find(film_id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

const FilmRecord& Gazetteer::resolve(const std::string& film_id) const {
  const FilmRecord* r = find(film_id);
  if (!r) throw std::invalid_argument("Gazetteer: unknown film_id " + film_id);
  return *r;
}

std::vector<const FilmRecord*> Gazetteer::candidate_title_set(
    std::size_t n) const {
  if (n < kMinNgram || n > kMaxNgram)
    throw std::invalid_argument("candidate_title_set: n out of [1,6]");
  std::vector<const FilmRecord*> out;
  for (std::size_t len = (n > 1 ? n - 1 : 1); len <= n + 1; ++len) {
    auto it = by_length_.find(len);
    if (it == by_length_.end()) continue;
    for (std::size_t idx : it->second) out.push_back(&records_[idx]);
  }
  return out;
}

std::map<std::size_t, std::size_t> Gazetteer::bucket_sizes() const {
  std::map<std::size_t, std::size_t> out;
  for (const auto& [len, bucket] : by_length_) out[len] = bucket.size();
  return out;
}

}  // namespace filmner
