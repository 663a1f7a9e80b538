#include "filmner/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace filmner {

namespace {

std::size_t tag_count() { return ptb_tags().size(); }

// pre/post one-hot index: PTB tags then the boundary symbol last.
std::size_t context_tag_index(const std::string& tag) {
  if (tag == kBoundaryTag) return tag_count();
  return tag_index(tag);
}

std::vector<std::string> transcript_tags(const Transcript& t,
                                         const PosTagger& tagger) {
  if (t.has_pos_tags()) return t.pos_tags;
  return tagger.tag(t.tokens);
}

}  // namespace

std::vector<double> FeatureVector::flatten() const {
  std::vector<double> out;
  out.reserve(dimension());
  out.push_back(closeness_mean);
  out.push_back(closeness_min);
  out.push_back(closeness_max);
  out.push_back(closeness_defined);
  out.push_back(lev_ratio);
  out.push_back(budget_norm);
  out.push_back(budget_present);
  out.insert(out.end(), ngram_level.begin(), ngram_level.end());
  out.insert(out.end(), title_pos_bag.begin(), title_pos_bag.end());
  out.insert(out.end(), pre_pos.begin(), pre_pos.end());
  out.insert(out.end(), post_pos.begin(), post_pos.end());
  return out;
}

const std::vector<std::string>& FeatureVector::component_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v = {"closeness_mean", "closeness_min",
                                  "closeness_max", "closeness_defined",
                                  "lev_ratio",      "budget_norm",
                                  "budget_present"};
    for (int n = 1; n <= 6; ++n) v.push_back("ngram_" + std::to_string(n));
    for (const auto& tag : ptb_tags()) v.push_back("title_pos_" + tag);
    for (const auto& tag : ptb_tags()) v.push_back("pre_pos_" + tag);
    v.push_back(std::string("pre_pos_") + kBoundaryTag);
    for (const auto& tag : ptb_tags()) v.push_back("post_pos_" + tag);
    v.push_back(std::string("post_pos_") + kBoundaryTag);
    return v;
  }();
  return names;
}

std::size_t FeatureVector::dimension() { return component_names().size(); }

double closeness(const Transcript& t, std::size_t movie_index,
                 std::size_t keyword_index) {
  if (t.tokens.empty())
    throw std::invalid_argument("closeness: empty transcript");
  if (movie_index >= t.tokens.size() || keyword_index >= t.tokens.size())
    throw std::invalid_argument("closeness: index out of range");
  double gap = movie_index > keyword_index
                   ? static_cast<double>(movie_index - keyword_index)
                   : static_cast<double>(keyword_index - movie_index);
  return 1.0 - gap / static_cast<double>(t.tokens.size());
}

std::optional<std::size_t> find_token_sequence(
    const std::vector<std::string>& tokens,
    const std::vector<std::string>& sequence) {
  if (sequence.empty() || sequence.size() > tokens.size())
    return std::nullopt;
  for (std::size_t i = 0; i + sequence.size() <= tokens.size(); ++i) {
    bool hit = true;
    for (std::size_t j = 0; j < sequence.size(); ++j) {
      if (tokens[i + j] != sequence[j]) {
        hit = false;
        break;
      }
    }
    if (hit) return i;
  }
  return std::nullopt;
}

ClosenessStats closeness_stats(const Transcript& t,
                               const CandidateMention& candidate,
                               const FilmRecord& film) {
  ClosenessStats stats;
  double sum = 0.0;
  std::size_t found = 0;
  for (const auto& kw : film.keywords) {
    auto pos = find_token_sequence(t.tokens, kw);
    if (!pos) continue;
    double c = closeness(t, candidate.span_start, *pos);
    if (found == 0) {
      stats.min = stats.max = c;
    } else {
      stats.min = std::min(stats.min, c);
      stats.max = std::max(stats.max, c);
    }
    sum += c;
    ++found;
  }
  if (found == 0) return ClosenessStats{};
  stats.mean = sum / static_cast<double>(found);
  stats.defined = true;
  return stats;
}

std::vector<std::pair<double, double>> budget_norm(
    const std::vector<const FilmRecord*>& films) {
  // Range over distinct films (by id) with a present budget.
  std::map<std::string, double> present;
  for (const FilmRecord* f : films)
    if (f && f->budget) present[f->film_id] = *f->budget;

  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& [id, b] : present) {
    if (first) {
      lo = hi = b;
      first = false;
    } else {
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
  }

  std::vector<std::pair<double, double>> out;
  out.reserve(films.size());
  for (const FilmRecord* f : films) {
    if (!f || !f->budget) {
      out.emplace_back(0.0, 0.0);
    } else if (hi == lo) {
      out.emplace_back(0.5, 1.0);
    } else {
      out.emplace_back((*f->budget - lo) / (hi - lo), 1.0);
    }
  }
  return out;
}

PosContext pos_context(const Transcript& t, const CandidateMention& candidate,
                       const PosTagger& tagger) {
  if (candidate.span_end > t.tokens.size() ||
      candidate.span_start >= candidate.span_end)
    throw std::invalid_argument("pos_context: span out of range");
  std::vector<std::string> tags = transcript_tags(t, tagger);
  PosContext ctx;
  ctx.title_bag.assign(tag_count(), 0.0);
  for (std::size_t i = candidate.span_start; i < candidate.span_end; ++i)
    ctx.title_bag[tag_index(tags[i])] += 1.0;
  ctx.pre_tag = candidate.span_start == 0 ? kBoundaryTag
                                          : tags[candidate.span_start - 1];
  ctx.post_tag = candidate.span_end >= t.tokens.size()
                     ? kBoundaryTag
                     : tags[candidate.span_end];
  return ctx;
}

std::vector<FeatureVector> featurize(
    const Transcript& t, const std::vector<CandidateMention>& candidates,
    const Gazetteer& g, const PosTagger& tagger) {
  std::vector<const FilmRecord*> films;
  films.reserve(candidates.size());
  for (const auto& c : candidates) films.push_back(&g.resolve(c.film_id));

  auto budgets = budget_norm(films);

  std::vector<FeatureVector> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const CandidateMention& c = candidates[i];
    FeatureVector fv;
    ClosenessStats cs = closeness_stats(t, c, *films[i]);
    fv.closeness_mean = cs.mean;
    fv.closeness_min = cs.min;
    fv.closeness_max = cs.max;
    fv.closeness_defined = cs.defined ? 1.0 : 0.0;
    fv.lev_ratio = c.lev_ratio;
    fv.budget_norm = budgets[i].first;
    fv.budget_present = budgets[i].second;
    if (c.n < 1 || c.n > 6)
      throw std::invalid_argument("featurize: candidate n out of [1,6]");
    fv.ngram_level[c.n - 1] = 1.0;
    PosContext ctx = pos_context(t, c, tagger);
    fv.title_pos_bag = std::move(ctx.title_bag);
    fv.pre_pos.assign(tag_count() + 1, 0.0);
    fv.pre_pos[context_tag_index(ctx.pre_tag)] = 1.0;
    fv.post_pos.assign(tag_count() + 1, 0.0);
    fv.post_pos[context_tag_index(ctx.post_tag)] = 1.0;
    out.push_back(std::move(fv));
  }
  return out;
}

void write_feature_csv(std::ostream& out,
                       const std::vector<FeatureRow>& rows) {
  out << "episode_id,span_start,span_end,film_id";
  for (const auto& name : FeatureVector::component_names()) out << ',' << name;
  out << '\n';
  for (const auto& row : rows) {
    out << row.candidate.episode_id << ',' << row.candidate.span_start << ','
        << row.candidate.span_end << ',' << row.candidate.film_id;
    for (double v : row.features.flatten())
      out << ',' << nlohmann::json(v).dump();
    out << '\n';
  }
}

}  // namespace filmner
