#include "filmner/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "filmner/util.hpp"

namespace filmner {

namespace {

// Largest edit distance still within ratio `threshold` for strings whose
// longer length is max_len. The epsilon guards against products like
// 0.2 * 5 landing just under an integer.
std::size_t allowed_distance(double threshold, std::size_t max_len) {
  return static_cast<std::size_t>(
      std::floor(threshold * static_cast<double>(max_len) + 1e-9));
}

struct RawMatch {
  std::size_t start;
  std::size_t end;
  std::size_t n;
  const FilmRecord* film;
  std::size_t dist;
  std::size_t max_len;

  double ratio() const {
    return static_cast<double>(dist) / static_cast<double>(max_len);
  }
};

// Resolution order: most specific, best supported match first.
bool better_match(const RawMatch& a, const RawMatch& b) {
  if (a.n != b.n) return a.n > b.n;
  double ra = a.ratio(), rb = b.ratio();
  if (ra != rb) return ra < rb;
  bool pa = a.film->budget.has_value(), pb = b.film->budget.has_value();
  if (pa != pb) return pa;
  if (pa && pb && *a.film->budget != *b.film->budget)
    return *a.film->budget > *b.film->budget;
  if (a.film->film_id != b.film->film_id)
    return a.film->film_id < b.film->film_id;
  return a.start < b.start;
}

// Greedy interval selection in priority order; claimed tokens block later
// overlapping matches (and duplicate spans, which gives one film per span).
std::vector<RawMatch> resolve_overlaps(std::vector<RawMatch> raw,
                                       std::size_t transcript_len) {
  std::sort(raw.begin(), raw.end(), better_match);
  std::vector<char> claimed(transcript_len, 0);
  std::vector<RawMatch> kept;
  for (const auto& m : raw) {
    bool free = true;
    for (std::size_t i = m.start; i < m.end; ++i) {
      if (claimed[i]) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    for (std::size_t i = m.start; i < m.end; ++i) claimed[i] = 1;
    kept.push_back(m);
  }
  std::sort(kept.begin(), kept.end(),
            [](const RawMatch& a, const RawMatch& b) { return a.start < b.start; });
  return kept;
}

CandidateMention to_candidate(const RawMatch& m, const Transcript& t) {
  CandidateMention c;
  c.episode_id = t.episode_id;
  c.span_start = m.start;
  c.span_end = m.end;
  c.n = m.n;
  c.film_id = m.film->film_id;
  c.matched_text = join_tokens(t.tokens, m.start, m.end);
  c.lev_ratio = m.ratio();
  return c;
}

// For each start index, one past the last token of its sentence.
std::vector<std::size_t> sentence_limits(const Transcript& t) {
  std::vector<std::size_t> limit(t.tokens.size(), t.tokens.size());
  if (t.sentence_breaks.empty() || t.tokens.empty()) return limit;
  std::size_t bi = 0;
  for (std::size_t s = 0; s < t.tokens.size(); ++s) {
    while (bi < t.sentence_breaks.size() && t.sentence_breaks[bi] < s) ++bi;
    if (bi < t.sentence_breaks.size()) limit[s] = t.sentence_breaks[bi] + 1;
  }
  return limit;
}

std::vector<RawMatch> raw_matches(const Transcript& t, const Gazetteer& g,
                                  const ThresholdProfile& p) {
  const std::size_t T = t.tokens.size();
  std::vector<RawMatch> raw;
  if (T == 0 || g.empty()) return raw;

  std::array<std::vector<const FilmRecord*>, Gazetteer::kMaxNgram + 1> buckets;
  for (std::size_t n = Gazetteer::kMinNgram; n <= Gazetteer::kMaxNgram; ++n)
    buckets[n] = g.candidate_title_set(n);

  std::vector<std::size_t> limit = sentence_limits(t);
  for (std::size_t s = 0; s < T; ++s) {
    std::string window;
    std::size_t max_n = std::min<std::size_t>(Gazetteer::kMaxNgram, limit[s] - s);
    for (std::size_t n = 1; n <= max_n; ++n) {
      if (n > 1) window += ' ';
      window += t.tokens[s + n - 1];
      double thr = p.at(n);
      for (const FilmRecord* film : buckets[n]) {
        const std::string& title = film->title_joined;
        std::size_t max_len = std::max(window.size(), title.size());
        std::size_t allowed = allowed_distance(thr, max_len);
        std::size_t gap = window.size() > title.size()
                              ? window.size() - title.size()
                              : title.size() - window.size();
        if (gap > allowed) continue;
        std::size_t d = levenshtein_bounded(window, title, allowed);
        if (d <= allowed)
          raw.push_back({s, s + n, n, film, d, max_len});
      }
    }
  }
  return raw;
}

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  double p = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
  double r = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
  return (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

struct PairCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

bool spans_overlap(std::size_t a0, std::size_t a1, std::size_t b0,
                   std::size_t b1) {
  return a0 < b1 && b0 < a1;
}

// Candidate-stage scoring used during calibration: greedy span matching when
// all gold labels carry spans, film-id multiset matching otherwise.
PairCounts pair_counts(std::vector<GoldLabel> gold,
                       const std::vector<RawMatch>& preds) {
  PairCounts c;
  bool span_mode = !gold.empty();
  for (const auto& gl : gold)
    if (!gl.has_span) span_mode = false;
  if (span_mode) {
    std::sort(gold.begin(), gold.end(),
              [](const GoldLabel& a, const GoldLabel& b) {
                return a.span_start < b.span_start;
              });
    std::vector<char> used(gold.size(), 0);
    for (const auto& m : preds) {
      bool hit = false;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        if (used[i] || gold[i].film_id != m.film->film_id) continue;
        if (spans_overlap(m.start, m.end, gold[i].span_start,
                          gold[i].span_end)) {
          used[i] = 1;
          hit = true;
          break;
        }
      }
      hit ? ++c.tp : ++c.fp;
    }
    for (char u : used)
      if (!u) ++c.fn;
  } else {
    std::map<std::string, std::size_t> want;
    for (const auto& gl : gold) ++want[gl.film_id];
    for (const auto& m : preds) {
      auto it = want.find(m.film->film_id);
      if (it != want.end() && it->second > 0) {
        --it->second;
        ++c.tp;
      } else {
        ++c.fp;
      }
    }
    for (const auto& [id, left] : want) c.fn += left;
  }
  return c;
}

}  // namespace

ThresholdProfile::ThresholdProfile(const std::array<double, 6>& per_n)
    : per_n_(per_n) {
  for (double v : per_n_)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("ThresholdProfile: value outside [0,1]");
}

ThresholdProfile ThresholdProfile::uniform(double value) {
  std::array<double, 6> a;
  a.fill(value);
  return ThresholdProfile(a);
}

double ThresholdProfile::at(std::size_t n) const {
  if (n < 1 || n > 6)
    throw std::invalid_argument("ThresholdProfile: n out of [1,6]");
  return per_n_[n - 1];
}

std::size_t levenshtein_distance(const std::string& a, const std::string& b) {
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

std::size_t levenshtein_bounded(const std::string& a, const std::string& b,
                                std::size_t limit) {
  const std::size_t la = a.size(), lb = b.size();
  std::size_t gap = la > lb ? la - lb : lb - la;
  if (gap > limit) return limit + 1;
  std::vector<std::size_t> prev(lb + 1), cur(lb + 1);
  for (std::size_t j = 0; j <= lb; ++j) prev[j] = j;
  for (std::size_t i = 0; i < la; ++i) {
    cur[0] = i + 1;
    std::size_t row_min = cur[0];
    for (std::size_t j = 0; j < lb; ++j) {
      std::size_t sub = prev[j] + (a[i] == b[j] ? 0 : 1);
      cur[j + 1] = std::min({cur[j] + 1, prev[j + 1] + 1, sub});
      row_min = std::min(row_min, cur[j + 1]);
    }
    if (row_min > limit) return limit + 1;
    prev.swap(cur);
  }
  return std::min(prev[lb], limit + 1);
}

double lev_ratio(const std::string& matched, const std::string& original) {
  std::size_t max_len = std::max(matched.size(), original.size());
  if (max_len == 0)
    throw std::invalid_argument("lev_ratio: both strings empty");
  return static_cast<double>(levenshtein_distance(matched, original)) /
         static_cast<double>(max_len);
}

std::vector<CandidateMention> scan(const Transcript& t, const Gazetteer& g,
                                   const ThresholdProfile& p) {
  std::vector<RawMatch> kept = resolve_overlaps(raw_matches(t, g, p),
                                                t.tokens.size());
  std::vector<CandidateMention> out;
  out.reserve(kept.size());
  for (const auto& m : kept) out.push_back(to_candidate(m, t));
  return out;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 20.0);
  return grid;
}

std::vector<int> internal_fold_assignment(
    const std::vector<std::string>& channel_ids,
    const std::vector<std::string>& episode_ids, int folds) {
  if (channel_ids.size() != episode_ids.size())
    throw std::invalid_argument("internal_fold_assignment: size mismatch");
  const std::size_t n = channel_ids.size();
  std::vector<int> assignment(n, 0);
  std::vector<std::string> distinct(channel_ids);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  if (distinct.size() > static_cast<std::size_t>(folds)) {
    std::map<std::string, int> channel_fold;
    for (std::size_t i = 0; i < distinct.size(); ++i)
      channel_fold[distinct[i]] = static_cast<int>(i % folds);
    for (std::size_t i = 0; i < n; ++i)
      assignment[i] = channel_fold[channel_ids[i]];
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (channel_ids[a] != channel_ids[b])
        return channel_ids[a] < channel_ids[b];
      if (episode_ids[a] != episode_ids[b])
        return episode_ids[a] < episode_ids[b];
      return a < b;
    });
    for (std::size_t i = 0; i < n; ++i)
      assignment[order[i]] = static_cast<int>(i % folds);
  }
  return assignment;
}

ThresholdProfile calibrate_thresholds(
    const std::vector<LabeledTranscript>& training, const Gazetteer& g,
    const std::vector<double>& grid) {
  if (training.empty())
    throw std::invalid_argument("calibrate_thresholds: empty training set");
  if (grid.empty())
    throw std::invalid_argument("calibrate_thresholds: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
      throw std::invalid_argument("calibrate_thresholds: grid value outside [0,1]");
    if (i > 0 && grid[i] < grid[i - 1])
      throw std::invalid_argument("calibrate_thresholds: grid not sorted");
  }

  std::vector<std::string> channels, episodes;
  for (const auto& lt : training) {
    channels.push_back(lt.transcript.channel_id);
    episodes.push_back(lt.transcript.episode_id);
  }
  std::vector<int> fold_of = internal_fold_assignment(channels, episodes, 3);
  const int kFolds = 3;
  const double widest = grid.back();

  // All per-transcript raw matches at the widest grid threshold; narrower
  // thresholds are evaluated by filtering on the stored distances.
  std::vector<std::vector<RawMatch>> raw_per_transcript(training.size());
  ThresholdProfile widest_profile = ThresholdProfile::uniform(widest);
  for (std::size_t i = 0; i < training.size(); ++i)
    raw_per_transcript[i] = raw_matches(training[i].transcript, g,
                                        widest_profile);

  auto gold_level = [&](const GoldLabel& gl) -> std::size_t {
    if (gl.has_span) return gl.span_end - gl.span_start;
    const FilmRecord* film = g.find(gl.film_id);
    return film ? film->title_tokens.size() : 0;
  };

  std::array<double, 6> best{};
  for (std::size_t n = 1; n <= 6; ++n) {
    double best_f1 = -1.0;
    double best_value = grid.front();
    for (double v : grid) {
      double f1_sum = 0.0;
      int fold_count = 0;
      for (int f = 0; f < kFolds; ++f) {
        PairCounts counts;
        bool has_transcripts = false;
        for (std::size_t i = 0; i < training.size(); ++i) {
          if (fold_of[i] != f) continue;
          has_transcripts = true;
          std::vector<RawMatch> filtered;
          for (const auto& m : raw_per_transcript[i]) {
            if (m.n != n) continue;
            if (m.dist <= allowed_distance(v, m.max_len))
              filtered.push_back(m);
          }
          filtered = resolve_overlaps(std::move(filtered),
                                      training[i].transcript.tokens.size());
          std::vector<GoldLabel> gold_at_n;
          for (const auto& gl : training[i].labels)
            if (gold_level(gl) == n) gold_at_n.push_back(gl);
          PairCounts c = pair_counts(std::move(gold_at_n), filtered);
          counts.tp += c.tp;
          counts.fp += c.fp;
          counts.fn += c.fn;
        }
        if (!has_transcripts) continue;
        f1_sum += f1_from_counts(counts.tp, counts.fp, counts.fn);
        ++fold_count;
      }
      double mean_f1 = fold_count ? f1_sum / fold_count : 0.0;
      if (mean_f1 > best_f1) {
        best_f1 = mean_f1;
        best_value = v;
      }
    }
    best[n - 1] = best_value;
  }
  return ThresholdProfile(best);
}

}  // namespace filmner
