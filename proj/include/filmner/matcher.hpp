#ifndef FILMNER_MATCHER_HPP
#define FILMNER_MATCHER_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "filmner/corpus.hpp"
#include "filmner/gazetteer.hpp"

namespace filmner {

// A token span fuzzily matched to a film, awaiting classification.
struct CandidateMention {
  std::string episode_id;
  std::size_t span_start = 0;
  std::size_t span_end = 0;  // exclusive
  std::size_t n = 0;         // == span_end - span_start
  std::string film_id;
  std::string matched_text;  // whitespace-joined window tokens
  double lev_ratio = 0.0;
};

// Maximum acceptable lev_ratio per window length n in [1,6].
class ThresholdProfile {
 public:
  ThresholdProfile() : per_n_{} {}
  explicit ThresholdProfile(const std::array<double, 6>& per_n);

  static ThresholdProfile uniform(double value);

  double at(std::size_t n) const;
  const std::array<double, 6>& values() const { return per_n_; }

 private:
  std::array<double, 6> per_n_;  // index 0 holds n=1
};

// Classic unit-cost character edit distance.
std::size_t levenshtein_distance(const std::string& a, const std::string& b);

// Edit distance capped at limit: returns the exact distance when it is
// <= limit, otherwise limit + 1. Early-terminates once every entry of the
// current DP row exceeds limit.
std::size_t levenshtein_bounded(const std::string& a, const std::string& b,
                                std::size_t limit);

// lev(a, b) / max(|a|, |b|). 0 means identical, 1 maximally different.
// Rejects two empty strings.
double lev_ratio(const std::string& matched, const std::string& original);

struct LabeledTranscript {
  Transcript transcript;
  std::vector<GoldLabel> labels;
};

// Scans every window of length n in [1,6] (never across sentence breaks)
// against the length-compatible gazetteer buckets. Raw matches with
// overlapping spans are resolved by (longer n, lower lev_ratio, larger budget
// with absent last, film_id); output is sorted by span start and contains no
// overlapping spans.
std::vector<CandidateMention> scan(const Transcript& t, const Gazetteer& g,
                                   const ThresholdProfile& p);

// Default calibration grid {0.00, 0.05, ..., 0.50}.
std::vector<double> default_threshold_grid();

// Per-n threshold selection: picks the grid value maximizing candidate-stage
// F1 averaged over 3 internal cross-validation splits of the training
// transcripts (grouped by channel when more than 3 channels are present).
// Ties break toward the smaller threshold.
ThresholdProfile calibrate_thresholds(
    const std::vector<LabeledTranscript>& training, const Gazetteer& g,
    const std::vector<double>& grid);

// 3-way split assignment used by internal cross-validation: transcripts are
// grouped by channel when more than `folds` distinct channels exist,
// otherwise dealt round-robin in (channel_id, episode_id) order.
std::vector<int> internal_fold_assignment(
    const std::vector<std::string>& channel_ids,
    const std::vector<std::string>& episode_ids, int folds = 3);

}  // namespace filmner

#endif
