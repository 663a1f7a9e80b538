#ifndef FILMNER_FEATURES_HPP
#define FILMNER_FEATURES_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "filmner/gazetteer.hpp"
#include "filmner/matcher.hpp"
#include "filmner/pos_tagger.hpp"

namespace filmner {

// Numeric encoding of one candidate. Absent metadata is encoded as zeros
// plus an indicator, never imputed.
struct FeatureVector {
  double closeness_mean = 0.0;
  double closeness_min = 0.0;
  double closeness_max = 0.0;
  double closeness_defined = 0.0;  // {0,1}
  double lev_ratio = 0.0;
  double budget_norm = 0.0;
  double budget_present = 0.0;     // {0,1}
  std::array<double, 6> ngram_level{};   // one-hot over n in [1,6]
  std::vector<double> title_pos_bag;     // counts, one per PTB tag
  std::vector<double> pre_pos;           // one-hot, PTB tags + boundary
  std::vector<double> post_pos;          // one-hot, PTB tags + boundary

  std::vector<double> flatten() const;

  // Stable component order matching flatten(); constant for a fixed tag set.
  static const std::vector<std::string>& component_names();
  static std::size_t dimension();
};

// 1 - |w_m - w_k| / ||transcript||; in (0,1], 1 when the indices coincide.
double closeness(const Transcript& t, std::size_t movie_index,
                 std::size_t keyword_index);

struct ClosenessStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool defined = false;
};

// Statistics of closeness between the candidate's start token and the first
// occurrence of each film keyword present in the transcript. Films with no
// keyword found yield (0,0,0,undefined).
ClosenessStats closeness_stats(const Transcript& t,
                               const CandidateMention& candidate,
                               const FilmRecord& film);

// First token index of the first occurrence of `sequence` in tokens.
std::optional<std::size_t> find_token_sequence(
    const std::vector<std::string>& tokens,
    const std::vector<std::string>& sequence);

// Per-candidate (budget_norm, budget_present). Min/max budgets are taken
// over the distinct films with present budgets among this candidate set; a
// degenerate range maps every present budget to 0.5.
std::vector<std::pair<double, double>> budget_norm(
    const std::vector<const FilmRecord*>& films);

struct PosContext {
  std::vector<double> title_bag;  // counts over PTB tags
  std::string pre_tag;
  std::string post_tag;
};

// Tags of the span tokens plus the adjacent-token tags (boundary symbol at
// transcript edges). Uses transcript-carried tags when present, otherwise
// the supplied tagger.
PosContext pos_context(const Transcript& t, const CandidateMention& candidate,
                       const PosTagger& tagger);

// One FeatureVector per candidate, same order as the input. Throws when a
// candidate's film_id is not in the gazetteer.
std::vector<FeatureVector> featurize(const Transcript& t,
                                     const std::vector<CandidateMention>& candidates,
                                     const Gazetteer& g,
                                     const PosTagger& tagger);

struct FeatureRow {
  CandidateMention candidate;
  FeatureVector features;
};

// Delimited table with a header row; candidate identity columns first.
void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows);

}  // namespace filmner

#endif
