#ifndef FILMNER_EVAL_HPP
#define FILMNER_EVAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "filmner/corpus.hpp"
#include "filmner/gazetteer.hpp"
#include "filmner/matcher.hpp"
#include "filmner/model.hpp"

namespace filmner {

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// Mention-level scoring for one episode. With spans on every gold label, a
// prediction counts as TP when its film_id equals a not-yet-consumed gold
// label's and the spans overlap, matched greedily in transcript order.
// Without full span coverage, matching is a film_id multiset intersection.
// Unmatched predictions are FP; unconsumed gold are FN. Throws when the two
// lists mix episodes.
MatchCounts match_predictions(const std::vector<GoldLabel>& gold,
                              const std::vector<CandidateMention>& predicted);

// Per-candidate 0/1 gold alignment under the same matching rule, in input
// order. Used to build classifier training labels.
std::vector<int> label_candidates(
    const std::vector<GoldLabel>& gold,
    const std::vector<CandidateMention>& candidates);

struct FoldResult {
  std::string held_out_channel;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::string system_name;
  std::vector<FoldResult> per_fold;     // sorted by held-out channel
  double macro_precision = 0.0;         // unweighted means over folds
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

struct LocoFold {
  std::string channel_id;  // held out
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Leave-one-channel-out folds, one per distinct channel_id, sorted by
// channel. Every transcript lands in exactly one test set. Throws with
// fewer than two distinct channels.
std::vector<LocoFold> loco_folds(const std::vector<LabeledTranscript>& corpus);

enum class SystemKind {
  kModel,      // calibrated matcher + trained classifier
  kBaseline1,  // accept every candidate
  kBaseline2,  // accept candidates whose span is entirely noun-family tags
  kBaseline3,  // accept candidates passing tuned closeness thresholds
  kGoldOracle  // echo gold labels as predictions (evaluator sanity check)
};

std::string system_name(SystemKind s);
SystemKind system_from_name(const std::string& name);

// Conjunctive lower bounds on the closeness statistics; a candidate passes
// when mean, min, and max all reach their thresholds.
struct ClosenessThresholds {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Baseline 3 search values per statistic: {0.0, 0.05, ..., 1.0}.
std::vector<double> default_closeness_grid();

struct RunOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<double> threshold_grid = default_threshold_grid();
  std::vector<std::pair<Penalty, double>> model_grid = default_model_grid();
  // When set, skips per-fold matcher calibration and uses this profile.
  std::optional<ThresholdProfile> fixed_thresholds;
};

// Full LOCO evaluation of one system: per fold, calibrate matcher
// thresholds on the training channels, generate candidates, apply the
// system's decision rule, and score against gold. Deterministic given
// (corpus, gazetteer, options); folds run in parallel up to options.jobs.
// Throws when the corpus carries no gold labels at all.
EvalReport run_system(SystemKind system,
                      const std::vector<LabeledTranscript>& corpus,
                      const Gazetteer& g, const RunOptions& options = {});

}  // namespace filmner

#endif
