#include "filmner/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "filmner/features.hpp"
#include "filmner/pos_tagger.hpp"
#include "filmner/util.hpp"

namespace filmner {

namespace {

void check_single_episode(const std::vector<GoldLabel>& gold,
                          const std::vector<CandidateMention>& predicted) {
  const std::string* episode = nullptr;
  for (const auto& l : gold) {
    if (episode && l.episode_id != *episode)
      throw std::invalid_argument("match_predictions: mixed episodes");
    episode = &l.episode_id;
  }
  for (const auto& p : predicted) {
    if (episode && p.episode_id != *episode)
      throw std::invalid_argument("match_predictions: mixed episodes");
    episode = &p.episode_id;
  }
}

bool spans_overlap(std::size_t s1, std::size_t e1, std::size_t s2,
                   std::size_t e2) {
  return s1 < e2 && s2 < e1;
}

// 1 for each prediction consumed by a gold label, in input order. Greedy in
// transcript order when every gold label carries a span, film_id multiset
// matching otherwise.
std::vector<int> match_flags(const std::vector<GoldLabel>& gold,
                             const std::vector<CandidateMention>& predicted) {
  check_single_episode(gold, predicted);
  std::vector<int> flags(predicted.size(), 0);

  bool span_mode = !gold.empty();
  for (const auto& l : gold)
    if (!l.has_span) span_mode = false;

  std::vector<std::size_t> order(predicted.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = predicted[a];
    const auto& pb = predicted[b];
    if (pa.span_start != pb.span_start) return pa.span_start < pb.span_start;
    if (pa.span_end != pb.span_end) return pa.span_end < pb.span_end;
    if (pa.film_id != pb.film_id) return pa.film_id < pb.film_id;
    return a < b;
  });

  if (span_mode) {
    std::vector<std::size_t> gorder(gold.size());
    std::iota(gorder.begin(), gorder.end(), 0);
    std::sort(gorder.begin(), gorder.end(), [&](std::size_t a, std::size_t b) {
      const auto& ga = gold[a];
      const auto& gb = gold[b];
      if (ga.span_start != gb.span_start) return ga.span_start < gb.span_start;
      if (ga.span_end != gb.span_end) return ga.span_end < gb.span_end;
      if (ga.film_id != gb.film_id) return ga.film_id < gb.film_id;
      return a < b;
    });
    std::vector<char> used(gold.size(), 0);
    for (std::size_t pi : order) {
      for (std::size_t gi : gorder) {
        if (used[gi] || gold[gi].film_id != predicted[pi].film_id) continue;
        if (!spans_overlap(gold[gi].span_start, gold[gi].span_end,
                           predicted[pi].span_start, predicted[pi].span_end))
          continue;
        used[gi] = 1;
        flags[pi] = 1;
        break;
      }
    }
  } else {
    std::map<std::string, std::size_t> remaining;
    for (const auto& l : gold) ++remaining[l.film_id];
    for (std::size_t pi : order) {
      auto it = remaining.find(predicted[pi].film_id);
      if (it != remaining.end() && it->second > 0) {
        --it->second;
        flags[pi] = 1;
      }
    }
  }
  return flags;
}

std::vector<std::string> transcript_tags(const Transcript& t,
                                         const PosTagger& tagger) {
  if (t.pos_tags.size() == t.tokens.size() && !t.tokens.empty())
    return t.pos_tags;
  return tagger.tag(t.tokens);
}

bool noun_family(const std::string& tag) {
  return tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS" ||
         tag == "CD";
}

std::vector<CandidateMention> gold_as_predictions(const LabeledTranscript& lt,
                                                  const Gazetteer& g) {
  std::vector<CandidateMention> preds;
  preds.reserve(lt.labels.size());
  for (const auto& label : lt.labels) {
    CandidateMention c;
    c.episode_id = label.episode_id;
    c.film_id = label.film_id;
    if (label.has_span) {
      c.span_start = label.span_start;
      c.span_end = label.span_end;
      c.matched_text = join_tokens(lt.transcript.tokens, label.span_start,
                                   label.span_end);
    } else {
      c.span_start = 0;
      c.span_end = 1;
      if (const FilmRecord* f = g.find(label.film_id))
        c.matched_text = f->title_joined;
    }
    std::size_t len = c.span_end - c.span_start;
    c.n = std::clamp<std::size_t>(len, 1, 6);
    c.lev_ratio = 0.0;
    preds.push_back(std::move(c));
  }
  return preds;
}

double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / den;
}

void fill_metrics(FoldResult& r) {
  r.precision = safe_ratio(r.tp, r.tp + r.fp);
  r.recall = safe_ratio(r.tp, r.tp + r.fn);
  r.f1 = (r.precision + r.recall) > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
}

// Per-candidate closeness statistics plus inner-fold id, flattened across
// the training transcripts for the Baseline 3 grid search.
struct ClosenessSample {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int label = 0;
  int fold = 0;
};

ClosenessThresholds search_closeness_thresholds(
    const std::vector<ClosenessSample>& samples,
    const std::vector<double>& grid, int folds) {
  ClosenessThresholds best;
  double best_f1 = -1.0;
  std::vector<std::size_t> tp(folds), fp(folds), fn(folds), total(folds, 0);
  for (const auto& s : samples) ++total[s.fold];

  for (double tm : grid) {
    for (double tn : grid) {
      for (double tx : grid) {
        std::fill(tp.begin(), tp.end(), 0);
        std::fill(fp.begin(), fp.end(), 0);
        std::fill(fn.begin(), fn.end(), 0);
        for (const auto& s : samples) {
          bool accept = s.mean >= tm && s.min >= tn && s.max >= tx;
          if (accept && s.label)
            ++tp[s.fold];
          else if (accept && !s.label)
            ++fp[s.fold];
          else if (!accept && s.label)
            ++fn[s.fold];
        }
        double f1_sum = 0.0;
        int usable = 0;
        for (int f = 0; f < folds; ++f) {
          if (total[f] == 0) continue;
          double p = safe_ratio(tp[f], tp[f] + fp[f]);
          double r = safe_ratio(tp[f], tp[f] + fn[f]);
          f1_sum += (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
          ++usable;
        }
        double mean_f1 = usable ? f1_sum / usable : 0.0;
        if (mean_f1 > best_f1) {  // ties keep the smallest (mean, min, max)
          best_f1 = mean_f1;
          best = {tm, tn, tx};
        }
      }
    }
  }
  return best;
}

}  // namespace

MatchCounts match_predictions(const std::vector<GoldLabel>& gold,
                              const std::vector<CandidateMention>& predicted) {
  std::vector<int> flags = match_flags(gold, predicted);
  MatchCounts counts;
  for (int f : flags) counts.tp += f;
  counts.fp = predicted.size() - counts.tp;
  counts.fn = gold.size() - counts.tp;
  return counts;
}

std::vector<int> label_candidates(
    const std::vector<GoldLabel>& gold,
    const std::vector<CandidateMention>& candidates) {
  return match_flags(gold, candidates);
}

std::vector<LocoFold> loco_folds(const std::vector<LabeledTranscript>& corpus) {
  std::map<std::string, std::vector<std::size_t>> by_channel;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    by_channel[corpus[i].transcript.channel_id].push_back(i);
  if (by_channel.size() < 2)
    throw std::invalid_argument(
        "loco_folds: need at least two distinct channels");

  std::vector<LocoFold> folds;
  folds.reserve(by_channel.size());
  for (const auto& [channel, test_indices] : by_channel) {
    LocoFold fold;
    fold.channel_id = channel;
    fold.test_indices = test_indices;
    for (std::size_t i = 0; i < corpus.size(); ++i)
      if (corpus[i].transcript.channel_id != channel)
        fold.train_indices.push_back(i);
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::string system_name(SystemKind s) {
  switch (s) {
    case SystemKind::kModel: return "model";
    case SystemKind::kBaseline1: return "baseline1";
    case SystemKind::kBaseline2: return "baseline2";
    case SystemKind::kBaseline3: return "baseline3";
    case SystemKind::kGoldOracle: return "gold";
  }
  return "model";
}

SystemKind system_from_name(const std::string& name) {
  if (name == "model") return SystemKind::kModel;
  if (name == "baseline1") return SystemKind::kBaseline1;
  if (name == "baseline2") return SystemKind::kBaseline2;
  if (name == "baseline3") return SystemKind::kBaseline3;
  if (name == "gold") return SystemKind::kGoldOracle;
  throw std::invalid_argument("unknown system: " + name);
}

std::vector<double> default_closeness_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

namespace {

FoldResult evaluate_fold(SystemKind system,
                         const std::vector<LabeledTranscript>& corpus,
                         const Gazetteer& g, const LocoFold& fold,
                         const RunOptions& options, const PosTagger& tagger) {
  FoldResult result;
  result.held_out_channel = fold.channel_id;

  if (system == SystemKind::kGoldOracle) {
    for (std::size_t ti : fold.test_indices) {
      MatchCounts c = match_predictions(
          corpus[ti].labels, gold_as_predictions(corpus[ti], g));
      result.tp += c.tp;
      result.fp += c.fp;
      result.fn += c.fn;
    }
    fill_metrics(result);
    return result;
  }

  ThresholdProfile thresholds = ThresholdProfile::uniform(0.0);
  if (options.fixed_thresholds) {
    thresholds = *options.fixed_thresholds;
  } else {
    std::vector<LabeledTranscript> training;
    training.reserve(fold.train_indices.size());
    for (std::size_t ti : fold.train_indices) training.push_back(corpus[ti]);
    thresholds = calibrate_thresholds(training, g, options.threshold_grid);
  }

  // Per-system decision state built from the training channels.
  ClosenessThresholds b3;
  LinearModel model;
  bool model_trained = false;
  bool model_accept_all = false;  // degenerate training sets fall back here

  if (system == SystemKind::kBaseline3 || system == SystemKind::kModel) {
    std::vector<std::string> channels, episodes;
    std::vector<std::vector<CandidateMention>> cands;
    std::vector<std::vector<int>> labels;
    for (std::size_t ti : fold.train_indices) {
      const LabeledTranscript& lt = corpus[ti];
      channels.push_back(lt.transcript.channel_id);
      episodes.push_back(lt.transcript.episode_id);
      cands.push_back(scan(lt.transcript, g, thresholds));
      labels.push_back(label_candidates(lt.labels, cands.back()));
    }
    std::vector<int> inner = internal_fold_assignment(channels, episodes, 3);

    if (system == SystemKind::kBaseline3) {
      std::vector<ClosenessSample> samples;
      for (std::size_t k = 0; k < cands.size(); ++k) {
        const Transcript& t = corpus[fold.train_indices[k]].transcript;
        for (std::size_t ci = 0; ci < cands[k].size(); ++ci) {
          ClosenessStats cs =
              closeness_stats(t, cands[k][ci], g.resolve(cands[k][ci].film_id));
          samples.push_back({cs.mean, cs.min, cs.max, labels[k][ci], inner[k]});
        }
      }
      b3 = search_closeness_thresholds(samples, default_closeness_grid(), 3);
    } else {
      std::vector<LabeledFeatureGroup> groups;
      std::vector<FeatureVector> all_features;
      std::vector<int> all_labels;
      for (std::size_t k = 0; k < cands.size(); ++k) {
        const LabeledTranscript& lt = corpus[fold.train_indices[k]];
        LabeledFeatureGroup group;
        group.channel_id = lt.transcript.channel_id;
        group.episode_id = lt.transcript.episode_id;
        group.features = featurize(lt.transcript, cands[k], g, tagger);
        group.labels = labels[k];
        all_features.insert(all_features.end(), group.features.begin(),
                            group.features.end());
        all_labels.insert(all_labels.end(), labels[k].begin(),
                          labels[k].end());
        groups.push_back(std::move(group));
      }
      bool has_pos = false, has_neg = false;
      for (int y : all_labels) (y ? has_pos : has_neg) = true;
      if (all_labels.empty() || !has_neg) {
        model_accept_all = true;  // nothing (or nothing negative) to learn from
      } else if (!has_pos) {
        model_accept_all = false;  // reject everything
      } else {
        HyperParams hp =
            select_hyperparameters(groups, options.model_grid, options.seed);
        model = train(all_features, all_labels,
                      {hp.penalty, hp.strength, options.seed});
        model.decision_threshold = hp.decision_threshold;
        model_trained = true;
      }
    }
  }

  for (std::size_t ti : fold.test_indices) {
    const LabeledTranscript& lt = corpus[ti];
    std::vector<CandidateMention> cands = scan(lt.transcript, g, thresholds);
    std::vector<CandidateMention> accepted;
    switch (system) {
      case SystemKind::kBaseline1:
        accepted = cands;
        break;
      case SystemKind::kBaseline2: {
        std::vector<std::string> tags = transcript_tags(lt.transcript, tagger);
        for (const auto& c : cands) {
          bool all_nouns = true;
          for (std::size_t i = c.span_start; i < c.span_end; ++i)
            if (!noun_family(tags[i])) all_nouns = false;
          if (all_nouns) accepted.push_back(c);
        }
        break;
      }
      case SystemKind::kBaseline3:
        for (const auto& c : cands) {
          ClosenessStats cs =
              closeness_stats(lt.transcript, c, g.resolve(c.film_id));
          if (cs.mean >= b3.mean && cs.min >= b3.min && cs.max >= b3.max)
            accepted.push_back(c);
        }
        break;
      case SystemKind::kModel: {
        if (model_trained) {
          std::vector<FeatureVector> feats =
              featurize(lt.transcript, cands, g, tagger);
          for (std::size_t i = 0; i < cands.size(); ++i)
            if (predict_proba(model, feats[i]) >= model.decision_threshold)
              accepted.push_back(cands[i]);
        } else if (model_accept_all) {
          accepted = cands;
        }
        break;
      }
      case SystemKind::kGoldOracle:
        break;  // handled above
    }
    MatchCounts c = match_predictions(lt.labels, accepted);
    result.tp += c.tp;
    result.fp += c.fp;
    result.fn += c.fn;
  }
  fill_metrics(result);
  return result;
}

}  // namespace

EvalReport run_system(SystemKind system,
                      const std::vector<LabeledTranscript>& corpus,
                      const Gazetteer& g, const RunOptions& options) {
  std::size_t total_labels = 0;
  for (const auto& lt : corpus) total_labels += lt.labels.size();
  if (total_labels == 0)
    throw std::invalid_argument("run_system: corpus carries no gold labels");

  std::vector<LocoFold> folds = loco_folds(corpus);
  RuleBasedTagger tagger;
  std::vector<FoldResult> results(folds.size());
  parallel_for(folds.size(), options.jobs, [&](std::size_t fi) {
    results[fi] = evaluate_fold(system, corpus, g, folds[fi], options, tagger);
  });

  EvalReport report;
  report.system_name = system_name(system);
  report.per_fold = std::move(results);
  for (const auto& r : report.per_fold) {
    report.macro_precision += r.precision;
    report.macro_recall += r.recall;
    report.macro_f1 += r.f1;
  }
  const double n = static_cast<double>(report.per_fold.size());
  report.macro_precision /= n;
  report.macro_recall /= n;
  report.macro_f1 /= n;
  return report;
}

}  // namespace filmner
