// Tests for mention-level scoring, leave-one-channel-out fold construction,
// and the four decision systems plus the gold-echo sanity system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "filmner/eval.hpp"
#include "filmner/io.hpp"
#include "filmner/synth.hpp"

using namespace filmner;

namespace {

GoldLabel gold(std::string episode, std::string film,
               std::optional<std::pair<std::size_t, std::size_t>> span = {}) {
  GoldLabel g;
  g.episode_id = std::move(episode);
  g.film_id = std::move(film);
  if (span) {
    g.has_span = true;
    g.span_start = span->first;
    g.span_end = span->second;
  }
  return g;
}

CandidateMention cand(std::string episode, std::size_t start, std::size_t end,
                      std::string film) {
  CandidateMention c;
  c.episode_id = std::move(episode);
  c.span_start = start;
  c.span_end = end;
  c.n = end - start;
  c.film_id = std::move(film);
  return c;
}

Gazetteer eval_gazetteer() {
  auto film = [](std::string id, std::string title, double budget,
                 std::vector<std::string> keywords) {
    FilmRecord f;
    f.film_id = std::move(id);
    f.title = std::move(title);
    f.budget = budget;
    for (auto& kw : keywords) f.keywords.push_back({std::move(kw)});
    return f;
  };
  Gazetteer g;
  g.insert(film("f_godzilla", "Godzilla", 150e6, {"monster", "japan"}));
  g.insert(film("f_moonfall", "Moonfall", 140e6, {"disaster", "orbit"}));
  g.insert(film("f_coco", "Coco", 175e6, {"skeleton", "mexico"}));
  g.insert(film("f_paddington", "Paddington", 55e6, {"bear", "marmalade"}));
  g.insert(film("f_crimson", "Crimson Tide", 53e6, {"submarine", "mutiny"}));
  return g;
}

// The clean-corpus assertions below need filler text that can never spell a
// title or keyword by accident.
void require_vocab_disjoint(const Gazetteer& g, int vocab_size) {
  const auto& words = distractor_word_list();
  REQUIRE(vocab_size <= static_cast<int>(words.size()));
  std::set<std::string> vocab(words.begin(), words.begin() + vocab_size);
  for (const auto& f : g.records()) {
    for (const auto& tok : f.title_tokens) REQUIRE(vocab.count(tok) == 0);
    for (const auto& kw : f.keywords)
      for (const auto& tok : kw) REQUIRE(vocab.count(tok) == 0);
  }
}

std::vector<LabeledTranscript> synth_corpus(const Gazetteer& g,
                                            const CorruptionConfig& cfg) {
  SynthCorpus sc = generate_corpus(g, cfg);
  return attach_labels(sc.transcripts, sc.labels);
}

void check_report_shape(const EvalReport& r, std::size_t channels) {
  REQUIRE(r.per_fold.size() == channels);
  double psum = 0.0, rsum = 0.0, fsum = 0.0;
  for (std::size_t i = 0; i < r.per_fold.size(); ++i) {
    const FoldResult& f = r.per_fold[i];
    if (i > 0) CHECK(r.per_fold[i - 1].held_out_channel < f.held_out_channel);
    double p = (f.tp + f.fp) ? double(f.tp) / double(f.tp + f.fp) : 0.0;
    double rec = (f.tp + f.fn) ? double(f.tp) / double(f.tp + f.fn) : 0.0;
    CHECK(f.precision == doctest::Approx(p).epsilon(1e-12));
    CHECK(f.recall == doctest::Approx(rec).epsilon(1e-12));
    double h = (p + rec) > 0 ? 2 * p * rec / (p + rec) : 0.0;
    CHECK(f.f1 == doctest::Approx(h).epsilon(1e-12));
    CHECK(f.precision >= 0.0);
    CHECK(f.precision <= 1.0);
    CHECK(f.recall >= 0.0);
    CHECK(f.recall <= 1.0);
    psum += f.precision;
    rsum += f.recall;
    fsum += f.f1;
  }
  double n = double(r.per_fold.size());
  CHECK(r.macro_precision == doctest::Approx(psum / n).epsilon(1e-12));
  CHECK(r.macro_recall == doctest::Approx(rsum / n).epsilon(1e-12));
  CHECK(r.macro_f1 == doctest::Approx(fsum / n).epsilon(1e-12));
}

bool reports_identical(const EvalReport& a, const EvalReport& b) {
  if (a.system_name != b.system_name) return false;
  if (a.per_fold.size() != b.per_fold.size()) return false;
  for (std::size_t i = 0; i < a.per_fold.size(); ++i) {
    const FoldResult &x = a.per_fold[i], &y = b.per_fold[i];
    if (x.held_out_channel != y.held_out_channel || x.tp != y.tp ||
        x.fp != y.fp || x.fn != y.fn || x.precision != y.precision ||
        x.recall != y.recall || x.f1 != y.f1)
      return false;
  }
  return a.macro_precision == b.macro_precision &&
         a.macro_recall == b.macro_recall && a.macro_f1 == b.macro_f1;
}

}  // namespace

TEST_CASE("match_predictions with spans") {
  SUBCASE("identity match") {
    std::vector<GoldLabel> gs = {gold("e1", "a", {{2, 3}}),
                                 gold("e1", "b", {{5, 7}})};
    std::vector<CandidateMention> ps = {cand("e1", 2, 3, "a"),
                                        cand("e1", 5, 7, "b")};
    MatchCounts m = match_predictions(gs, ps);
    CHECK(m.tp == 2);
    CHECK(m.fp == 0);
    CHECK(m.fn == 0);
  }
  SUBCASE("empty predictions leave all gold unmatched") {
    std::vector<GoldLabel> gs = {gold("e1", "a", {{2, 3}}),
                                 gold("e1", "b", {{5, 7}})};
    MatchCounts m = match_predictions(gs, {});
    CHECK(m.tp == 0);
    CHECK(m.fp == 0);
    CHECK(m.fn == 2);
  }
  SUBCASE("empty gold makes every prediction false") {
    MatchCounts m = match_predictions({}, {cand("e1", 0, 1, "a")});
    CHECK(m.tp == 0);
    CHECK(m.fp == 1);
    CHECK(m.fn == 0);
  }
  SUBCASE("both empty") {
    MatchCounts m = match_predictions({}, {});
    CHECK(m.tp + m.fp + m.fn == 0);
  }
  SUBCASE("overlap with the right film counts, wrong film does not") {
    std::vector<GoldLabel> gs = {gold("e1", "a", {{3, 5}})};
    MatchCounts hit = match_predictions(gs, {cand("e1", 2, 4, "a")});
    CHECK(hit.tp == 1);
    CHECK(hit.fp == 0);
    CHECK(hit.fn == 0);
    MatchCounts wrong_film = match_predictions(gs, {cand("e1", 3, 5, "b")});
    CHECK(wrong_film.tp == 0);
    CHECK(wrong_film.fp == 1);
    CHECK(wrong_film.fn == 1);
    MatchCounts no_overlap = match_predictions(gs, {cand("e1", 5, 6, "a")});
    CHECK(no_overlap.tp == 0);
    CHECK(no_overlap.fp == 1);
    CHECK(no_overlap.fn == 1);
  }
  SUBCASE("each gold label is consumed at most once") {
    std::vector<GoldLabel> gs = {gold("e1", "a", {{3, 4}})};
    std::vector<CandidateMention> ps = {cand("e1", 2, 4, "a"),
                                        cand("e1", 3, 5, "a")};
    MatchCounts m = match_predictions(gs, ps);
    CHECK(m.tp == 1);
    CHECK(m.fp == 1);
    CHECK(m.fn == 0);
  }
  SUBCASE("mixed episodes are rejected") {
    std::vector<GoldLabel> gs = {gold("e1", "a", {{0, 1}})};
    CHECK_THROWS(match_predictions(gs, {cand("e2", 0, 1, "a")}));
    std::vector<GoldLabel> two_eps = {gold("e1", "a", {{0, 1}}),
                                      gold("e2", "a", {{0, 1}})};
    CHECK_THROWS(match_predictions(two_eps, {}));
  }
}

TEST_CASE("match_predictions without spans uses film_id multisets") {
  SUBCASE("gold film twice, predicted once") {
    std::vector<GoldLabel> gs = {gold("e1", "x"), gold("e1", "x")};
    MatchCounts m = match_predictions(gs, {cand("e1", 0, 1, "x")});
    CHECK(m.tp == 1);
    CHECK(m.fp == 0);
    CHECK(m.fn == 1);
  }
  SUBCASE("excess predictions become false positives") {
    std::vector<GoldLabel> gs = {gold("e1", "x")};
    std::vector<CandidateMention> ps = {cand("e1", 0, 1, "x"),
                                        cand("e1", 4, 5, "x"),
                                        cand("e1", 8, 9, "y")};
    MatchCounts m = match_predictions(gs, ps);
    CHECK(m.tp == 1);
    CHECK(m.fp == 2);
    CHECK(m.fn == 0);
  }
  SUBCASE("one spanless gold label turns off span matching for the episode") {
    // Prediction at a non-overlapping position still matches by film id.
    std::vector<GoldLabel> gs = {gold("e1", "x", {{10, 11}}), gold("e1", "y")};
    MatchCounts m = match_predictions(gs, {cand("e1", 0, 1, "x")});
    CHECK(m.tp == 1);
    CHECK(m.fn == 1);
  }
}

TEST_CASE("label_candidates aligns with match_predictions") {
  std::vector<GoldLabel> gs = {gold("e1", "x", {{3, 4}}),
                               gold("e1", "y", {{8, 10}})};
  std::vector<CandidateMention> cs = {
      cand("e1", 8, 9, "y"),   // overlaps the y gold
      cand("e1", 3, 4, "z"),   // wrong film
      cand("e1", 3, 4, "x"),   // exact match
      cand("e1", 0, 1, "x")};  // right film, wrong place
  std::vector<int> labels = label_candidates(gs, cs);
  REQUIRE(labels.size() == cs.size());
  CHECK(labels == std::vector<int>{1, 0, 1, 0});

  MatchCounts m = match_predictions(gs, cs);
  std::size_t ones = 0;
  for (int v : labels) ones += v;
  CHECK(ones == m.tp);

  SUBCASE("multiset mode labels the first occurrences") {
    std::vector<GoldLabel> no_span = {gold("e1", "x"), gold("e1", "x")};
    std::vector<CandidateMention> three = {cand("e1", 0, 1, "x"),
                                           cand("e1", 4, 5, "x"),
                                           cand("e1", 8, 9, "x")};
    CHECK(label_candidates(no_span, three) == std::vector<int>{1, 1, 0});
  }
}

TEST_CASE("loco_folds construction") {
  auto lt = [](std::string channel, std::string episode) {
    LabeledTranscript t;
    t.transcript.channel_id = std::move(channel);
    t.transcript.episode_id = std::move(episode);
    t.transcript.tokens = {"hello"};
    return t;
  };

  SUBCASE("one fold per channel, partitioning the corpus") {
    std::vector<LabeledTranscript> corpus;
    for (int c = 0; c < 9; ++c)
      for (int e = 0; e < 2; ++e)
        corpus.push_back(lt("ch" + std::to_string(c),
                            "ep" + std::to_string(c) + "_" + std::to_string(e)));
    auto folds = loco_folds(corpus);
    REQUIRE(folds.size() == 9);
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      if (i > 0) CHECK(folds[i - 1].channel_id < folds[i].channel_id);
      CHECK(folds[i].test_indices.size() == 2);
      CHECK(folds[i].train_indices.size() == corpus.size() - 2);
      for (std::size_t idx : folds[i].test_indices) {
        CHECK(corpus[idx].transcript.channel_id == folds[i].channel_id);
        CHECK(seen.insert(idx).second);  // exactly one test set per transcript
      }
      for (std::size_t idx : folds[i].train_indices)
        CHECK(corpus[idx].transcript.channel_id != folds[i].channel_id);
    }
    CHECK(seen.size() == corpus.size());
  }
  SUBCASE("two channels of one transcript each") {
    auto folds = loco_folds({lt("a", "e1"), lt("b", "e2")});
    REQUIRE(folds.size() == 2);
    CHECK(folds[0].train_indices.size() == 1);
    CHECK(folds[0].test_indices.size() == 1);
  }
  SUBCASE("input order does not change fold contents") {
    std::vector<LabeledTranscript> corpus = {lt("b", "e3"), lt("a", "e1"),
                                             lt("b", "e4"), lt("a", "e2")};
    std::vector<LabeledTranscript> shuffled = {corpus[3], corpus[0],
                                               corpus[2], corpus[1]};
    auto fa = loco_folds(corpus);
    auto fb = loco_folds(shuffled);
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) {
      CHECK(fa[i].channel_id == fb[i].channel_id);
      auto episodes = [](const std::vector<LabeledTranscript>& corp,
                         const std::vector<std::size_t>& idx) {
        std::set<std::string> out;
        for (std::size_t j : idx) out.insert(corp[j].transcript.episode_id);
        return out;
      };
      CHECK(episodes(corpus, fa[i].test_indices) ==
            episodes(shuffled, fb[i].test_indices));
      CHECK(episodes(corpus, fa[i].train_indices) ==
            episodes(shuffled, fb[i].train_indices));
    }
  }
  SUBCASE("a single channel is rejected") {
    CHECK_THROWS(loco_folds({lt("only", "e1"), lt("only", "e2")}));
  }
}

TEST_CASE("system names round-trip") {
  for (SystemKind s : {SystemKind::kModel, SystemKind::kBaseline1,
                       SystemKind::kBaseline2, SystemKind::kBaseline3,
                       SystemKind::kGoldOracle})
    CHECK(system_from_name(system_name(s)) == s);
  CHECK(system_name(SystemKind::kModel) == "model");
  CHECK(system_name(SystemKind::kGoldOracle) == "gold");
  CHECK_THROWS(system_from_name("baseline9"));
}

TEST_CASE("accept-all scores perfectly on an uncorrupted corpus") {
  Gazetteer g = eval_gazetteer();
  CorruptionConfig cfg;
  cfg.char_error_rate = 0.0;
  cfg.seed = 7;
  cfg.distractor_vocab_size = 120;
  cfg.channels = 3;
  cfg.transcripts_per_channel = 3;
  cfg.mentions_min = 1;
  cfg.mentions_max = 2;
  require_vocab_disjoint(g, cfg.distractor_vocab_size);

  auto corpus = synth_corpus(g, cfg);
  EvalReport r = run_system(SystemKind::kBaseline1, corpus, g);
  CHECK(r.system_name == "baseline1");
  check_report_shape(r, 3);
  for (const auto& f : r.per_fold) {
    CHECK(f.precision == 1.0);
    CHECK(f.recall == 1.0);
    CHECK(f.f1 == 1.0);
    CHECK(f.fp == 0);
    CHECK(f.fn == 0);
    CHECK(f.tp > 0);
  }
  CHECK(r.macro_f1 == 1.0);
}

TEST_CASE("gold echo attains perfect scores on a noisy corpus") {
  Gazetteer g = eval_gazetteer();
  CorruptionConfig cfg;
  cfg.char_error_rate = 0.15;
  cfg.seed = 21;
  cfg.distractor_vocab_size = 120;
  cfg.channels = 3;
  cfg.transcripts_per_channel = 2;
  cfg.near_miss_per_transcript = 1;

  auto corpus = synth_corpus(g, cfg);
  EvalReport r = run_system(SystemKind::kGoldOracle, corpus, g);
  check_report_shape(r, 3);
  for (const auto& f : r.per_fold) {
    CHECK(f.precision == 1.0);
    CHECK(f.recall == 1.0);
    CHECK(f.f1 == 1.0);
  }
}

TEST_CASE("classifier and closeness filters beat accept-all on hard negatives") {
  Gazetteer g = eval_gazetteer();
  CorruptionConfig cfg;
  cfg.char_error_rate = 0.1;
  cfg.seed = 42;
  cfg.distractor_vocab_size = 120;
  cfg.channels = 4;
  cfg.transcripts_per_channel = 3;
  cfg.mentions_min = 1;
  cfg.mentions_max = 2;
  cfg.keyword_fraction = 0.8;
  cfg.near_miss_per_transcript = 2;  // unlabeled title copies, no keywords

  auto corpus = synth_corpus(g, cfg);
  EvalReport b1 = run_system(SystemKind::kBaseline1, corpus, g);
  EvalReport b2 = run_system(SystemKind::kBaseline2, corpus, g);
  EvalReport b3 = run_system(SystemKind::kBaseline3, corpus, g);
  EvalReport model = run_system(SystemKind::kModel, corpus, g);

  check_report_shape(b1, 4);
  check_report_shape(b2, 4);
  check_report_shape(b3, 4);
  check_report_shape(model, 4);

  // The salted negatives cap accept-all precision; systems that look at
  // keyword closeness or the classifier filter them out.
  CHECK(b1.macro_precision < 1.0);
  CHECK(model.macro_precision > b1.macro_precision);
  CHECK(b3.macro_precision > b1.macro_precision);

  // Filtering can only drop candidates, so accept-all recall dominates.
  CHECK(b1.macro_recall >= model.macro_recall - 1e-12);
  CHECK(b1.macro_recall >= b2.macro_recall - 1e-12);
  CHECK(b1.macro_recall >= b3.macro_recall - 1e-12);
}

TEST_CASE("run_system is deterministic and job-count independent") {
  Gazetteer g = eval_gazetteer();
  CorruptionConfig cfg;
  cfg.char_error_rate = 0.1;
  cfg.seed = 5;
  cfg.distractor_vocab_size = 120;
  cfg.channels = 3;
  cfg.transcripts_per_channel = 2;
  cfg.near_miss_per_transcript = 1;

  auto corpus = synth_corpus(g, cfg);
  RunOptions serial;
  serial.jobs = 1;
  RunOptions parallel;
  parallel.jobs = 3;
  EvalReport a = run_system(SystemKind::kModel, corpus, g, serial);
  EvalReport b = run_system(SystemKind::kModel, corpus, g, parallel);
  CHECK(reports_identical(a, b));

  EvalReport c = run_system(SystemKind::kModel, corpus, g, serial);
  CHECK(reports_identical(a, c));
}

TEST_CASE("run_system honors fixed matcher thresholds") {
  Gazetteer g = eval_gazetteer();
  CorruptionConfig cfg;
  cfg.char_error_rate = 0.0;
  cfg.seed = 3;
  cfg.distractor_vocab_size = 120;
  cfg.channels = 2;
  cfg.transcripts_per_channel = 2;

  auto corpus = synth_corpus(g, cfg);
  RunOptions opt;
  opt.fixed_thresholds = ThresholdProfile::uniform(0.0);
  EvalReport r = run_system(SystemKind::kBaseline1, corpus, g, opt);
  check_report_shape(r, 2);
  for (const auto& f : r.per_fold) CHECK(f.f1 == 1.0);  // exact matching suffices

  EvalReport again = run_system(SystemKind::kBaseline1, corpus, g, opt);
  CHECK(reports_identical(r, again));
}

TEST_CASE("run_system rejects an unlabeled corpus") {
  Gazetteer g = eval_gazetteer();
  std::vector<LabeledTranscript> corpus;
  for (int c = 0; c < 2; ++c) {
    LabeledTranscript t;
    t.transcript.channel_id = "c" + std::to_string(c);
    t.transcript.episode_id = "e" + std::to_string(c);
    t.transcript.tokens = {"nothing", "here"};
    corpus.push_back(t);
  }
  CHECK_THROWS(run_system(SystemKind::kBaseline1, corpus, g));
}

TEST_CASE("report serialization carries folds, aggregate, and digest") {
  EvalReport r;
  r.system_name = "baseline1";
  FoldResult f1;
  f1.held_out_channel = "c1";
  f1.tp = 3;
  f1.fp = 1;
  f1.fn = 1;
  f1.precision = 0.75;
  f1.recall = 0.75;
  f1.f1 = 0.75;
  FoldResult f2;
  f2.held_out_channel = "c2";
  f2.tp = 2;
  f2.fp = 0;
  f2.fn = 0;
  f2.precision = 1.0;
  f2.recall = 1.0;
  f2.f1 = 1.0;
  r.per_fold = {f1, f2};
  r.macro_precision = 0.875;
  r.macro_recall = 0.875;
  r.macro_f1 = 0.875;

  auto dir = std::filesystem::temp_directory_path() / "filmner_report_rt";
  std::filesystem::create_directories(dir);
  auto path = (dir / "report.jsonl").string();
  write_report(path, r, "cafef00d");

  std::ifstream in(path);
  std::string line;
  std::vector<nlohmann::json> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  REQUIRE(rows.size() == 4);  // meta + 2 folds + aggregate
  CHECK(rows[0].at("_meta").at("config_digest") == "cafef00d");
  CHECK(rows[1].at("channel") == "c1");
  CHECK(rows[1].at("tp") == 3);
  CHECK(rows[1].at("system") == "baseline1");
  CHECK(rows[2].at("channel") == "c2");
  CHECK(rows[3].at("aggregate") == true);
  CHECK(rows[3].at("macro_precision") == doctest::Approx(0.875));

  std::string table = render_report(r);
  CHECK(table.find("baseline1") != std::string::npos);
  CHECK(table.find("c1") != std::string::npos);
  CHECK(table.find("c2") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') >= 4);

  std::filesystem::remove_all(dir);
}
