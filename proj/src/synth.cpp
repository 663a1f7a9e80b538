#include "filmner/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "filmner/pos_tagger.hpp"
#include "filmner/util.hpp"

namespace filmner {

namespace {

constexpr const char* kAlphabet = "abcdefghijklmnopqrstuvwxyz ";
constexpr std::size_t kAlphabetSize = 27;

// Uniform helpers built directly on mt19937_64 output so corpora are
// bit-identical across standard library implementations.
double rand_u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

char random_substitute(char original, std::mt19937_64& rng) {
  int options = 0;
  for (std::size_t i = 0; i < kAlphabetSize; ++i)
    if (kAlphabet[i] != original) ++options;
  int k = rand_int(rng, 0, options - 1);
  for (std::size_t i = 0; i < kAlphabetSize; ++i) {
    if (kAlphabet[i] == original) continue;
    if (k-- == 0) return kAlphabet[i];
  }
  return kAlphabet[0];  // unreachable
}

std::vector<std::string> split_whitespace(const std::string& text) {
  std::vector<std::string> out;
  std::string word;
  for (char c : text) {
    if (c == ' ') {
      if (!word.empty()) out.push_back(word);
      word.clear();
    } else {
      word.push_back(c);
    }
  }
  if (!word.empty()) out.push_back(word);
  return out;
}

std::string format_id(const char* prefix, int value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03d", prefix, value);
  return buf;
}

std::vector<std::string> build_vocab(int size) {
  const auto& base = distractor_word_list();
  std::vector<std::string> vocab;
  vocab.reserve(size);
  for (int i = 0; i < size; ++i) {
    if (i < static_cast<int>(base.size())) {
      vocab.push_back(base[i]);
    } else {
      // Past the shipped list, combine two base words deterministically.
      const std::string& a = base[i % base.size()];
      const std::string& b = base[(i * 7 + 3) % base.size()];
      vocab.push_back(a + b);
    }
  }
  return vocab;
}

struct Unit {
  bool is_mention = false;
  std::size_t film_index = 0;
};

}  // namespace

void CorruptionConfig::validate() const {
  if (char_error_rate < 0.0 || char_error_rate > 1.0)
    throw std::invalid_argument("char_error_rate must be in [0,1]");
  if (near_miss_error_rate < 0.0 || near_miss_error_rate > 1.0)
    throw std::invalid_argument("near_miss_error_rate must be in [0,1]");
  if (keyword_fraction < 0.0 || keyword_fraction > 1.0)
    throw std::invalid_argument("keyword_fraction must be in [0,1]");
  if (distractor_vocab_size < 1)
    throw std::invalid_argument("distractor_vocab_size must be positive");
  if (mentions_min < 1 || mentions_max < mentions_min)
    throw std::invalid_argument("mentions range must satisfy 1 <= min <= max");
  if (transcripts_per_channel < 1 || channels < 1)
    throw std::invalid_argument("transcript and channel counts must be positive");
  if (near_miss_per_transcript < 0)
    throw std::invalid_argument("near_miss_per_transcript must be >= 0");
  if (filler_min < 1 || filler_max < filler_min)
    throw std::invalid_argument("filler range must satisfy 1 <= min <= max");
}

std::string corrupt_text(const std::string& text, double rate,
                         std::mt19937_64& rng, std::size_t* edits) {
  std::string out;
  out.reserve(text.size() + 4);
  for (char c : text) {
    if (rate > 0.0 && rand_u01(rng) < rate) {
      switch (rand_int(rng, 0, 2)) {
        case 0:  // substitute
          out.push_back(random_substitute(c, rng));
          break;
        case 1:  // insert before, keep original
          out.push_back(
              kAlphabet[rand_int(rng, 0, static_cast<int>(kAlphabetSize) - 1)]);
          out.push_back(c);
          break;
        default:  // delete
          break;
      }
      if (edits) ++*edits;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

SynthCorpus generate_corpus(const Gazetteer& g, const CorruptionConfig& cfg) {
  cfg.validate();
  if (g.empty())
    throw std::invalid_argument("generate_corpus: empty gazetteer");

  const std::vector<std::string> vocab = build_vocab(cfg.distractor_vocab_size);
  const RuleBasedTagger tagger;
  const int total = cfg.channels * cfg.transcripts_per_channel;

  SynthCorpus corpus;
  corpus.transcripts.resize(total);
  std::vector<std::vector<GoldLabel>> per_transcript_labels(total);

  for (int idx = 0; idx < total; ++idx) {
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
    Transcript& t = corpus.transcripts[idx];
    t.channel_id = format_id("c", idx / cfg.transcripts_per_channel + 1);
    t.episode_id =
        t.channel_id + "-" +
        format_id("e", idx % cfg.transcripts_per_channel + 1);

    // Pick mention films, then distractor sources from the remaining films
    // so a near-miss span never shadows a true mention of the same film.
    const int n_mentions = rand_int(rng, cfg.mentions_min, cfg.mentions_max);
    std::vector<Unit> units;
    std::set<std::size_t> mentioned;
    for (int m = 0; m < n_mentions; ++m) {
      std::size_t fi = static_cast<std::size_t>(
          rand_int(rng, 0, static_cast<int>(g.size()) - 1));
      units.push_back({true, fi});
      mentioned.insert(fi);
    }
    std::vector<std::size_t> salt_pool;
    for (std::size_t fi = 0; fi < g.size(); ++fi)
      if (!mentioned.count(fi)) salt_pool.push_back(fi);
    if (salt_pool.empty())
      for (std::size_t fi = 0; fi < g.size(); ++fi) salt_pool.push_back(fi);
    for (int s = 0; s < cfg.near_miss_per_transcript; ++s) {
      std::size_t fi = salt_pool[static_cast<std::size_t>(
          rand_int(rng, 0, static_cast<int>(salt_pool.size()) - 1))];
      units.push_back({false, fi});
    }
    for (std::size_t i = units.size(); i > 1; --i)
      std::swap(units[i - 1],
                units[static_cast<std::size_t>(
                    rand_int(rng, 0, static_cast<int>(i) - 1))]);

    auto append_filler = [&](int count) {
      for (int i = 0; i < count; ++i)
        t.tokens.push_back(vocab[static_cast<std::size_t>(
            rand_int(rng, 0, static_cast<int>(vocab.size()) - 1))]);
    };
    auto append_break = [&] {
      if (t.tokens.empty()) return;
      std::size_t at = t.tokens.size() - 1;
      if (t.sentence_breaks.empty() || t.sentence_breaks.back() < at)
        t.sentence_breaks.push_back(at);
    };
    auto append_span = [&](const std::string& joined, double rate,
                           std::size_t* chars, std::size_t* edits)
        -> std::pair<std::size_t, std::size_t> {
      *chars += joined.size();
      std::vector<std::string> span_tokens =
          split_whitespace(corrupt_text(joined, rate, rng, edits));
      if (span_tokens.empty())  // corruption erased everything; keep a stub
        span_tokens.push_back(std::string(1, kAlphabet[rand_int(rng, 0, 25)]));
      std::size_t start = t.tokens.size();
      for (auto& tok : span_tokens) t.tokens.push_back(std::move(tok));
      return {start, t.tokens.size()};
    };

    for (const Unit& unit : units) {
      append_filler(rand_int(rng, cfg.filler_min, cfg.filler_max));
      const FilmRecord& film = g.records()[unit.film_index];
      if (unit.is_mention) {
        bool supported = !film.keywords.empty() &&
                         rand_u01(rng) < cfg.keyword_fraction;
        const std::vector<std::string>* keyword = nullptr;
        bool before = false;
        if (supported) {
          keyword = &film.keywords[static_cast<std::size_t>(rand_int(
              rng, 0, static_cast<int>(film.keywords.size()) - 1))];
          before = rand_u01(rng) < 0.5;
          if (before) {
            for (const auto& w : *keyword) t.tokens.push_back(w);
            append_filler(rand_int(rng, 0, 3));
          }
        }
        auto [start, end] =
            append_span(film.title_joined, cfg.char_error_rate,
                        &corpus.stats.mention_title_chars,
                        &corpus.stats.mention_edits);
        per_transcript_labels[idx].push_back(
            {t.episode_id, film.film_id, true, start, end});
        if (supported && !before) {
          append_filler(rand_int(rng, 0, 3));
          for (const auto& w : *keyword) t.tokens.push_back(w);
        }
      } else {
        append_span(film.title_joined, cfg.near_miss_error_rate,
                    &corpus.stats.distractor_title_chars,
                    &corpus.stats.distractor_edits);
      }
      if (rand_u01(rng) < 0.6) append_break();
    }
    append_filler(rand_int(rng, cfg.filler_min, cfg.filler_max));
    append_break();

    t.pos_tags = tagger.tag(t.tokens);
    t.validate();
  }

  for (auto& labels : per_transcript_labels)
    for (auto& label : labels) corpus.labels.push_back(std::move(label));
  return corpus;
}

double mention_token_wer(const SynthCorpus& corpus, const Gazetteer& g) {
  std::unordered_map<std::string, const Transcript*> by_episode;
  for (const auto& t : corpus.transcripts) by_episode[t.episode_id] = &t;

  std::size_t errors = 0, ref_tokens = 0;
  for (const auto& label : corpus.labels) {
    if (!label.has_span) continue;
    auto it = by_episode.find(label.episode_id);
    if (it == by_episode.end())
      throw std::invalid_argument("mention_token_wer: unknown episode " +
                                  label.episode_id);
    const auto& ref = g.resolve(label.film_id).title_tokens;
    std::vector<std::string> hyp(
        it->second->tokens.begin() + label.span_start,
        it->second->tokens.begin() + label.span_end);
    errors += token_edit_distance(ref, hyp);
    ref_tokens += ref.size();
  }
  return ref_tokens == 0 ? 0.0
                         : static_cast<double>(errors) / ref_tokens;
}

const std::vector<std::string>& distractor_word_list() {
  static const std::vector<std::string> kWords = {
      "about",    "after",    "again",    "almost",   "along",    "already",
      "always",   "another",  "answer",   "anything", "around",   "because",
      "become",   "before",   "begin",    "behind",   "believe",  "better",
      "between",  "bring",    "called",   "certain",  "change",   "chapter",
      "check",    "coming",   "common",   "company",  "consider", "course",
      "covered",  "decided",  "different", "direct",  "during",   "early",
      "enough",   "episode",  "evening",  "every",    "example",  "expect",
      "explain",  "family",   "feeling",  "figure",   "finally",  "follow",
      "friend",   "further",  "getting",  "giving",   "ground",   "happen",
      "having",   "heard",    "helping",  "honestly", "however",  "idea",
      "imagine",  "important", "indeed",  "instead",  "interest", "keeping",
      "kind",     "later",    "learn",    "least",    "leave",    "letter",
      "listen",   "little",   "living",   "longer",   "looking",  "making",
      "matter",   "maybe",    "meaning",  "measure",  "middle",   "might",
      "moment",   "morning",  "mostly",   "moving",   "needed",   "never",
      "notice",   "number",   "obviously", "offer",   "often",    "opinion",
      "order",    "other",    "people",   "perhaps",  "person",   "picture",
      "piece",    "place",    "played",   "point",    "possible", "pretty",
      "probably", "problem",  "process",  "public",   "question", "quite",
      "rather",   "reading",  "really",   "reason",   "recent",   "record",
      "remember", "right",    "saying",   "second",   "seemed",   "sense",
      "several",  "should",   "simple",   "since",    "single",   "small",
      "someone",  "something", "sometimes", "sound",  "speak",    "special",
      "spent",    "start",    "state",    "still",    "story",    "strong",
      "stuff",    "subject",  "sudden",   "surely",   "taken",    "talking",
      "telling",  "thanks",   "their",    "theme",    "there",    "these",
      "thing",    "think",    "those",    "though",   "thought",  "through",
      "today",    "together", "told",     "topic",    "toward",   "trying",
      "turned",   "under",    "understand", "until",  "usual",    "value",
      "various",  "wanted",   "watching", "weekend",  "welcome",  "whatever",
      "where",    "whether",  "which",    "while",    "whole",    "without",
      "wonder",   "working",  "world",    "would",    "writing",  "years",
  };
  return kWords;
}

}  // namespace filmner
