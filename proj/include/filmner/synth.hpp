#ifndef FILMNER_SYNTH_HPP
#define FILMNER_SYNTH_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "filmner/corpus.hpp"
#include "filmner/gazetteer.hpp"

namespace filmner {

// Knobs for the synthetic corpus generator. Counts are positive; rates live
// in [0,1]. validate() throws std::invalid_argument otherwise.
struct CorruptionConfig {
  double char_error_rate = 0.0;
  std::uint64_t seed = 0;
  int distractor_vocab_size = 200;
  int mentions_min = 1;
  int mentions_max = 3;
  int transcripts_per_channel = 4;
  int channels = 3;

  // Fraction of mentions that get one of the film's keywords placed within a
  // 10-token window of the span.
  double keyword_fraction = 0.7;

  // Hard negatives: per transcript, this many corrupted title copies are
  // embedded with no keyword support and no gold label. Sources are drawn
  // from films not truly mentioned in the same transcript when possible.
  int near_miss_per_transcript = 0;
  double near_miss_error_rate = 0.0;

  // Filler block length range (tokens) between structural elements.
  int filler_min = 4;
  int filler_max = 9;

  void validate() const;
};

// Character-level edit accounting, split by whether the edit landed on a
// true mention or on a near-miss distractor.
struct CorruptionStats {
  std::size_t mention_title_chars = 0;
  std::size_t mention_edits = 0;
  std::size_t distractor_title_chars = 0;
  std::size_t distractor_edits = 0;

  double corruption_fraction() const {
    return mention_title_chars == 0
               ? 0.0
               : static_cast<double>(mention_edits) / mention_title_chars;
  }
};

struct SynthCorpus {
  std::vector<Transcript> transcripts;
  std::vector<GoldLabel> labels;
  CorruptionStats stats;
};

// Builds channels x transcripts_per_channel transcripts of seeded filler
// text with embedded film mentions. Each mention's title is corrupted
// character-wise (substitute/insert/delete, uniform over ops) at
// char_error_rate and re-tokenized on whitespace, so token merges and splits
// occur. Gold labels carry exact spans. Transcript i depends only on
// mix_seed(cfg.seed, i), so identical inputs give byte-identical corpora.
// Throws std::invalid_argument on an empty gazetteer or a bad config.
SynthCorpus generate_corpus(const Gazetteer& g, const CorruptionConfig& cfg);

// Applies character edits to text at the given per-character rate and
// reports how many were applied. Substitutions always change the character.
std::string corrupt_text(const std::string& text, double rate,
                         std::mt19937_64& rng, std::size_t* edits = nullptr);

// Word error rate of embedded mention spans against their source titles:
// sum of token edit distances over the sum of source title lengths.
double mention_token_wer(const SynthCorpus& corpus, const Gazetteer& g);

// Fixed filler word list the generator draws from.
const std::vector<std::string>& distractor_word_list();

}  // namespace filmner

#endif
