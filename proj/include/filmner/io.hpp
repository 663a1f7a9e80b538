#ifndef FILMNER_IO_HPP
#define FILMNER_IO_HPP

#include <string>
#include <vector>

#include "filmner/corpus.hpp"
#include "filmner/eval.hpp"
#include "filmner/gazetteer.hpp"
#include "filmner/matcher.hpp"
#include "filmner/model.hpp"

// File formats. Structured data is line-delimited JSON; one record per line.
// Writers optionally prepend a {"_meta": ...} line carrying the config
// digest; readers skip it. Small single-object files (thresholds, model)
// carry the digest as a "_meta" key instead. All readers throw
// std::runtime_error with the offending path on missing or malformed input.

namespace filmner {

Gazetteer read_gazetteer(const std::string& path);
void write_gazetteer(const std::string& path, const Gazetteer& g,
                     const std::string& meta_digest = "");

// Corpus records: {channel_id, episode_id, tokens, sentence_breaks?,
// pos_tags?} or {channel_id, episode_id, text, pos_tags?} with text
// normalized at load.
std::vector<Transcript> read_transcripts(const std::string& path);
void write_transcripts(const std::string& path,
                       const std::vector<Transcript>& transcripts,
                       const std::string& meta_digest = "");

// Accepts either the record format above or a plain UTF-8 text file; a
// plain file becomes one transcript whose ids derive from the file name.
std::vector<Transcript> read_transcript_input(const std::string& path);

// Gold labels: {episode_id, film_id, span?: [start, end]}.
std::vector<GoldLabel> read_labels(const std::string& path);
void write_labels(const std::string& path,
                  const std::vector<GoldLabel>& labels,
                  const std::string& meta_digest = "");

// Joins transcripts with their labels by episode_id, preserving transcript
// order. Labels naming an unknown episode are an error.
std::vector<LabeledTranscript> attach_labels(
    const std::vector<Transcript>& transcripts,
    const std::vector<GoldLabel>& labels);

std::vector<CandidateMention> read_candidates(const std::string& path);
void write_candidates(const std::string& path,
                      const std::vector<CandidateMention>& candidates,
                      const std::string& meta_digest = "");

// Calibrated profile as a single JSON object {"1": t1, ..., "6": t6}.
ThresholdProfile read_thresholds(const std::string& path);
void write_thresholds(const std::string& path, const ThresholdProfile& profile,
                      const std::string& meta_digest = "");

// Complete model state; load + predict reproduces probabilities bit-exactly.
LinearModel read_model(const std::string& path);
void write_model(const std::string& path, const LinearModel& m,
                 const std::string& meta_digest = "");

// One record per fold plus an aggregate record.
void write_report(const std::string& path, const EvalReport& report,
                  const std::string& meta_digest = "");

// Fixed-width plain-text table of the same report.
std::string render_report(const EvalReport& report);

}  // namespace filmner

#endif
