// Command-line front end: normalize raw text, calibrate and run the matcher,
// train and evaluate the classifier, and generate synthetic corpora. Every
// command is a pure function of its flags and seed; structured outputs embed
// a digest of that configuration.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "filmner/corpus.hpp"
#include "filmner/eval.hpp"
#include "filmner/features.hpp"
#include "filmner/gazetteer.hpp"
#include "filmner/io.hpp"
#include "filmner/matcher.hpp"
#include "filmner/model.hpp"
#include "filmner/pos_tagger.hpp"
#include "filmner/synth.hpp"
#include "filmner/util.hpp"

namespace {

using namespace filmner;
using nlohmann::json;

std::string config_digest(const json& config) {
  return hex64(fnv1a64(config.dump()));
}

ThresholdProfile thresholds_for(const std::string& thresholds_path,
                                const std::string& labels_path,
                                const std::vector<Transcript>& transcripts,
                                const Gazetteer& g) {
  if (!thresholds_path.empty()) return read_thresholds(thresholds_path);
  if (labels_path.empty())
    throw std::runtime_error(
        "need either --thresholds or --labels to obtain a threshold profile");
  std::vector<LabeledTranscript> training =
      attach_labels(transcripts, read_labels(labels_path));
  return calibrate_thresholds(training, g, default_threshold_grid());
}

int cmd_normalize(const std::string& input, const std::string& output) {
  std::vector<Transcript> transcripts = read_transcript_input(input);
  json config = {{"command", "normalize"}, {"input", input}};
  write_transcripts(output, transcripts, config_digest(config));
  std::size_t tokens = 0;
  for (const auto& t : transcripts) tokens += t.tokens.size();
  std::cout << transcripts.size() << " transcript(s), " << tokens
            << " token(s) written to " << output << "\n";
  return 0;
}

int cmd_match(const std::string& gazetteer_path,
              const std::string& transcripts_path,
              const std::string& thresholds_path,
              const std::string& labels_path,
              const std::string& save_thresholds_path,
              const std::string& output) {
  Gazetteer g = read_gazetteer(gazetteer_path);
  std::vector<Transcript> transcripts = read_transcripts(transcripts_path);
  ThresholdProfile profile =
      thresholds_for(thresholds_path, labels_path, transcripts, g);

  json config = {{"command", "match"},
                 {"gazetteer", gazetteer_path},
                 {"transcripts", transcripts_path},
                 {"thresholds", json(profile.values())}};
  const std::string digest = config_digest(config);

  if (!save_thresholds_path.empty())
    write_thresholds(save_thresholds_path, profile, digest);

  std::vector<CandidateMention> all;
  for (const Transcript& t : transcripts) {
    std::vector<CandidateMention> cands = scan(t, g, profile);
    all.insert(all.end(), cands.begin(), cands.end());
  }
  write_candidates(output, all, digest);
  std::cout << all.size() << " candidate(s) written to " << output << "\n";
  return 0;
}

int cmd_train(const std::string& gazetteer_path,
              const std::string& transcripts_path,
              const std::string& labels_path,
              const std::string& thresholds_path,
              const std::string& save_thresholds_path,
              const std::string& model_out, std::uint64_t seed) {
  Gazetteer g = read_gazetteer(gazetteer_path);
  std::vector<Transcript> transcripts = read_transcripts(transcripts_path);
  std::vector<LabeledTranscript> corpus =
      attach_labels(transcripts, read_labels(labels_path));
  std::size_t total_labels = 0;
  for (const auto& lt : corpus) total_labels += lt.labels.size();
  if (total_labels == 0)
    throw std::runtime_error("training corpus carries no gold labels");

  ThresholdProfile profile =
      thresholds_path.empty()
          ? calibrate_thresholds(corpus, g, default_threshold_grid())
          : read_thresholds(thresholds_path);

  RuleBasedTagger tagger;
  std::vector<LabeledFeatureGroup> groups;
  std::vector<FeatureVector> all_features;
  std::vector<int> all_labels;
  for (const LabeledTranscript& lt : corpus) {
    std::vector<CandidateMention> cands = scan(lt.transcript, g, profile);
    LabeledFeatureGroup group;
    group.channel_id = lt.transcript.channel_id;
    group.episode_id = lt.transcript.episode_id;
    group.features = featurize(lt.transcript, cands, g, tagger);
    group.labels = label_candidates(lt.labels, cands);
    all_features.insert(all_features.end(), group.features.begin(),
                        group.features.end());
    all_labels.insert(all_labels.end(), group.labels.begin(),
                      group.labels.end());
    groups.push_back(std::move(group));
  }
  bool has_pos = false, has_neg = false;
  for (int y : all_labels) (y ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::runtime_error(
        "training candidates are single-class; cannot fit a classifier");

  HyperParams hp = select_hyperparameters(groups, default_model_grid(), seed);
  LinearModel model =
      train(all_features, all_labels, {hp.penalty, hp.strength, seed});
  model.decision_threshold = hp.decision_threshold;

  json config = {{"command", "train"},
                 {"gazetteer", gazetteer_path},
                 {"transcripts", transcripts_path},
                 {"labels", labels_path},
                 {"thresholds", json(profile.values())},
                 {"seed", seed}};
  const std::string digest = config_digest(config);
  if (!save_thresholds_path.empty())
    write_thresholds(save_thresholds_path, profile, digest);
  write_model(model_out, model, digest);
  std::cout << "model (" << penalty_name(model.penalty)
            << ", strength=" << model.strength
            << ", threshold=" << model.decision_threshold << ") written to "
            << model_out << "\n";
  return 0;
}

int cmd_evaluate(const std::string& gazetteer_path,
                 const std::string& transcripts_path,
                 const std::string& labels_path, const std::string& system,
                 const std::string& thresholds_path,
                 const std::string& report_out, const std::string& table_out,
                 std::uint64_t seed, int jobs) {
  Gazetteer g = read_gazetteer(gazetteer_path);
  std::vector<LabeledTranscript> corpus = attach_labels(
      read_transcripts(transcripts_path), read_labels(labels_path));

  RunOptions options;
  options.seed = seed;
  options.jobs = jobs;
  if (!thresholds_path.empty())
    options.fixed_thresholds = read_thresholds(thresholds_path);

  EvalReport report = run_system(system_from_name(system), corpus, g, options);

  json config = {{"command", "evaluate"},
                 {"gazetteer", gazetteer_path},
                 {"transcripts", transcripts_path},
                 {"labels", labels_path},
                 {"system", system},
                 {"seed", seed}};
  if (options.fixed_thresholds)
    config["thresholds"] = json(options.fixed_thresholds->values());
  const std::string digest = config_digest(config);

  write_report(report_out, report, digest);
  const std::string table = render_report(report);
  if (!table_out.empty()) {
    std::ofstream out(table_out);
    if (!out) throw std::runtime_error("cannot write " + table_out);
    out << table;
  }
  std::cout << table;
  return 0;
}

int cmd_generate(const std::string& gazetteer_path, const CorruptionConfig& cfg,
                 const std::string& transcripts_out,
                 const std::string& labels_out) {
  Gazetteer g = read_gazetteer(gazetteer_path);
  SynthCorpus corpus = generate_corpus(g, cfg);

  json config = {{"command", "generate"},
                 {"gazetteer", gazetteer_path},
                 {"char_error_rate", cfg.char_error_rate},
                 {"seed", cfg.seed},
                 {"distractor_vocab_size", cfg.distractor_vocab_size},
                 {"mentions_min", cfg.mentions_min},
                 {"mentions_max", cfg.mentions_max},
                 {"transcripts_per_channel", cfg.transcripts_per_channel},
                 {"channels", cfg.channels},
                 {"keyword_fraction", cfg.keyword_fraction},
                 {"near_miss_per_transcript", cfg.near_miss_per_transcript},
                 {"near_miss_error_rate", cfg.near_miss_error_rate},
                 {"filler_min", cfg.filler_min},
                 {"filler_max", cfg.filler_max}};
  const std::string digest = config_digest(config);

  write_transcripts(transcripts_out, corpus.transcripts, digest);
  write_labels(labels_out, corpus.labels, digest);
  std::cout << corpus.transcripts.size() << " transcript(s), "
            << corpus.labels.size() << " mention(s); corruption fraction "
            << corpus.stats.corruption_fraction() << ", mention WER "
            << mention_token_wer(corpus, g) << "\n";
  return 0;
}

int cmd_features(const std::string& gazetteer_path,
                 const std::string& transcripts_path,
                 const std::string& thresholds_path,
                 const std::string& labels_path, const std::string& output) {
  Gazetteer g = read_gazetteer(gazetteer_path);
  std::vector<Transcript> transcripts = read_transcripts(transcripts_path);
  ThresholdProfile profile =
      thresholds_for(thresholds_path, labels_path, transcripts, g);

  RuleBasedTagger tagger;
  std::vector<FeatureRow> rows;
  for (const Transcript& t : transcripts) {
    std::vector<CandidateMention> cands = scan(t, g, profile);
    std::vector<FeatureVector> feats = featurize(t, cands, g, tagger);
    for (std::size_t i = 0; i < cands.size(); ++i)
      rows.push_back({cands[i], feats[i]});
  }
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write " + output);
  write_feature_csv(out, rows);
  std::cout << rows.size() << " feature row(s) written to " << output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Film mention recognition over noisy podcast transcripts"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file");

  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker thread cap")->check(CLI::PositiveNumber);

  std::string gazetteer, transcripts, labels, thresholds, save_thresholds;
  std::string input, output, model_out, report_out, table_out, system = "model";
  std::uint64_t seed = 0;

  CLI::App* normalize =
      app.add_subcommand("normalize", "Normalize raw text into transcripts");
  normalize->add_option("--input", input, "Raw text or transcript records")
      ->required();
  normalize->add_option("--output", output, "Transcript records out")
      ->required();

  CLI::App* match =
      app.add_subcommand("match", "Emit fuzzy gazetteer candidates");
  match->add_option("--gazetteer", gazetteer)->required();
  match->add_option("--transcripts", transcripts)->required();
  match->add_option("--thresholds", thresholds, "Calibrated profile file");
  match->add_option("--labels", labels, "Gold labels for calibration");
  match->add_option("--save-thresholds", save_thresholds);
  match->add_option("--output", output)->required();

  CLI::App* train = app.add_subcommand("train", "Fit the mention classifier");
  train->add_option("--gazetteer", gazetteer)->required();
  train->add_option("--transcripts", transcripts)->required();
  train->add_option("--labels", labels)->required();
  train->add_option("--thresholds", thresholds);
  train->add_option("--save-thresholds", save_thresholds);
  train->add_option("--model-out", model_out)->required();
  train->add_option("--seed", seed);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "LOCO-evaluate a system");
  evaluate->add_option("--gazetteer", gazetteer)->required();
  evaluate->add_option("--transcripts", transcripts)->required();
  evaluate->add_option("--labels", labels)->required();
  evaluate->add_option("--system", system,
                       "model|baseline1|baseline2|baseline3|gold");
  evaluate->add_option("--thresholds", thresholds);
  evaluate->add_option("--report-out", report_out)->required();
  evaluate->add_option("--table-out", table_out);
  evaluate->add_option("--seed", seed);

  CorruptionConfig cfg;
  std::string labels_out;
  CLI::App* generate =
      app.add_subcommand("generate", "Generate a synthetic labeled corpus");
  generate->add_option("--gazetteer", gazetteer)->required();
  generate->add_option("--char-error-rate", cfg.char_error_rate);
  generate->add_option("--seed", cfg.seed);
  generate->add_option("--distractor-vocab-size", cfg.distractor_vocab_size);
  generate->add_option("--mentions-min", cfg.mentions_min);
  generate->add_option("--mentions-max", cfg.mentions_max);
  generate->add_option("--transcripts-per-channel", cfg.transcripts_per_channel);
  generate->add_option("--channels", cfg.channels);
  generate->add_option("--keyword-fraction", cfg.keyword_fraction);
  generate->add_option("--near-miss-per-transcript",
                       cfg.near_miss_per_transcript);
  generate->add_option("--near-miss-error-rate", cfg.near_miss_error_rate);
  generate->add_option("--filler-min", cfg.filler_min);
  generate->add_option("--filler-max", cfg.filler_max);
  generate->add_option("--output-transcripts", output)->required();
  generate->add_option("--output-labels", labels_out)->required();

  CLI::App* features =
      app.add_subcommand("features", "Export candidate feature rows as CSV");
  features->add_option("--gazetteer", gazetteer)->required();
  features->add_option("--transcripts", transcripts)->required();
  features->add_option("--thresholds", thresholds);
  features->add_option("--labels", labels);
  features->add_option("--output", output)->required();

  // Let global options such as --jobs appear after the subcommand name too.
  for (CLI::App* sub : {normalize, match, train, evaluate, generate, features})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (normalize->parsed()) return cmd_normalize(input, output);
    if (match->parsed())
      return cmd_match(gazetteer, transcripts, thresholds, labels,
                       save_thresholds, output);
    if (train->parsed())
      return cmd_train(gazetteer, transcripts, labels, thresholds,
                       save_thresholds, model_out, seed);
    if (evaluate->parsed())
      return cmd_evaluate(gazetteer, transcripts, labels, system, thresholds,
                          report_out, table_out, seed, jobs);
    if (generate->parsed())
      return cmd_generate(gazetteer, cfg, output, labels_out);
    if (features->parsed())
      return cmd_features(gazetteer, transcripts, thresholds, labels, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
