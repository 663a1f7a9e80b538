#include "filmner/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

#include "filmner/util.hpp"

namespace filmner {

namespace {

using nlohmann::json;

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Applies fn to every non-empty, non-_meta JSONL record, rethrowing parse
// and validation errors with the path and line number attached.
template <typename Fn>
void for_each_record(const std::string& path, Fn fn) {
  std::ifstream in = open_for_read(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json record = json::parse(line);
      if (record.is_object() && record.contains("_meta")) continue;
      fn(record);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
}

void write_meta_line(std::ofstream& out, const std::string& digest) {
  if (digest.empty()) return;
  json meta;
  meta["_meta"] = {{"config_digest", digest}};
  out << meta.dump() << "\n";
}

json parse_single_object(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    json j = json::parse(buffer.str());
    if (!j.is_object()) throw std::runtime_error("expected a JSON object");
    return j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Transcript transcript_from_record(const json& record) {
  Transcript t;
  t.channel_id = record.at("channel_id").get<std::string>();
  t.episode_id = record.at("episode_id").get<std::string>();
  if (record.contains("tokens")) {
    t.tokens = record.at("tokens").get<std::vector<std::string>>();
    if (record.contains("sentence_breaks"))
      t.sentence_breaks =
          record.at("sentence_breaks").get<std::vector<std::size_t>>();
  } else {
    NormalizedText norm = normalize_text(record.at("text").get<std::string>());
    t.tokens = std::move(norm.tokens);
    t.sentence_breaks = std::move(norm.sentence_breaks);
  }
  if (record.contains("pos_tags"))
    t.pos_tags = record.at("pos_tags").get<std::vector<std::string>>();
  t.validate();
  return t;
}

json transcript_to_record(const Transcript& t) {
  json record;
  record["channel_id"] = t.channel_id;
  record["episode_id"] = t.episode_id;
  record["tokens"] = t.tokens;
  if (!t.sentence_breaks.empty()) record["sentence_breaks"] = t.sentence_breaks;
  if (!t.pos_tags.empty()) record["pos_tags"] = t.pos_tags;
  return record;
}

}  // namespace

Gazetteer read_gazetteer(const std::string& path) {
  Gazetteer g;
  for_each_record(path, [&](const json& record) {
    FilmRecord film;
    film.film_id = record.at("film_id").get<std::string>();
    film.title = record.at("title").get<std::string>();
    if (record.contains("budget")) film.budget = record.at("budget").get<double>();
    if (record.contains("keywords"))
      for (const auto& kw : record.at("keywords"))
        film.keywords.push_back({kw.get<std::string>()});
    if (record.contains("plot"))
      film.plot = record.at("plot").get<std::string>();
    if (record.contains("logline"))
      film.logline = record.at("logline").get<std::string>();
    if (record.contains("release_year"))
      film.release_year = record.at("release_year").get<int>();
    g.insert(std::move(film));
  });
  return g;
}

void write_gazetteer(const std::string& path, const Gazetteer& g,
                     const std::string& meta_digest) {
  std::ofstream out = open_for_write(path);
  write_meta_line(out, meta_digest);
  for (const FilmRecord& film : g.records()) {
    json record;
    record["film_id"] = film.film_id;
    record["title"] = film.title;
    if (film.budget) record["budget"] = *film.budget;
    if (!film.keywords.empty()) {
      json kws = json::array();
      for (const auto& kw : film.keywords) kws.push_back(join_tokens(kw));
      record["keywords"] = kws;
    }
    if (film.plot) record["plot"] = *film.plot;
    if (film.logline) record["logline"] = *film.logline;
    if (film.release_year) record["release_year"] = *film.release_year;
    out << record.dump() << "\n";
  }
}

std::vector<Transcript> read_transcripts(const std::string& path) {
  std::vector<Transcript> transcripts;
  for_each_record(path, [&](const json& record) {
    transcripts.push_back(transcript_from_record(record));
  });
  return transcripts;
}

void write_transcripts(const std::string& path,
                       const std::vector<Transcript>& transcripts,
                       const std::string& meta_digest) {
  std::ofstream out = open_for_write(path);
  write_meta_line(out, meta_digest);
  for (const Transcript& t : transcripts)
    out << transcript_to_record(t).dump() << "\n";
}

std::vector<Transcript> read_transcript_input(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '{')
    return read_transcripts(path);

  // Plain text: the whole file is one document named after the file.
  Transcript t;
  t.channel_id = std::filesystem::path(path).stem().string();
  t.episode_id = t.channel_id;
  NormalizedText norm = normalize_text(content);
  t.tokens = std::move(norm.tokens);
  t.sentence_breaks = std::move(norm.sentence_breaks);
  return {std::move(t)};
}

std::vector<GoldLabel> read_labels(const std::string& path) {
  std::vector<GoldLabel> labels;
  for_each_record(path, [&](const json& record) {
    GoldLabel label;
    label.episode_id = record.at("episode_id").get<std::string>();
    label.film_id = record.at("film_id").get<std::string>();
    if (record.contains("span")) {
      const auto& span = record.at("span");
      if (!span.is_array() || span.size() != 2)
        throw std::runtime_error("span must be [start, end]");
      label.has_span = true;
      label.span_start = span[0].get<std::size_t>();
      label.span_end = span[1].get<std::size_t>();
      if (label.span_end <= label.span_start)
        throw std::runtime_error("span end must exceed span start");
    }
    labels.push_back(std::move(label));
  });
  return labels;
}

void write_labels(const std::string& path,
                  const std::vector<GoldLabel>& labels,
                  const std::string& meta_digest) {
  std::ofstream out = open_for_write(path);
  write_meta_line(out, meta_digest);
  for (const GoldLabel& label : labels) {
    json record;
    record["episode_id"] = label.episode_id;
    record["film_id"] = label.film_id;
    if (label.has_span)
      record["span"] = {label.span_start, label.span_end};
    out << record.dump() << "\n";
  }
}

std::vector<LabeledTranscript> attach_labels(
    const std::vector<Transcript>& transcripts,
    const std::vector<GoldLabel>& labels) {
  std::vector<LabeledTranscript> out;
  out.reserve(transcripts.size());
  std::unordered_map<std::string, std::size_t> by_episode;
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    by_episode[transcripts[i].episode_id] = i;
    out.push_back({transcripts[i], {}});
  }
  for (const GoldLabel& label : labels) {
    auto it = by_episode.find(label.episode_id);
    if (it == by_episode.end())
      throw std::runtime_error("label references unknown episode " +
                               label.episode_id);
    out[it->second].labels.push_back(label);
  }
  return out;
}

std::vector<CandidateMention> read_candidates(const std::string& path) {
  std::vector<CandidateMention> candidates;
  for_each_record(path, [&](const json& record) {
    CandidateMention c;
    c.episode_id = record.at("episode_id").get<std::string>();
    c.span_start = record.at("span_start").get<std::size_t>();
    c.span_end = record.at("span_end").get<std::size_t>();
    c.n = record.at("n").get<std::size_t>();
    c.film_id = record.at("film_id").get<std::string>();
    c.matched_text = record.at("matched_text").get<std::string>();
    c.lev_ratio = record.at("lev_ratio").get<double>();
    if (c.span_end <= c.span_start)
      throw std::runtime_error("candidate span end must exceed start");
    candidates.push_back(std::move(c));
  });
  return candidates;
}

void write_candidates(const std::string& path,
                      const std::vector<CandidateMention>& candidates,
                      const std::string& meta_digest) {
  std::ofstream out = open_for_write(path);
  write_meta_line(out, meta_digest);
  for (const CandidateMention& c : candidates) {
    json record;
    record["episode_id"] = c.episode_id;
    record["span_start"] = c.span_start;
    record["span_end"] = c.span_end;
    record["n"] = c.n;
    record["film_id"] = c.film_id;
    record["matched_text"] = c.matched_text;
    record["lev_ratio"] = c.lev_ratio;
    out << record.dump() << "\n";
  }
}

ThresholdProfile read_thresholds(const std::string& path) {
  json j = parse_single_object(path);
  std::array<double, 6> per_n{};
  for (std::size_t n = 1; n <= 6; ++n) {
    const std::string key = std::to_string(n);
    if (!j.contains(key))
      throw std::runtime_error(path + ": missing threshold for n=" + key);
    per_n[n - 1] = j.at(key).get<double>();
  }
  return ThresholdProfile(per_n);
}

void write_thresholds(const std::string& path, const ThresholdProfile& profile,
                      const std::string& meta_digest) {
  json j;
  for (std::size_t n = 1; n <= 6; ++n)
    j[std::to_string(n)] = profile.at(n);
  if (!meta_digest.empty()) j["_meta"] = {{"config_digest", meta_digest}};
  std::ofstream out = open_for_write(path);
  out << j.dump() << "\n";
}

LinearModel read_model(const std::string& path) {
  json j = parse_single_object(path);
  LinearModel m;
  try {
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.penalty = penalty_from_name(j.at("penalty").get<std::string>());
    m.strength = j.at("strength").get<double>();
    m.decision_threshold = j.at("decision_threshold").get<double>();
    m.feature_mean = j.at("feature_mean").get<std::vector<double>>();
    m.feature_scale = j.at("feature_scale").get<std::vector<double>>();
    m.seed = j.at("seed").get<std::uint64_t>();
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (m.weights.size() != m.feature_names.size() ||
      m.weights.size() != m.feature_mean.size() ||
      m.weights.size() != m.feature_scale.size())
    throw std::runtime_error(path + ": inconsistent model dimensions");
  return m;
}

void write_model(const std::string& path, const LinearModel& m,
                 const std::string& meta_digest) {
  json j;
  j["feature_names"] = m.feature_names;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  j["penalty"] = penalty_name(m.penalty);
  j["strength"] = m.strength;
  j["decision_threshold"] = m.decision_threshold;
  j["feature_mean"] = m.feature_mean;
  j["feature_scale"] = m.feature_scale;
  j["seed"] = m.seed;
  if (!meta_digest.empty()) j["_meta"] = {{"config_digest", meta_digest}};
  std::ofstream out = open_for_write(path);
  out << j.dump() << "\n";
}

void write_report(const std::string& path, const EvalReport& report,
                  const std::string& meta_digest) {
  std::ofstream out = open_for_write(path);
  write_meta_line(out, meta_digest);
  for (const FoldResult& fold : report.per_fold) {
    json record;
    record["system"] = report.system_name;
    record["channel"] = fold.held_out_channel;
    record["precision"] = fold.precision;
    record["recall"] = fold.recall;
    record["f1"] = fold.f1;
    record["tp"] = fold.tp;
    record["fp"] = fold.fp;
    record["fn"] = fold.fn;
    out << record.dump() << "\n";
  }
  json aggregate;
  aggregate["system"] = report.system_name;
  aggregate["aggregate"] = true;
  aggregate["macro_precision"] = report.macro_precision;
  aggregate["macro_recall"] = report.macro_recall;
  aggregate["macro_f1"] = report.macro_f1;
  out << aggregate.dump() << "\n";
}

std::string render_report(const EvalReport& report) {
  std::string text = "system: " + report.system_name + "\n";
  char row[160];
  std::snprintf(row, sizeof(row), "%-16s %9s %9s %9s %7s %7s %7s\n",
                "channel", "precision", "recall", "f1", "tp", "fp", "fn");
  text += row;
  for (const FoldResult& fold : report.per_fold) {
    std::snprintf(row, sizeof(row), "%-16s %9.4f %9.4f %9.4f %7zu %7zu %7zu\n",
                  fold.held_out_channel.c_str(), fold.precision, fold.recall,
                  fold.f1, fold.tp, fold.fp, fold.fn);
    text += row;
  }
  std::snprintf(row, sizeof(row), "%-16s %9.4f %9.4f %9.4f\n", "macro",
                report.macro_precision, report.macro_recall, report.macro_f1);
  text += row;
  return text;
}

}  // namespace filmner
