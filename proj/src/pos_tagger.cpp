#include "filmner/pos_tagger.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace filmner {

const char* const kBoundaryTag = "BOUND";

const std::vector<std::string>& ptb_tags() {
  static const std::vector<std::string> tags = {
      "CC",  "CD",  "DT",   "EX",   "FW",  "IN",  "JJ",  "JJR", "JJS",
      "LS",  "MD",  "NN",   "NNS",  "NNP", "NNPS", "PDT", "POS", "PRP",
      "PRP$", "RB", "RBR",  "RBS",  "RP",  "SYM", "TO",  "UH",  "VB",
      "VBD", "VBG", "VBN",  "VBP",  "VBZ", "WDT", "WP",  "WP$", "WRB"};
  return tags;
}

std::size_t tag_index(const std::string& tag) {
  static const std::unordered_map<std::string, std::size_t> index = [] {
    std::unordered_map<std::string, std::size_t> m;
    const auto& tags = ptb_tags();
    for (std::size_t i = 0; i < tags.size(); ++i) m[tags[i]] = i;
    return m;
  }();
  auto it = index.find(tag);
  if (it != index.end()) return it->second;
  return index.at("NN");
}

namespace {

const std::pair<const char*, const char*> kLexicon[] = {
    // determiners and friends
    {"the", "DT"}, {"a", "DT"}, {"an", "DT"}, {"this", "DT"}, {"that", "DT"},
    {"these", "DT"}, {"those", "DT"}, {"each", "DT"}, {"every", "DT"},
    {"some", "DT"}, {"any", "DT"}, {"no", "DT"}, {"another", "DT"},
    {"all", "PDT"}, {"both", "PDT"}, {"half", "PDT"},
    // conjunctions
    {"and", "CC"}, {"or", "CC"}, {"but", "CC"}, {"nor", "CC"}, {"yet", "CC"},
    // prepositions
    {"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"of", "IN"}, {"for", "IN"},
    {"with", "IN"}, {"from", "IN"}, {"by", "IN"}, {"about", "IN"},
    {"as", "IN"}, {"into", "IN"}, {"over", "IN"}, {"after", "IN"},
    {"before", "IN"}, {"under", "IN"}, {"between", "IN"}, {"through", "IN"},
    {"during", "IN"}, {"against", "IN"}, {"without", "IN"}, {"within", "IN"},
    {"if", "IN"}, {"because", "IN"}, {"while", "IN"}, {"since", "IN"},
    {"to", "TO"},
    // pronouns
    {"i", "PRP"}, {"you", "PRP"}, {"he", "PRP"}, {"she", "PRP"},
    {"it", "PRP"}, {"we", "PRP"}, {"they", "PRP"}, {"me", "PRP"},
    {"him", "PRP"}, {"her", "PRP"}, {"us", "PRP"}, {"them", "PRP"},
    {"my", "PRP$"}, {"your", "PRP$"}, {"his", "PRP$"}, {"its", "PRP$"},
    {"our", "PRP$"}, {"their", "PRP$"},
    // modals
    {"can", "MD"}, {"could", "MD"}, {"will", "MD"}, {"would", "MD"},
    {"shall", "MD"}, {"should", "MD"}, {"may", "MD"}, {"might", "MD"},
    {"must", "MD"}, {"can't", "MD"}, {"won't", "MD"}, {"couldn't", "MD"},
    {"wouldn't", "MD"}, {"shouldn't", "MD"},
    // wh-words
    {"who", "WP"}, {"whom", "WP"}, {"what", "WP"}, {"whose", "WP$"},
    {"which", "WDT"}, {"where", "WRB"}, {"when", "WRB"}, {"why", "WRB"},
    {"how", "WRB"},
    {"there", "EX"},
    // interjections
    {"oh", "UH"}, {"yeah", "UH"}, {"wow", "UH"}, {"hey", "UH"},
    {"hmm", "UH"}, {"uh", "UH"}, {"um", "UH"}, {"okay", "UH"},
    // adverbs that suffix rules miss
    {"not", "RB"}, {"never", "RB"}, {"always", "RB"}, {"often", "RB"},
    {"very", "RB"}, {"too", "RB"}, {"also", "RB"}, {"just", "RB"},
    {"still", "RB"}, {"again", "RB"}, {"here", "RB"}, {"now", "RB"},
    {"then", "RB"}, {"yesterday", "RB"}, {"today", "RB"}, {"tomorrow", "RB"},
    {"don't", "RB"}, {"didn't", "RB"}, {"doesn't", "RB"}, {"isn't", "RB"},
    {"wasn't", "RB"}, {"aren't", "RB"}, {"weren't", "RB"},
    // common verbs
    {"be", "VB"}, {"do", "VB"}, {"have", "VB"}, {"go", "VB"}, {"get", "VB"},
    {"make", "VB"}, {"take", "VB"}, {"see", "VB"}, {"come", "VB"},
    {"know", "VB"}, {"think", "VB"}, {"say", "VB"}, {"watch", "VB"},
    {"is", "VBZ"}, {"has", "VBZ"}, {"does", "VBZ"},
    {"are", "VBP"}, {"am", "VBP"},
    {"was", "VBD"}, {"were", "VBD"}, {"did", "VBD"}, {"had", "VBD"},
    {"went", "VBD"}, {"got", "VBD"},
    {"been", "VBN"}, {"done", "VBN"}, {"gone", "VBN"}, {"made", "VBN"},
    {"taken", "VBN"}, {"seen", "VBN"}, {"known", "VBN"},
    // particles
    {"up", "RP"}, {"out", "RP"}, {"off", "RP"}, {"down", "RP"},
    // number words
    {"zero", "CD"}, {"one", "CD"}, {"two", "CD"}, {"three", "CD"},
    {"four", "CD"}, {"five", "CD"}, {"six", "CD"}, {"seven", "CD"},
    {"eight", "CD"}, {"nine", "CD"}, {"ten", "CD"}, {"eleven", "CD"},
    {"twelve", "CD"}, {"thirteen", "CD"}, {"fourteen", "CD"},
    {"fifteen", "CD"}, {"sixteen", "CD"}, {"seventeen", "CD"},
    {"eighteen", "CD"}, {"nineteen", "CD"}, {"twenty", "CD"},
    {"thirty", "CD"}, {"forty", "CD"}, {"fifty", "CD"}, {"sixty", "CD"},
    {"seventy", "CD"}, {"eighty", "CD"}, {"ninety", "CD"},
    {"hundred", "CD"}, {"thousand", "CD"}, {"million", "CD"},
    {"billion", "CD"},
};

bool ends_with(const std::string& s, const char* suffix) {
  std::size_t n = std::char_traits<char>::length(suffix);
  return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

RuleBasedTagger::RuleBasedTagger() {
  lexicon_.reserve(std::size(kLexicon));
  for (const auto& [word, tag] : kLexicon) lexicon_.emplace_back(word, tag);
  std::sort(lexicon_.begin(), lexicon_.end());
}

std::string RuleBasedTagger::tag_word(const std::string& token) const {
  auto it = std::lower_bound(
      lexicon_.begin(), lexicon_.end(), token,
      [](const auto& entry, const std::string& w) { return entry.first < w; });
  if (it != lexicon_.end() && it->first == token) return it->second;
  if (all_digits(token)) return "CD";
  if (ends_with(token, "'s")) return "NN";
  if (ends_with(token, "ly")) return "RB";
  if (token.size() > 4 && ends_with(token, "ing")) return "VBG";
  if (token.size() > 3 && ends_with(token, "ed")) return "VBD";
  if (ends_with(token, "tion") || ends_with(token, "sion") ||
      ends_with(token, "ment") || ends_with(token, "ness") ||
      ends_with(token, "ity"))
    return "NN";
  if (ends_with(token, "ous") || ends_with(token, "ful") ||
      ends_with(token, "ive") || ends_with(token, "able") ||
      ends_with(token, "ible") || ends_with(token, "ic"))
    return "JJ";
  if (token.size() > 4 && ends_with(token, "est")) return "JJS";
  if (token.size() > 3 && ends_with(token, "s") && !ends_with(token, "ss") &&
      !ends_with(token, "us") && !ends_with(token, "is"))
    return "NNS";
  return "NN";
}

std::vector<std::string> RuleBasedTagger::tag(
    const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(tag_word(t));
  return out;
}

}  // namespace filmner
