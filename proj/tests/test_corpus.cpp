#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "filmner/corpus.hpp"
#include "filmner/util.hpp"

using namespace filmner;

namespace {

// Independent word-to-number parser used as the round-trip oracle for
// number_to_words. Written against spoken-English conventions, not against
// the implementation.
const std::map<std::string, std::uint64_t>& small_values() {
  static const std::map<std::string, std::uint64_t> kValues = {
      {"one", 1},        {"two", 2},       {"three", 3},    {"four", 4},
      {"five", 5},       {"six", 6},       {"seven", 7},    {"eight", 8},
      {"nine", 9},       {"ten", 10},      {"eleven", 11},  {"twelve", 12},
      {"thirteen", 13},  {"fourteen", 14}, {"fifteen", 15}, {"sixteen", 16},
      {"seventeen", 17}, {"eighteen", 18}, {"nineteen", 19}, {"twenty", 20},
      {"thirty", 30},    {"forty", 40},    {"fifty", 50},   {"sixty", 60},
      {"seventy", 70},   {"eighty", 80},   {"ninety", 90},
  };
  return kValues;
}

bool lookup(const std::string& w, std::uint64_t& out) {
  auto it = small_values().find(w);
  if (it == small_values().end()) return false;
  out = it->second;
  return true;
}

// Parses a two-digit pair "sixty six" / "eleven"; returns false on no match.
bool parse_pair(const std::vector<std::string>& words, std::size_t& i,
                std::uint64_t& out) {
  std::uint64_t v;
  if (i >= words.size() || !lookup(words[i], v)) return false;
  out = v;
  ++i;
  if (v >= 20 && v % 10 == 0 && i < words.size()) {
    std::uint64_t unit;
    if (lookup(words[i], unit) && unit >= 1 && unit <= 9) {
      out += unit;
      ++i;
    }
  }
  return true;
}

// Year reading: "nineteen eighty four", "twenty oh nine", "ten hundred".
bool parse_year(const std::vector<std::string>& words, std::uint64_t& out) {
  std::size_t i = 0;
  std::uint64_t high;
  if (!parse_pair(words, i, high) || high < 10 || high > 99) return false;
  if (i == words.size()) return false;
  if (words[i] == "hundred") {
    if (i + 1 != words.size()) return false;
    out = high * 100;
  } else if (words[i] == "oh") {
    std::uint64_t unit;
    ++i;
    if (i >= words.size() || !lookup(words[i], unit) || unit < 1 || unit > 9)
      return false;
    if (i + 1 != words.size()) return false;
    out = high * 100 + unit;
  } else {
    std::uint64_t low;
    if (!parse_pair(words, i, low) || low < 10 || i != words.size())
      return false;
    out = high * 100 + low;
  }
  // Year readings only exist for these ranges; elsewhere cardinal applies.
  return (out >= 1000 && out <= 1999) || (out >= 2010 && out <= 2099);
}

bool parse_cardinal(const std::vector<std::string>& words, std::uint64_t& out) {
  std::uint64_t total = 0, group = 0;
  for (const std::string& w : words) {
    std::uint64_t v;
    if (w == "hundred") {
      if (group == 0 || group > 9) return false;
      group *= 100;
    } else if (w == "thousand") {
      if (group == 0) return false;
      total += group * 1000;
      group = 0;
    } else if (w == "million") {
      if (group == 0) return false;
      total += group * 1000000;
      group = 0;
    } else if (lookup(w, v)) {
      group += v;
    } else {
      return false;
    }
  }
  out = total + group;
  return true;
}

std::uint64_t words_to_number(const std::vector<std::string>& words) {
  REQUIRE(!words.empty());
  if (words.size() == 1 && words[0] == "zero") return 0;
  std::uint64_t out;
  if (parse_year(words, out)) return out;
  REQUIRE(parse_cardinal(words, out));
  return out;
}

}  // namespace

TEST_CASE("number_to_words reads years in paired form") {
  CHECK(number_to_words(1984) ==
        std::vector<std::string>{"nineteen", "eighty", "four"});
  CHECK(number_to_words(2017) == std::vector<std::string>{"twenty", "seventeen"});
  CHECK(number_to_words(1900) == std::vector<std::string>{"nineteen", "hundred"});
  CHECK(number_to_words(1906) ==
        std::vector<std::string>{"nineteen", "oh", "six"});
  CHECK(number_to_words(2099) ==
        std::vector<std::string>{"twenty", "ninety", "nine"});
}

TEST_CASE("number_to_words keeps the low two-thousands cardinal") {
  CHECK(number_to_words(2005) ==
        std::vector<std::string>{"two", "thousand", "five"});
  CHECK(number_to_words(2000) == std::vector<std::string>{"two", "thousand"});
  CHECK(number_to_words(2009) ==
        std::vector<std::string>{"two", "thousand", "nine"});
}

TEST_CASE("number_to_words cardinal forms") {
  CHECK(number_to_words(0) == std::vector<std::string>{"zero"});
  CHECK(number_to_words(12) == std::vector<std::string>{"twelve"});
  CHECK(number_to_words(40) == std::vector<std::string>{"forty"});
  CHECK(number_to_words(101) ==
        std::vector<std::string>{"one", "hundred", "one"});
  CHECK(number_to_words(999) ==
        std::vector<std::string>{"nine", "hundred", "ninety", "nine"});
  CHECK(number_to_words(2100) ==
        std::vector<std::string>{"two", "thousand", "one", "hundred"});
  CHECK(number_to_words(1000000) == std::vector<std::string>{"one", "million"});
  CHECK(number_to_words(999999999) ==
        std::vector<std::string>{"nine", "hundred", "ninety", "nine",
                                 "million", "nine", "hundred", "ninety",
                                 "nine", "thousand", "nine", "hundred",
                                 "ninety", "nine"});
}

TEST_CASE("number_to_words rejects out-of-range input") {
  CHECK_THROWS_AS(number_to_words(1000000000ull), std::invalid_argument);
}

TEST_CASE("number_to_words round-trips through an independent parser") {
  for (std::uint64_t n = 0; n <= 110000; ++n)
    CHECK(words_to_number(number_to_words(n)) == n);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    std::uint64_t n = rng() % 1000000000ull;
    CHECK(words_to_number(number_to_words(n)) == n);
  }
  for (std::uint64_t n = 999990000ull; n <= 999999999ull; ++n)
    CHECK(words_to_number(number_to_words(n)) == n);
}

TEST_CASE("number_to_words is injective over a dense sample") {
  std::set<std::string> seen;
  for (std::uint64_t n = 0; n <= 110000; ++n) {
    auto joined = join_tokens(number_to_words(n));
    CHECK(seen.insert(joined).second);
  }
}

TEST_CASE("normalize_text basic examples") {
  CHECK(normalize_text("1984").tokens ==
        std::vector<std::string>{"nineteen", "eighty", "four"});
  CHECK(normalize_text("").tokens.empty());
  CHECK(normalize_text("").sentence_breaks.empty());

  NormalizedText cost = normalize_text("It cost 12 dollars.");
  CHECK(cost.tokens ==
        std::vector<std::string>{"it", "cost", "twelve", "dollars"});
  CHECK(cost.sentence_breaks == std::vector<std::size_t>{3});
}

TEST_CASE("normalize_text lowercases and strips punctuation") {
  CHECK(normalize_text("The Dark Knight!").tokens ==
        std::vector<std::string>{"the", "dark", "knight"});
  CHECK(normalize_text("Hello, world").tokens ==
        std::vector<std::string>{"hello", "world"});
  CHECK(normalize_text("well-known remake").tokens ==
        std::vector<std::string>{"well", "known", "remake"});
  CHECK(normalize_text("$74 million").tokens ==
        std::vector<std::string>{"seventy", "four", "million"});
}

TEST_CASE("normalize_text keeps internal apostrophes only") {
  CHECK(normalize_text("don't").tokens == std::vector<std::string>{"don't"});
  CHECK(normalize_text("the critics' pick").tokens ==
        std::vector<std::string>{"the", "critics", "pick"});
  CHECK(normalize_text("'quoted'").tokens == std::vector<std::string>{"quoted"});
}

TEST_CASE("normalize_text reads decimals as point sequences") {
  CHECK(normalize_text("rated 3.5 stars").tokens ==
        std::vector<std::string>{"rated", "three", "point", "five", "stars"});
  CHECK(normalize_text("version 2.0.1").tokens ==
        std::vector<std::string>{"version", "two", "point", "zero", "point",
                                 "one"});
}

TEST_CASE("normalize_text reads awkward digit runs digit by digit") {
  CHECK(normalize_text("call 007").tokens ==
        std::vector<std::string>{"call", "zero", "zero", "seven"});
  CHECK(normalize_text("id 1234567890").tokens ==
        std::vector<std::string>{"id", "one", "two", "three", "four", "five",
                                 "six", "seven", "eight", "nine", "zero"});
}

TEST_CASE("normalize_text records sentence breaks without duplicates") {
  NormalizedText t = normalize_text("First. Second! Third? Done...");
  CHECK(t.tokens == std::vector<std::string>{"first", "second", "third", "done"});
  CHECK(t.sentence_breaks == std::vector<std::size_t>{0, 1, 2, 3});

  // Punctuation before any token records nothing.
  CHECK(normalize_text("... wait").sentence_breaks.empty());
}

TEST_CASE("normalize_text is idempotent on its own output") {
  const std::vector<std::string> samples = {
      "We watched Godzilla in 1984. It was great!",
      "Don't miss the 3.5-star review; it's $12",
      "007 calls at 2019-11-05... right?",
      "the dark knight rises",
  };
  for (const auto& raw : samples) {
    NormalizedText once = normalize_text(raw);
    NormalizedText twice = normalize_text(join_tokens(once.tokens));
    CHECK(twice.tokens == once.tokens);
    CHECK(twice.sentence_breaks.empty());
  }
}

TEST_CASE("word_error_rate pinned examples") {
  std::vector<std::string> ref = {"the", "cat", "sat"};
  CHECK(word_error_rate(ref, ref) == 0.0);
  CHECK(word_error_rate(ref, {"a", "cat", "sat"}) == doctest::Approx(1.0 / 3));
  CHECK(word_error_rate({"a"}, {}) == 1.0);
  CHECK_THROWS_AS(word_error_rate({}, {"a"}), std::invalid_argument);
}

TEST_CASE("word_error_rate properties") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> x;
    std::size_t len = 1 + rng() % 8;
    for (std::size_t i = 0; i < len; ++i) x.push_back(vocab[rng() % 4]);
    CHECK(word_error_rate(x, x) == 0.0);
    CHECK(word_error_rate(x, {}) == 1.0);
  }
  // WER can exceed 1 when the hypothesis is much longer.
  CHECK(word_error_rate({"a"}, {"b", "c", "d"}) == 3.0);
}

TEST_CASE("token_edit_distance small cases") {
  CHECK(token_edit_distance({}, {}) == 0);
  CHECK(token_edit_distance({"a", "b"}, {"a", "c", "b"}) == 1);
  CHECK(token_edit_distance({"a", "b", "c"}, {"c", "b", "a"}) == 2);
}

TEST_CASE("Transcript validation") {
  Transcript t;
  t.channel_id = "ch";
  t.episode_id = "ep";
  t.tokens = {"we", "watched", "coco"};
  CHECK_NOTHROW(t.validate());

  t.sentence_breaks = {1, 2};
  CHECK_NOTHROW(t.validate());
  t.sentence_breaks = {2, 1};
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.sentence_breaks = {3};
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.sentence_breaks.clear();

  t.pos_tags = {"PRP", "VBD"};
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.pos_tags = {"PRP", "VBD", "NN"};
  CHECK_NOTHROW(t.validate());

  t.tokens.push_back("Upper");
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.tokens.back() = "two words";
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.tokens.back() = "";
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
