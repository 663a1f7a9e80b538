#ifndef FILMNER_POS_TAGGER_HPP
#define FILMNER_POS_TAGGER_HPP

#include <string>
#include <vector>

namespace filmner {

// The 36 Penn Treebank tags, in a fixed order used for feature indexing.
const std::vector<std::string>& ptb_tags();

// Tag emitted for positions past either transcript edge.
extern const char* const kBoundaryTag;

// Index of a tag within ptb_tags(); unknown tags map to NN.
std::size_t tag_index(const std::string& tag);

// Produces one tag per token. Implementations must be safe for concurrent
// read-only use.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<std::string> tag(
      const std::vector<std::string>& tokens) const = 0;
};

// Closed-class lexicon plus suffix heuristics (-ly -> RB, -ing -> VBG, ...),
// defaulting to NN. Number words and digit strings tag as CD.
class RuleBasedTagger : public PosTagger {
 public:
  RuleBasedTagger();
  std::vector<std::string> tag(
      const std::vector<std::string>& tokens) const override;

  std::string tag_word(const std::string& token) const;

 private:
  std::vector<std::pair<std::string, std::string>> lexicon_;  // sorted
};

}  // namespace filmner

#endif
