#pragma once

// Tokenization, coarse POS tagging and the replaceability rules that decide
// which position pairs of a sentence pair may receive a shared word.

#include <compare>
#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sharedword/label.h"

namespace sharedword {

// Reserved token written at probed positions during position ranking.
inline constexpr std::string_view kPadToken = "[PAD]";

enum class Pos { kNoun, kVerb, kAdj, kOther };

std::string_view to_string(Pos pos);
Pos parse_pos(std::string_view name);

struct Token {
  std::string surface;
  std::string folded;
  Pos pos = Pos::kOther;
  bool is_stopword = false;

  bool is_pad() const { return surface == kPadToken; }
  // A token the attack may touch and the toy models count: not a stopword,
  // not [PAD], and containing at least one letter or digit.
  bool is_content() const;

  bool operator==(const Token&) const = default;
};

class AnnotatedSentence {
 public:
  // Throws InvalidInputError on an empty token list.
  explicit AnnotatedSentence(std::vector<Token> tokens);

  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  std::span<const Token> tokens() const { return tokens_; }
  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

  // Copy with position `index` replaced.
  AnnotatedSentence with_token(std::size_t index, Token token) const;

  // Surface tokens joined by single spaces.
  std::string text() const;
  std::vector<std::string> surfaces() const;
  bool contains_pad() const;

  bool operator==(const AnnotatedSentence&) const = default;

 private:
  std::vector<Token> tokens_;
};

// ASCII case folding; non-ASCII bytes pass through unchanged.
std::string fold_case(std::string_view text);

// True when every character is a letter (non-ASCII UTF-8 bytes count as
// letters). Empty strings are not alphabetic.
bool is_alphabetic_word(std::string_view text);

// Whitespace split with punctuation as separate tokens. Apostrophes and
// hyphens stay inside a word when both neighbours are word characters, and the
// reserved [PAD] token survives intact.
std::vector<std::string> tokenize(std::string_view text);

// Lexicon + suffix-rule tagger producing Penn-style fine tags that collapse to
// Pos through a fixed table.
//
// Thread safety: immutable after construction, so one instance may be shared
// by any number of concurrent callers.
class Tagger {
 public:
  Tagger(std::unordered_set<std::string> stopwords,
         std::unordered_map<std::string, Pos> collapse,
         std::unordered_map<std::string, std::string> lexicon);

  // Tagger built from the data files compiled into the library.
  static const Tagger& builtin();

  static Tagger from_files(const std::filesystem::path& stopwords,
                           const std::filesystem::path& collapse,
                           const std::filesystem::path& lexicon);

  std::string fine_tag(std::string_view surface, std::size_t position) const;
  Pos coarse(std::string_view fine_tag) const;
  bool is_stopword(std::string_view folded) const {
    return stopwords_.contains(std::string(folded));
  }

  Token make_token(std::string_view surface, std::size_t position) const;

  // Throws InvalidInputError on empty or whitespace-only text.
  AnnotatedSentence annotate(std::string_view text) const;
  AnnotatedSentence annotate_tokens(std::span<const std::string> tokens) const;

 private:
  std::unordered_set<std::string> stopwords_;
  std::unordered_map<std::string, Pos> collapse_;
  std::unordered_map<std::string, std::string> lexicon_;
};

// Parsers for the on-disk formats (one word per line; two-column TSV).
std::unordered_set<std::string> parse_stopword_list(std::string_view text);
std::unordered_map<std::string, Pos> parse_pos_collapse_table(
    std::string_view text);
std::unordered_map<std::string, std::string> parse_lexicon(
    std::string_view text);

AnnotatedSentence annotate(std::string_view text);

Token pad_token();

struct PositionPair {
  std::size_t i = 0;  // index into P
  std::size_t j = 0;  // index into Q

  auto operator<=>(const PositionPair&) const = default;
};

// Positions already modified by earlier attack steps, one set per sentence.
struct FrozenPositions {
  std::set<std::size_t> p;
  std::set<std::size_t> q;

  bool operator==(const FrozenPositions&) const = default;
};

// All position pairs eligible for a joint substitution, sorted by (i, j).
//   positive: both content tokens with equal folded forms;
//   negative: both content tokens with equal coarse POS in {NOUN, VERB, ADJ}.
// Frozen positions never appear in the output.
std::vector<PositionPair> replaceable_pairs(const AnnotatedSentence& p,
                                            const AnnotatedSentence& q,
                                            Label label,
                                            const FrozenPositions& frozen = {});

}  // namespace sharedword
