#include "sharedword/linguistics.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sharedword/errors.h"

namespace sharedword {

namespace embedded {
std::string_view stopwords();
std::string_view pos_collapse();
std::string_view lexicon();
}  // namespace embedded

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::pair<std::string_view, std::string_view> split_two_columns(
    std::string_view line, std::string_view what) {
  const std::size_t tab = line.find('\t');
  if (tab == std::string_view::npos || line.find('\t', tab + 1) != line.npos) {
    throw DataError(std::string(what) + ": expected two tab-separated columns: " +
                    std::string(line));
  }
  return {line.substr(0, tab), line.substr(tab + 1)};
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

Label parse_label(std::string_view text) {
  if (text == "positive" || text == "1") return Label::kPositive;
  if (text == "negative" || text == "0") return Label::kNegative;
  throw InvalidInputError("unknown label: " + std::string(text));
}

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::kNoun:
      return "NOUN";
    case Pos::kVerb:
      return "VERB";
    case Pos::kAdj:
      return "ADJ";
    case Pos::kOther:
      return "OTHER";
  }
  return "OTHER";
}

Pos parse_pos(std::string_view name) {
  if (name == "NOUN") return Pos::kNoun;
  if (name == "VERB") return Pos::kVerb;
  if (name == "ADJ") return Pos::kAdj;
  if (name == "OTHER") return Pos::kOther;
  throw DataError("unknown coarse POS class: " + std::string(name));
}

bool Token::is_content() const {
  if (is_stopword || is_pad()) return false;
  return std::any_of(surface.begin(), surface.end(), [](char c) {
    return is_word_byte(static_cast<unsigned char>(c));
  });
}

AnnotatedSentence::AnnotatedSentence(std::vector<Token> tokens)
    : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw InvalidInputError("sentence has no tokens");
}

AnnotatedSentence AnnotatedSentence::with_token(std::size_t index,
                                                Token token) const {
  AnnotatedSentence copy = *this;
  copy.tokens_.at(index) = std::move(token);
  return copy;
}

std::string AnnotatedSentence::text() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens_[i].surface;
  }
  return out;
}

std::vector<std::string> AnnotatedSentence::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens_.size());
  for (const Token& t : tokens_) out.push_back(t.surface);
  return out;
}

bool AnnotatedSentence::contains_pad() const {
  return std::any_of(tokens_.begin(), tokens_.end(),
                     [](const Token& t) { return t.is_pad(); });
}

std::string fold_case(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_alphabetic_word(std::string_view text) {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
  });
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  while (i < n) {
    if (is_space_byte(byte(i))) {
      ++i;
      continue;
    }
    if (text.substr(i, kPadToken.size()) == kPadToken) {
      tokens.emplace_back(kPadToken);
      i += kPadToken.size();
      continue;
    }
    if (!is_word_byte(byte(i))) {
      tokens.emplace_back(text.substr(i, 1));
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n) {
      const unsigned char c = byte(j);
      if (is_word_byte(c)) {
        ++j;
      } else if ((c == '\'' || c == '-') && j + 1 < n && is_word_byte(byte(j + 1))) {
        j += 2;
      } else {
        break;
      }
    }
    tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::unordered_set<std::string> parse_stopword_list(std::string_view text) {
  std::unordered_set<std::string> words;
  for (std::string_view line : split_lines(text)) {
    if (line.empty() || line.front() == '#') continue;
    words.insert(fold_case(line));
  }
  return words;
}

std::unordered_map<std::string, Pos> parse_pos_collapse_table(
    std::string_view text) {
  std::unordered_map<std::string, Pos> table;
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    auto [fine, coarse] = split_two_columns(line, "POS collapse table");
    table.emplace(std::string(fine), parse_pos(coarse));
  }
  return table;
}

std::unordered_map<std::string, std::string> parse_lexicon(
    std::string_view text) {
  std::unordered_map<std::string, std::string> lexicon;
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    auto [word, tag] = split_two_columns(line, "lexicon");
    lexicon.emplace(fold_case(word), std::string(tag));
  }
  return lexicon;
}

Tagger::Tagger(std::unordered_set<std::string> stopwords,
               std::unordered_map<std::string, Pos> collapse,
               std::unordered_map<std::string, std::string> lexicon)
    : stopwords_(std::move(stopwords)),
      collapse_(std::move(collapse)),
      lexicon_(std::move(lexicon)) {}

const Tagger& Tagger::builtin() {
  static const Tagger tagger(parse_stopword_list(embedded::stopwords()),
                             parse_pos_collapse_table(embedded::pos_collapse()),
                             parse_lexicon(embedded::lexicon()));
  return tagger;
}

Tagger Tagger::from_files(const std::filesystem::path& stopwords,
                          const std::filesystem::path& collapse,
                          const std::filesystem::path& lexicon) {
  return Tagger(parse_stopword_list(read_file(stopwords)),
                parse_pos_collapse_table(read_file(collapse)),
                parse_lexicon(read_file(lexicon)));
}

std::string Tagger::fine_tag(std::string_view surface,
                             std::size_t position) const {
  if (surface == kPadToken) return "SYM";
  const std::string folded = fold_case(surface);
  if (auto it = lexicon_.find(folded); it != lexicon_.end()) return it->second;

  const bool has_word_byte =
      std::any_of(surface.begin(), surface.end(), [](char c) {
        return is_word_byte(static_cast<unsigned char>(c));
      });
  if (!has_word_byte) {
    if (surface == "." || surface == "?" || surface == "!") return ".";
    if (surface == ",") return ",";
    if (surface == ":" || surface == ";") return ":";
    if (surface == "(" || surface == "[" || surface == "{") return "(";
    if (surface == ")" || surface == "]" || surface == "}") return ")";
    if (surface == "\"" || surface == "'" || surface == "`") return "''";
    if (surface == "$") return "$";
    if (surface == "#") return "#";
    return "SYM";
  }
  if (folded.front() >= '0' && folded.front() <= '9') return "CD";

  const std::size_t len = folded.size();
  if (len > 5 && ends_with(folded, "ing")) return "VBG";
  if (len > 4 && ends_with(folded, "ed")) return "VBD";
  if (len > 4 && ends_with(folded, "ly")) return "RB";
  for (std::string_view suffix :
       {"ous", "ful", "able", "ible", "ive", "less", "ish", "ical"}) {
    if (len > suffix.size() + 2 && ends_with(folded, suffix)) return "JJ";
  }
  const char first = surface.front();
  if (position > 0 && first >= 'A' && first <= 'Z') return "NNP";
  if (len > 3 && ends_with(folded, "s") && !ends_with(folded, "ss")) {
    return "NNS";
  }
  return "NN";
}

Pos Tagger::coarse(std::string_view fine_tag) const {
  auto it = collapse_.find(std::string(fine_tag));
  return it == collapse_.end() ? Pos::kOther : it->second;
}

Token Tagger::make_token(std::string_view surface, std::size_t position) const {
  if (surface == kPadToken) return pad_token();
  Token token;
  token.surface = std::string(surface);
  token.folded = fold_case(surface);
  token.pos = coarse(fine_tag(surface, position));
  token.is_stopword = is_stopword(token.folded);
  return token;
}

AnnotatedSentence Tagger::annotate(std::string_view text) const {
  const std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty()) {
    throw InvalidInputError("cannot annotate empty or whitespace-only text");
  }
  return annotate_tokens(tokens);
}

AnnotatedSentence Tagger::annotate_tokens(
    std::span<const std::string> tokens) const {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.push_back(make_token(tokens[i], i));
  }
  return AnnotatedSentence(std::move(out));
}

AnnotatedSentence annotate(std::string_view text) {
  return Tagger::builtin().annotate(text);
}

Token pad_token() {
  Token token;
  token.surface = std::string(kPadToken);
  token.folded = std::string(kPadToken);
  token.pos = Pos::kOther;
  token.is_stopword = false;
  return token;
}

std::vector<PositionPair> replaceable_pairs(const AnnotatedSentence& p,
                                            const AnnotatedSentence& q,
                                            Label label,
                                            const FrozenPositions& frozen) {
  std::vector<PositionPair> pairs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Token& a = p[i];
    if (frozen.p.contains(i) || !a.is_content()) continue;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const Token& b = q[j];
      if (frozen.q.contains(j) || !b.is_content()) continue;
      const bool ok = label == Label::kPositive
                          ? a.folded == b.folded
                          : a.pos == b.pos && a.pos != Pos::kOther;
      if (ok) pairs.push_back({i, j});
    }
  }
  return pairs;
}

}  // namespace sharedword
