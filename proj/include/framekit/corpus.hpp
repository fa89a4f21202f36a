#ifndef FRAMEKIT_CORPUS_HPP
#define FRAMEKIT_CORPUS_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace framekit {

// Reserved frame name for a LU occurrence that triggers nothing.
inline const std::string kOtherFrame = "OTHER";

class CorpusError : public std::runtime_error {
 public:
  explicit CorpusError(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public CorpusError {
 public:
  explicit ValidationError(const std::string& msg) : CorpusError(msg) {}
};

class EncodingError : public CorpusError {
 public:
  explicit EncodingError(const std::string& msg) : CorpusError(msg) {}
};

struct Token {
  int index = 0;  // 1-based position in sentence
  std::string surface;
  std::string lemma;
  std::string pos;
  int head = 0;  // governor index, 0 = root
  std::string deprel;
};

struct Span {
  int start = 0;  // inclusive, 1-based
  int end = 0;    // inclusive

  bool overlaps(const Span& o) const { return start <= o.end && o.start <= end; }
  int length() const { return end - start + 1; }
  bool operator==(const Span&) const = default;
};

struct FrameElement {
  std::string role;
  Span span;
  int trigger_link = 0;  // token index of the LU owning this FE

  bool operator==(const FrameElement&) const = default;
};

struct FrameInstance {
  std::string frame;
  int trigger = 0;  // token index of the lexical unit
  std::vector<FrameElement> elements;

  bool is_other() const { return frame == kOtherFrame; }
  bool operator==(const FrameInstance&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<FrameInstance> frames;
  std::string source_id;

  int size() const { return static_cast<int>(tokens.size()); }
  const Token& token(int index_1based) const { return tokens.at(index_1based - 1); }
};

struct Document {
  std::string id;
  std::string source;  // e.g. WGM / WA / CTGM / VKH
  std::vector<Sentence> sentences;
};

using LuLexicon = std::map<std::string, std::set<std::string>>;

struct Corpus {
  std::vector<Document> documents;
  LuLexicon lu_lexicon;  // lemma -> candidate frames

  std::size_t num_sentences() const;
  std::size_t num_frames() const;  // real frames, OTHER excluded
};

// Validates structural invariants. Returns warnings (e.g. an FE span covering
// its own trigger); throws ValidationError on hard violations.
std::vector<std::string> validate_sentence(const Sentence& s);
std::vector<std::string> validate_corpus(const Corpus& c);

struct SourceStats {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t frames = 0;  // non-OTHER frame instances
  std::size_t others = 0;  // OTHER-labeled LU occurrences
  std::size_t fes = 0;
  std::size_t lexicon = 0;  // distinct surface forms
  double pct_sentences_with_frame = 0.0;
  double fes_per_frame = 0.0;
};

struct StatsReport {
  std::map<std::string, SourceStats> per_source;
  SourceStats total;
  std::size_t lu_lexicon_size = 0;
};

StatsReport corpus_stats(const Corpus& c);

}  // namespace framekit

#endif
