#ifndef FRAMEKIT_CORPUS_IO_HPP
#define FRAMEKIT_CORPUS_IO_HPP

#include <iosfwd>
#include <string>

#include "framekit/corpus.hpp"

namespace framekit {

class ParseError : public CorpusError {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : CorpusError("line " + std::to_string(line) + ": " + msg), line(line) {}
  std::size_t line;
};

// JSON-lines corpus format: an optional {"lu_lexicon": {...}} header line,
// then one document object per line:
//   {id, source, sentences:[{tokens:[{i,w,lemma,pos,head,rel}],
//                            frames:[{frame,trigger,fes:[{role,start,end}]}]}]}
Corpus read_corpus(const std::string& path);
Corpus read_corpus(std::istream& in);
void write_corpus(const Corpus& corpus, const std::string& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

bool corpus_equal(const Corpus& a, const Corpus& b);

std::string stats_to_json(const StatsReport& report);

}  // namespace framekit

#endif
