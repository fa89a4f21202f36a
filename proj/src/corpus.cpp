#include "framekit/corpus.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace framekit {

std::size_t Corpus::num_sentences() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.sentences.size();
  return n;
}

std::size_t Corpus::num_frames() const {
  std::size_t n = 0;
  for (const auto& d : documents)
    for (const auto& s : d.sentences)
      for (const auto& f : s.frames)
        if (!f.is_other()) ++n;
  return n;
}

namespace {

std::string where(const Sentence& s) {
  return s.source_id.empty() ? "<sentence>" : "sentence " + s.source_id;
}

}  // namespace

std::vector<std::string> validate_sentence(const Sentence& s) {
  std::vector<std::string> warnings;
  const int n = s.size();
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[i];
    if (t.index != i + 1)
      throw ValidationError(where(s) + ": token indices must be 1-based and contiguous, got " +
                            std::to_string(t.index) + " at position " + std::to_string(i + 1));
    if (t.head < 0 || t.head > n)
      throw ValidationError(where(s) + ": head " + std::to_string(t.head) +
                            " of token " + std::to_string(t.index) + " out of range");
    if (t.head == t.index)
      throw ValidationError(where(s) + ": token " + std::to_string(t.index) + " is its own head");
  }

  std::unordered_set<int> triggers;
  for (const auto& f : s.frames) {
    if (f.trigger < 1 || f.trigger > n)
      throw ValidationError(where(s) + ": trigger index " + std::to_string(f.trigger) +
                            " out of bounds (frame " + f.frame + ")");
    if (!triggers.insert(f.trigger).second)
      throw ValidationError(where(s) + ": token " + std::to_string(f.trigger) +
                            " triggers more than one frame");
    for (std::size_t a = 0; a < f.elements.size(); ++a) {
      const FrameElement& fe = f.elements[a];
      if (fe.span.start > fe.span.end)
        throw ValidationError(where(s) + ": FE " + fe.role + " has start > end");
      if (fe.span.start < 1 || fe.span.end > n)
        throw ValidationError(where(s) + ": FE " + fe.role + " span [" +
                              std::to_string(fe.span.start) + "," + std::to_string(fe.span.end) +
                              "] exceeds sentence length " + std::to_string(n));
      if (fe.trigger_link != f.trigger)
        throw ValidationError(where(s) + ": FE " + fe.role + " trigger link " +
                              std::to_string(fe.trigger_link) + " != owning trigger " +
                              std::to_string(f.trigger));
      for (std::size_t b = a + 1; b < f.elements.size(); ++b)
        if (fe.span.overlaps(f.elements[b].span))
          throw ValidationError(where(s) + ": overlapping FEs " + fe.role + " and " +
                                f.elements[b].role + " within frame " + f.frame);
      if (fe.span.start <= f.trigger && f.trigger <= fe.span.end)
        warnings.push_back(where(s) + ": FE " + fe.role + " of frame " + f.frame +
                           " covers its own trigger " + std::to_string(f.trigger));
    }
  }
  return warnings;
}

std::vector<std::string> validate_corpus(const Corpus& c) {
  std::vector<std::string> warnings;
  for (const auto& d : c.documents) {
    for (const auto& s : d.sentences) {
      auto w = validate_sentence(s);
      warnings.insert(warnings.end(), w.begin(), w.end());
      for (const auto& f : s.frames) {
        const std::string& lemma = s.token(f.trigger).lemma;
        auto it = c.lu_lexicon.find(lemma);
        if (it == c.lu_lexicon.end())
          throw ValidationError("document " + d.id + ": trigger lemma '" + lemma +
                                "' missing from lu_lexicon");
        if (!f.is_other() && !it->second.count(f.frame))
          throw ValidationError("document " + d.id + ": frame " + f.frame +
                                " not a candidate for lemma '" + lemma + "'");
      }
    }
  }
  return warnings;
}

StatsReport corpus_stats(const Corpus& c) {
  StatsReport report;
  report.lu_lexicon_size = c.lu_lexicon.size();
  std::map<std::string, std::set<std::string>> vocab;
  std::set<std::string> total_vocab;
  std::map<std::string, std::size_t> with_frame;
  std::size_t total_with_frame = 0;

  for (const auto& d : c.documents) {
    SourceStats& st = report.per_source[d.source];
    for (const auto& s : d.sentences) {
      ++st.sentences;
      st.words += s.tokens.size();
      for (const auto& t : s.tokens) {
        vocab[d.source].insert(t.surface);
        total_vocab.insert(t.surface);
      }
      bool has_frame = false;
      for (const auto& f : s.frames) {
        if (f.is_other()) {
          ++st.others;
        } else {
          ++st.frames;
          st.fes += f.elements.size();
          has_frame = true;
        }
      }
      if (has_frame) {
        ++with_frame[d.source];
        ++total_with_frame;
      }
    }
  }

  for (auto& [source, st] : report.per_source) {
    st.lexicon = vocab[source].size();
    st.pct_sentences_with_frame =
        st.sentences ? 100.0 * static_cast<double>(with_frame[source]) / st.sentences : 0.0;
    st.fes_per_frame = st.frames ? static_cast<double>(st.fes) / st.frames : 0.0;
    report.total.sentences += st.sentences;
    report.total.words += st.words;
    report.total.frames += st.frames;
    report.total.others += st.others;
    report.total.fes += st.fes;
  }
  report.total.lexicon = total_vocab.size();
  report.total.pct_sentences_with_frame =
      report.total.sentences
          ? 100.0 * static_cast<double>(total_with_frame) / report.total.sentences
          : 0.0;
  report.total.fes_per_frame =
      report.total.frames ? static_cast<double>(report.total.fes) / report.total.frames : 0.0;
  return report;
}

}  // namespace framekit
