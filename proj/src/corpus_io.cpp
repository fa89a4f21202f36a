#include "framekit/corpus_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace framekit {

using nlohmann::json;

namespace {

json token_to_json(const Token& t) {
  return json{{"i", t.index}, {"w", t.surface}, {"lemma", t.lemma},
              {"pos", t.pos}, {"head", t.head}, {"rel", t.deprel}};
}

json sentence_to_json(const Sentence& s) {
  json tokens = json::array();
  for (const auto& t : s.tokens) tokens.push_back(token_to_json(t));
  json frames = json::array();
  for (const auto& f : s.frames) {
    json fes = json::array();
    for (const auto& fe : f.elements)
      fes.push_back(json{{"role", fe.role}, {"start", fe.span.start}, {"end", fe.span.end}});
    frames.push_back(json{{"frame", f.frame}, {"trigger", f.trigger}, {"fes", fes}});
  }
  return json{{"tokens", tokens}, {"frames", frames}};
}

Sentence sentence_from_json(const json& j, const std::string& doc_id, std::size_t sent_index,
                            std::size_t line) {
  Sentence s;
  s.source_id = doc_id + "#" + std::to_string(sent_index);
  for (const auto& jt : j.at("tokens")) {
    Token t;
    t.index = jt.at("i").get<int>();
    t.surface = jt.at("w").get<std::string>();
    t.lemma = jt.at("lemma").get<std::string>();
    t.pos = jt.at("pos").get<std::string>();
    t.head = jt.value("head", 0);
    t.deprel = jt.value("rel", "");
    s.tokens.push_back(std::move(t));
  }
  if (j.contains("frames")) {
    for (const auto& jf : j.at("frames")) {
      FrameInstance f;
      f.frame = jf.at("frame").get<std::string>();
      f.trigger = jf.at("trigger").get<int>();
      if (jf.contains("fes")) {
        for (const auto& jfe : jf.at("fes")) {
          FrameElement fe;
          fe.role = jfe.at("role").get<std::string>();
          fe.span.start = jfe.at("start").get<int>();
          fe.span.end = jfe.at("end").get<int>();
          fe.trigger_link = f.trigger;
          f.elements.push_back(std::move(fe));
        }
      }
      s.frames.push_back(std::move(f));
    }
  }
  try {
    validate_sentence(s);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line);
  }
  return s;
}

}  // namespace

Corpus read_corpus(std::istream& in) {
  Corpus corpus;
  std::string text;
  std::size_t line_no = 0;
  bool lexicon_given = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    try {
      if (j.contains("lu_lexicon")) {
        for (const auto& [lemma, frames] : j.at("lu_lexicon").items())
          for (const auto& f : frames) corpus.lu_lexicon[lemma].insert(f.get<std::string>());
        lexicon_given = true;
        continue;
      }
      Document d;
      d.id = j.at("id").get<std::string>();
      d.source = j.value("source", "");
      std::size_t k = 0;
      for (const auto& js : j.at("sentences"))
        d.sentences.push_back(sentence_from_json(js, d.id, k++, line_no));
      corpus.documents.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw ParseError(std::string("schema violation: ") + e.what(), line_no);
    }
  }
  if (!lexicon_given) {
    // fall back to the lexicon induced by the annotated triggers
    for (const auto& d : corpus.documents)
      for (const auto& s : d.sentences)
        for (const auto& f : s.frames) {
          auto& cands = corpus.lu_lexicon[s.token(f.trigger).lemma];
          if (!f.is_other()) cands.insert(f.frame);
        }
  }
  validate_corpus(corpus);
  return corpus;
}

Corpus read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file: " + path);
  return read_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  json lex = json::object();
  for (const auto& [lemma, frames] : corpus.lu_lexicon) {
    json arr = json::array();
    for (const auto& f : frames) arr.push_back(f);
    lex[lemma] = arr;
  }
  out << json{{"lu_lexicon", lex}}.dump() << '\n';
  for (const auto& d : corpus.documents) {
    json sentences = json::array();
    for (const auto& s : d.sentences) sentences.push_back(sentence_to_json(s));
    out << json{{"id", d.id}, {"source", d.source}, {"sentences", sentences}}.dump() << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot open output file: " + path);
  write_corpus(corpus, out);
}

bool corpus_equal(const Corpus& a, const Corpus& b) {
  if (a.lu_lexicon != b.lu_lexicon || a.documents.size() != b.documents.size()) return false;
  for (std::size_t i = 0; i < a.documents.size(); ++i) {
    const auto& da = a.documents[i];
    const auto& db = b.documents[i];
    if (da.id != db.id || da.source != db.source ||
        da.sentences.size() != db.sentences.size())
      return false;
    for (std::size_t k = 0; k < da.sentences.size(); ++k) {
      const auto& sa = da.sentences[k];
      const auto& sb = db.sentences[k];
      if (sa.frames != sb.frames || sa.tokens.size() != sb.tokens.size()) return false;
      for (std::size_t t = 0; t < sa.tokens.size(); ++t) {
        const auto& ta = sa.tokens[t];
        const auto& tb = sb.tokens[t];
        if (ta.index != tb.index || ta.surface != tb.surface || ta.lemma != tb.lemma ||
            ta.pos != tb.pos || ta.head != tb.head || ta.deprel != tb.deprel)
          return false;
      }
    }
  }
  return true;
}

namespace {

json source_stats_to_json(const SourceStats& st) {
  return json{{"sentences", st.sentences},
              {"words", st.words},
              {"frames", st.frames},
              {"others", st.others},
              {"fes", st.fes},
              {"lexicon", st.lexicon},
              {"pct_sentences_with_frame", st.pct_sentences_with_frame},
              {"fes_per_frame", st.fes_per_frame}};
}

}  // namespace

std::string stats_to_json(const StatsReport& report) {
  json per_source = json::object();
  for (const auto& [source, st] : report.per_source)
    per_source[source.empty() ? "<none>" : source] = source_stats_to_json(st);
  json j{{"per_source", per_source},
         {"total", source_stats_to_json(report.total)},
         {"lu_lexicon_size", report.lu_lexicon_size}};
  return j.dump(2);
}

}  // namespace framekit
