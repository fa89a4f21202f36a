#include "framekit/synth.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace framekit {

std::vector<FrameSpec> default_inventory() {
  return {
      {"Attack", {"Assailant", "Victim", "Time"}, {{"attack", false}, {"assault", true}, {"strike", false}}},
      {"Deciding", {"Cognizer", "Decision"}, {{"decide", false}, {"decision", true}}},
      {"Creating", {"Creator", "Created_entity"}, {{"build", false}, {"construct", false}, {"construction", true}}},
      {"Locating", {"Perceiver", "Sought_entity", "Ground"}, {{"locate", false}, {"find", false}}},
      {"Leadership", {"Leader", "Governed"}, {{"lead", false}, {"command", true}}},
  };
}

namespace {

struct Builder {
  Sentence s;

  int add(const std::string& lemma, const std::string& pos, int head, const std::string& rel) {
    Token t;
    t.index = static_cast<int>(s.tokens.size()) + 1;
    t.surface = lemma;
    t.lemma = lemma;
    t.pos = pos;
    t.head = head;
    t.deprel = rel;
    s.tokens.push_back(std::move(t));
    return t.index;
  }
};

using Rng = std::mt19937_64;

bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

const std::vector<std::string> kSharedNouns = {"thing", "group", "place", "object", "force", "unit"};
const std::vector<std::string> kAdverbs = {"quickly", "suddenly", "finally", "often"};
const std::vector<std::string> kTimeNouns = {"dawn", "noon", "night", "winter"};

std::vector<std::string> role_fillers(const std::string& frame, const std::string& role) {
  std::vector<std::string> out;
  std::string base = role;
  for (auto& c : base) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (int i = 0; i < 6; ++i) out.push_back(base + "_" + std::string(1, static_cast<char>('a' + i)));
  (void)frame;
  return out;
}

std::string draw_filler(Rng& rng, const std::string& frame, const std::string& role) {
  if (chance(rng, 0.25)) return pick(rng, kSharedNouns);
  return pick(rng, role_fillers(frame, role));
}

// subject NP + trigger verb (root) + object NP + optional oblique PP.
Sentence verbal_frame_sentence(Rng& rng, const FrameSpec& frame, const std::string& trigger) {
  Builder b;
  FrameInstance inst;
  inst.frame = frame.name;

  const bool with_adj = chance(rng, 0.3);
  const int subj_start = 1;
  b.add("the", "DET", 0, "det");
  if (with_adj) b.add(pick(rng, std::vector<std::string>{"old", "large", "small"}), "ADJ", 0, "amod");
  int subj_noun = b.add(draw_filler(rng, frame.name, frame.roles[0]), "NOUN", 0, "subj");

  if (chance(rng, 0.3)) b.add(pick(rng, kAdverbs), "ADV", 0, "advmod");

  int verb = b.add(trigger, "VERB", 0, "root");
  inst.trigger = verb;
  inst.elements.push_back({frame.roles[0], {subj_start, subj_noun}, verb});

  if (frame.roles.size() >= 2) {
    int obj_start = b.add("the", "DET", 0, "det");
    int obj_noun = b.add(draw_filler(rng, frame.name, frame.roles[1]), "NOUN", verb, "obj");
    int obj_end = obj_noun;
    if (chance(rng, 0.25))
      obj_end = b.add(draw_filler(rng, frame.name, frame.roles[1]), "NOUN", obj_noun, "mod");
    b.s.tokens[obj_start - 1].head = obj_noun;
    inst.elements.push_back({frame.roles[1], {obj_start, obj_end}, verb});
  }

  if (frame.roles.size() >= 3 && chance(rng, 0.7)) {
    int prep = b.add("in", "PREP", 0, "case");
    b.add("the", "DET", 0, "det");
    int obl_noun = b.add(draw_filler(rng, frame.name, frame.roles[2]), "NOUN", verb, "obl");
    b.s.tokens[prep - 1].head = obl_noun;
    b.s.tokens[obl_noun - 2].head = obl_noun;
    inst.elements.push_back({frame.roles[2], {prep, obl_noun}, verb});
  }

  if (chance(rng, 0.3)) {
    int prep = b.add("at", "PREP", 0, "case");
    int tnoun = b.add(pick(rng, kTimeNouns), "NOUN", verb, "tmod");
    b.s.tokens[prep - 1].head = tnoun;
  }

  // fix up pre-verbal heads now that the verb index is known
  for (auto& t : b.s.tokens) {
    if (t.deprel == "det" && t.head == 0 && t.index < subj_noun + 1) t.head = subj_noun;
    if (t.deprel == "amod" && t.head == 0) t.head = subj_noun;
    if (t.deprel == "advmod" && t.head == 0) t.head = verb;
  }
  b.s.tokens[subj_noun - 1].head = verb;
  b.s.frames.push_back(std::move(inst));
  return std::move(b.s);
}

// "the TRIGGER of the FILLER happened": nominal trigger, one nmod FE.
Sentence nominal_frame_sentence(Rng& rng, const FrameSpec& frame, const std::string& trigger) {
  Builder b;
  int det1 = b.add("the", "DET", 0, "det");
  int trig = b.add(trigger, "NOUN", 0, "subj");
  int prep = b.add("of", "PREP", 0, "case");
  int det2 = b.add("the", "DET", 0, "det");
  int filler = b.add(draw_filler(rng, frame.name, frame.roles[0]), "NOUN", trig, "nmod");
  int verb = b.add(pick(rng, std::vector<std::string>{"happened", "followed", "continued"}),
                   "VERB", 0, "root");
  if (chance(rng, 0.3)) b.add(pick(rng, kAdverbs), "ADV", verb, "advmod");
  b.s.tokens[det1 - 1].head = trig;
  b.s.tokens[trig - 1].head = verb;
  b.s.tokens[prep - 1].head = filler;
  b.s.tokens[det2 - 1].head = filler;

  FrameInstance inst;
  inst.frame = frame.name;
  inst.trigger = trig;
  inst.elements.push_back({frame.roles[0], {prep, filler}, trig});
  b.s.frames.push_back(std::move(inst));
  return std::move(b.s);
}

Sentence other_sentence(Rng& rng, const std::string& lemma, bool nominal) {
  Builder b;
  FrameInstance inst;
  inst.frame = kOtherFrame;
  if (nominal) {
    int det = b.add("the", "DET", 0, "det");
    int trig = b.add(lemma, "NOUN", 0, "subj");
    int verb = b.add(pick(rng, std::vector<std::string>{"remained", "seemed", "stayed"}),
                     "VERB", 0, "root");
    b.add(pick(rng, std::vector<std::string>{"unclear", "unknown", "distant"}), "ADJ", verb, "acomp");
    b.s.tokens[det - 1].head = trig;
    b.s.tokens[trig - 1].head = verb;
    inst.trigger = trig;
  } else {
    b.add("they", "PRON", 0, "subj");
    b.add("would", "AUX", 0, "aux");
    b.add("never", "ADV", 0, "advmod");
    int trig = b.add(lemma, "VERB", 0, "root");
    b.add("again", "ADV", trig, "advmod");
    for (auto& t : b.s.tokens)
      if (t.head == 0 && t.index != trig) t.head = trig;
    inst.trigger = trig;
  }
  b.s.frames.push_back(std::move(inst));
  return std::move(b.s);
}

Sentence filler_sentence(Rng& rng) {
  Builder b;
  b.add("it", "PRON", 2, "subj");
  int verb = b.add("was", "VERB", 0, "root");
  b.add(pick(rng, std::vector<std::string>{"quiet", "cold", "calm", "late"}), "ADJ", verb, "acomp");
  if (chance(rng, 0.5))
    b.add(pick(rng, std::vector<std::string>{"yesterday", "today", "there"}), "ADV", verb, "advmod");
  return std::move(b.s);
}

}  // namespace

Corpus generate(const GeneratorConfig& config) {
  if (config.frame_inventory.empty())
    throw CorpusError("generator needs at least one frame with one trigger lemma");
  for (double r : {config.ambiguity_rate, config.noise_rate, config.no_lu_rate})
    if (r < 0.0 || r > 1.0) throw CorpusError("generator rates must be in [0,1]");

  Rng rng(config.seed);
  auto inventory = config.frame_inventory;

  // ambiguous lemmas: duplicate a trigger into another frame's list
  if (inventory.size() > 1 && config.ambiguity_rate > 0.0) {
    for (std::size_t fi = 0; fi < inventory.size(); ++fi)
      for (const auto& trig : std::vector<TriggerSpec>(inventory[fi].triggers))
        if (chance(rng, config.ambiguity_rate)) {
          std::size_t other = (fi + 1 + std::uniform_int_distribution<std::size_t>(
                                             0, inventory.size() - 2)(rng)) %
                              inventory.size();
          inventory[other].triggers.push_back(trig);
        }
  }

  Corpus corpus;
  for (const auto& f : inventory)
    for (const auto& t : f.triggers) corpus.lu_lexicon[t.lemma].insert(f.name);

  static const std::vector<std::string> kSources = {"WGM", "WA", "CTGM", "VKH"};
  for (int d = 0; d < config.n_documents; ++d) {
    Document doc;
    doc.id = "doc" + std::to_string(d);
    doc.source = kSources[d % kSources.size()];
    for (int si = 0; si < config.sentences_per_doc; ++si) {
      Sentence s;
      if (chance(rng, config.no_lu_rate)) {
        s = filler_sentence(rng);
      } else {
        const FrameSpec& frame =
            inventory[std::uniform_int_distribution<std::size_t>(0, inventory.size() - 1)(rng)];
        const TriggerSpec& trig = pick(rng, frame.triggers);
        if (chance(rng, config.noise_rate))
          s = other_sentence(rng, trig.lemma, trig.nominal);
        else
          s = trig.nominal ? nominal_frame_sentence(rng, frame, trig.lemma)
                           : verbal_frame_sentence(rng, frame, trig.lemma);
      }
      s.source_id = doc.id + "#" + std::to_string(si);
      doc.sentences.push_back(std::move(s));
    }
    corpus.documents.push_back(std::move(doc));
  }
  validate_corpus(corpus);
  return corpus;
}

GeneratorConfig load_generator_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open generator config: " + path);
  GeneratorConfig config;
  config.frame_inventory = default_inventory();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string v) {
      const char* ws = " \t\r";
      auto b = v.find_first_not_of(ws);
      if (b == std::string::npos) return std::string();
      return v.substr(b, v.find_last_not_of(ws) - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    try {
      if (key == "seed") config.seed = std::stoull(value);
      else if (key == "n_documents") config.n_documents = std::stoi(value);
      else if (key == "sentences_per_doc") config.sentences_per_doc = std::stoi(value);
      else if (key == "ambiguity_rate") config.ambiguity_rate = std::stod(value);
      else if (key == "noise_rate") config.noise_rate = std::stod(value);
      else if (key == "no_lu_rate") config.no_lu_rate = std::stod(value);
      else if (key == "frames") {
        std::size_t n = std::stoul(value);
        if (n == 0 || n > config.frame_inventory.size())
          throw CorpusError("frames must be in [1," +
                            std::to_string(config.frame_inventory.size()) + "]");
        config.frame_inventory.resize(n);
      } else {
        throw CorpusError("unknown generator config key '" + key + "' at line " +
                          std::to_string(line_no));
      }
    } catch (const std::invalid_argument&) {
      throw CorpusError("bad value for '" + key + "' at line " + std::to_string(line_no));
    }
  }
  return config;
}

}  // namespace framekit
