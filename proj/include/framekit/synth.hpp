#ifndef FRAMEKIT_SYNTH_HPP
#define FRAMEKIT_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "framekit/corpus.hpp"

namespace framekit {

struct TriggerSpec {
  std::string lemma;
  bool nominal = false;  // false: verbal trigger
};

struct FrameSpec {
  std::string name;
  std::vector<std::string> roles;
  std::vector<TriggerSpec> triggers;
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int n_documents = 10;
  int sentences_per_doc = 10;
  std::vector<FrameSpec> frame_inventory;
  double ambiguity_rate = 0.0;  // fraction of lemmas triggering >1 frame
  double noise_rate = 0.13;     // fraction of LU occurrences labeled OTHER
  double no_lu_rate = 0.2;      // fraction of sentences without any LU
};

// Five frames, twelve lexical units, verbal and nominal triggers.
std::vector<FrameSpec> default_inventory();

// Deterministic template-based corpus; gold annotations pass validation.
Corpus generate(const GeneratorConfig& config);

// "key = value" config file; unknown keys rejected. Inventory is fixed to
// default_inventory() unless a frames=<n>,<lus> override is ever needed.
GeneratorConfig load_generator_config(const std::string& path);

}  // namespace framekit

#endif
