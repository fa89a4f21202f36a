#ifndef FRAMEKIT_BIO_HPP
#define FRAMEKIT_BIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "framekit/corpus.hpp"

namespace framekit {

enum class LabelKind { Outside, Lu, Begin, Inside };

// One per-token label of a B/I/O column. For Begin/Inside labels `trigger`
// carries the link to the LU; -1 means no link (raw tagger output).
struct Label {
  LabelKind kind = LabelKind::Outside;
  std::string frame;
  std::string role;
  int trigger = -1;

  bool operator==(const Label&) const = default;

  static Label outside() { return {}; }
  static Label lu(std::string frame) { return {LabelKind::Lu, std::move(frame), "", -1}; }
  static Label begin(std::string frame, std::string role, int trigger) {
    return {LabelKind::Begin, std::move(frame), std::move(role), trigger};
  }
  static Label inside(std::string frame, std::string role, int trigger) {
    return {LabelKind::Inside, std::move(frame), std::move(role), trigger};
  }

  // True when two labels describe the same segment (frame, role, link).
  bool same_segment(const Label& o) const {
    return frame == o.frame && role == o.role && trigger == o.trigger;
  }
};

// "O" | "LU:<Frame>" | "B:<Frame>:<Role>:<TriggerIdx>" | "I:...".
std::string format_label(const Label& l);
Label parse_label(const std::string& text);

struct LabelColumn {
  std::vector<Label> labels;  // one per token

  int size() const { return static_cast<int>(labels.size()); }
  bool operator==(const LabelColumn&) const = default;
};

LabelColumn encode_bio(const Sentence& sentence, const FrameInstance& instance);

enum class DecodeMode { Strict, Lenient };

// Inverse of encode_bio. Returns nothing for an all-O column. In strict mode
// an I label with no matching opener throws EncodingError; in lenient mode the
// offending segment is dropped.
std::optional<FrameInstance> decode_bio(const Sentence& sentence, const LabelColumn& column,
                                        DecodeMode mode = DecodeMode::Strict);

// Display abbreviations (e.g. Deciding -> Dec, Cognizer -> Cogn). Only B/I
// components are abbreviated; LU labels keep the full frame name.
struct NameAbbrev {
  std::map<std::string, std::string> frames;
  std::map<std::string, std::string> roles;

  std::string frame(const std::string& full) const;
  std::string role(const std::string& full) const;
};

std::string render_label(const Label& l, const NameAbbrev& abbrev);

// Tab-separated block: one row per token (index, surface, one column per
// frame instance), O for empty cells.
std::string export_table(const Sentence& sentence, const NameAbbrev& abbrev = {});

}  // namespace framekit

#endif
