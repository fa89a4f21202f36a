#include "framekit/bio.hpp"

#include <sstream>

namespace framekit {

std::string format_label(const Label& l) {
  switch (l.kind) {
    case LabelKind::Outside:
      return "O";
    case LabelKind::Lu:
      return "LU:" + l.frame;
    case LabelKind::Begin:
    case LabelKind::Inside: {
      std::string out = l.kind == LabelKind::Begin ? "B:" : "I:";
      out += l.frame + ":" + l.role;
      if (l.trigger >= 0) out += ":" + std::to_string(l.trigger);
      return out;
    }
  }
  return "O";
}

Label parse_label(const std::string& text) {
  if (text == "O") return Label::outside();
  auto split = [&](std::size_t from) {
    std::vector<std::string> parts;
    std::size_t pos = from;
    while (pos <= text.size()) {
      std::size_t next = text.find(':', pos);
      if (next == std::string::npos) {
        parts.push_back(text.substr(pos));
        break;
      }
      parts.push_back(text.substr(pos, next - pos));
      pos = next + 1;
    }
    return parts;
  };
  if (text.rfind("LU:", 0) == 0) {
    if (text.size() == 3) throw EncodingError("empty frame in label '" + text + "'");
    return Label::lu(text.substr(3));
  }
  if (text.rfind("B:", 0) == 0 || text.rfind("I:", 0) == 0) {
    auto parts = split(2);
    if (parts.size() != 2 && parts.size() != 3)
      throw EncodingError("malformed label '" + text + "'");
    int trigger = -1;
    if (parts.size() == 3) {
      try {
        trigger = std::stoi(parts[2]);
      } catch (const std::exception&) {
        throw EncodingError("bad trigger index in label '" + text + "'");
      }
    }
    return text[0] == 'B' ? Label::begin(parts[0], parts[1], trigger)
                          : Label::inside(parts[0], parts[1], trigger);
  }
  throw EncodingError("unrecognized label '" + text + "'");
}

LabelColumn encode_bio(const Sentence& sentence, const FrameInstance& instance) {
  const int n = sentence.size();
  if (instance.trigger < 1 || instance.trigger > n)
    throw EncodingError("trigger " + std::to_string(instance.trigger) + " out of bounds");
  LabelColumn column;
  column.labels.assign(n, Label::outside());
  column.labels[instance.trigger - 1] = Label::lu(instance.frame);
  for (std::size_t a = 0; a < instance.elements.size(); ++a) {
    const FrameElement& fe = instance.elements[a];
    if (fe.span.start > fe.span.end || fe.span.start < 1 || fe.span.end > n)
      throw EncodingError("FE " + fe.role + " span out of bounds");
    for (std::size_t b = a + 1; b < instance.elements.size(); ++b)
      if (fe.span.overlaps(instance.elements[b].span))
        throw EncodingError("overlapping FEs " + fe.role + " / " + instance.elements[b].role +
                            " within one instance");
    for (int i = fe.span.start; i <= fe.span.end; ++i) {
      if (i == instance.trigger) continue;  // the LU label wins at the trigger cell
      column.labels[i - 1] = i == fe.span.start || (i - 1 == instance.trigger &&
                                                    fe.span.start == instance.trigger)
                                 ? Label::begin(instance.frame, fe.role, instance.trigger)
                                 : Label::inside(instance.frame, fe.role, instance.trigger);
    }
  }
  return column;
}

std::optional<FrameInstance> decode_bio(const Sentence& sentence, const LabelColumn& column,
                                        DecodeMode mode) {
  if (column.size() != sentence.size())
    throw EncodingError("column length " + std::to_string(column.size()) +
                        " != sentence length " + std::to_string(sentence.size()));
  FrameInstance instance;
  instance.trigger = 0;
  for (int i = 1; i <= column.size(); ++i) {
    const Label& l = column.labels[i - 1];
    if (l.kind == LabelKind::Lu) {
      if (instance.trigger != 0) throw EncodingError("multiple LU labels in one column");
      instance.trigger = i;
      instance.frame = l.frame;
    }
  }

  std::vector<FrameElement> elements;
  int i = 1;
  while (i <= column.size()) {
    const Label& l = column.labels[i - 1];
    if (l.kind == LabelKind::Inside) {
      if (mode == DecodeMode::Strict)
        throw EncodingError("I label without opening B at token " + std::to_string(i));
      ++i;  // lenient: drop the dangling run
      continue;
    }
    if (l.kind != LabelKind::Begin) {
      ++i;
      continue;
    }
    FrameElement fe;
    fe.role = l.role;
    fe.trigger_link = l.trigger;
    fe.span.start = i;
    int j = i + 1;
    // the trigger cell may sit inside a span; skip over a matching-frame LU
    while (j <= column.size()) {
      const Label& next = column.labels[j - 1];
      if (next.kind == LabelKind::Inside && next.same_segment(l)) {
        ++j;
      } else if (next.kind == LabelKind::Lu && instance.trigger == j && j + 1 <= column.size() &&
                 column.labels[j].kind == LabelKind::Inside && column.labels[j].same_segment(l)) {
        ++j;
      } else {
        break;
      }
    }
    fe.span.end = j - 1;
    elements.push_back(std::move(fe));
    i = j;
  }

  if (instance.trigger == 0) {
    if (!elements.empty()) {
      if (mode == DecodeMode::Strict)
        throw EncodingError("column has FE segments but no LU label");
      return std::nullopt;  // lenient: unlinked segments vanish
    }
    return std::nullopt;  // all-O column
  }

  for (auto& fe : elements) {
    if (fe.trigger_link >= 0 && fe.trigger_link != instance.trigger) {
      if (mode == DecodeMode::Strict)
        throw EncodingError("FE trigger link " + std::to_string(fe.trigger_link) +
                            " != column LU position " + std::to_string(instance.trigger));
      continue;
    }
    fe.trigger_link = instance.trigger;
    instance.elements.push_back(fe);
  }
  return instance;
}

std::string NameAbbrev::frame(const std::string& full) const {
  auto it = frames.find(full);
  return it == frames.end() ? full : it->second;
}

std::string NameAbbrev::role(const std::string& full) const {
  auto it = roles.find(full);
  return it == roles.end() ? full : it->second;
}

std::string render_label(const Label& l, const NameAbbrev& abbrev) {
  switch (l.kind) {
    case LabelKind::Outside:
      return "O";
    case LabelKind::Lu:
      return "LU:" + l.frame;  // full name, as in the reference layout
    case LabelKind::Begin:
    case LabelKind::Inside: {
      std::string out = l.kind == LabelKind::Begin ? "B:" : "I:";
      out += abbrev.frame(l.frame) + ":" + abbrev.role(l.role);
      if (l.trigger >= 0) out += ":" + std::to_string(l.trigger);
      return out;
    }
  }
  return "O";
}

std::string export_table(const Sentence& sentence, const NameAbbrev& abbrev) {
  std::vector<LabelColumn> columns;
  columns.reserve(sentence.frames.size());
  for (const auto& f : sentence.frames) columns.push_back(encode_bio(sentence, f));
  std::ostringstream out;
  for (int i = 1; i <= sentence.size(); ++i) {
    out << i << '\t' << sentence.token(i).surface;
    for (const auto& col : columns) out << '\t' << render_label(col.labels[i - 1], abbrev);
    out << '\n';
  }
  return out.str();
}

}  // namespace framekit
