#pragma once

// Text syntax for lattice elements: atom names, `&` (meet), `|` (join),
// parentheses, `~EMPTY~` and `~THETA~`. `&` binds tighter than `|`.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "dsmf/frame.hpp"

namespace dsmf {

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(const Frame& frame, std::string_view text) : frame_(frame), text_(text) {}

  LatticeElement parse() {
    auto value = parse_union();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  LatticeElement parse_union() {
    auto value = parse_meet();
    while (consume('|')) value = join(value, parse_meet());
    return value;
  }

  LatticeElement parse_meet() {
    auto value = parse_primary();
    while (consume('&')) value = meet(value, parse_primary());
    return value;
  }

  LatticeElement parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected an element");
    if (consume('(')) {
      auto value = parse_union();
      if (!consume(')')) fail("missing ')'");
      return value;
    }
    if (text_.substr(pos_).starts_with("~EMPTY~")) {
      pos_ += 7;
      return LatticeElement::empty(frame_);
    }
    if (text_.substr(pos_).starts_with("~THETA~")) {
      pos_ += 7;
      return LatticeElement::full(frame_);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    const auto name = text_.substr(start, pos_ - start);
    auto index = frame_.index_of(name);
    if (!index) fail("unknown atom '" + std::string(name) + "'");
    return LatticeElement::atom(frame_, *index);
  }

  static bool is_name_char(char c) {
    return c != '&' && c != '|' && c != '(' && c != ')' && c != '~' &&
           !std::isspace(static_cast<unsigned char>(c));
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("element '" + std::string(text_) + "': " + msg);
  }

  const Frame& frame_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline LatticeElement parse_element(const Frame& frame, std::string_view text) {
  return detail::ExpressionParser(frame, text).parse();
}

// Atom names referenced by an expression, in order of first appearance.
inline std::vector<std::string> expression_atoms(std::string_view text) {
  std::vector<std::string> names;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '~') {
      const auto close = text.find('~', i + 1);
      i = close == std::string_view::npos ? text.size() : close + 1;
      continue;
    }
    if (c == '&' || c == '|' || c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && text[i] != '&' && text[i] != '|' && text[i] != '(' && text[i] != ')' &&
           text[i] != '~' && !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    std::string name(text.substr(start, i - start));
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(std::move(name));
  }
  return names;
}

// Disjunction of the element's minimal conjunctions, e.g. "A&B|A&C".
inline std::string format_element(const Frame& frame, const LatticeElement& x) {
  check_frame(frame, x);
  if (x.is_empty()) return "~EMPTY~";
  std::string out;
  for (auto r : minimal_regions(x)) {
    if (!out.empty()) out += '|';
    bool first = true;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      if (!(r & (std::uint32_t{1} << i))) continue;
      if (!first) out += '&';
      out += frame.name(i);
      first = false;
    }
  }
  return out;
}

// Model flag syntax: `free`, `shafer`, or `hybrid:<expr>,<expr>,...` listing
// elements declared empty.
inline ModelRef parse_model(FrameRef frame, std::string_view spec) {
  if (spec == "free") return ConstraintModel::free(std::move(frame));
  if (spec == "shafer") return ConstraintModel::shafer(std::move(frame));
  if (spec.starts_with("hybrid:")) {
    std::vector<LatticeElement> empties;
    auto rest = spec.substr(7);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      if (!item.empty()) empties.push_back(parse_element(*frame, item));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (empties.empty()) throw ParseError("hybrid model needs at least one empty element");
    return ConstraintModel::hybrid(std::move(frame), std::move(empties));
  }
  throw ParseError("unknown model '" + std::string(spec) + "' (expected free, shafer or hybrid:<list>)");
}

inline std::string model_id(const ConstraintModel& model) {
  switch (model.kind()) {
    case ModelKind::Free:
      return "free";
    case ModelKind::Shafer:
      return "shafer";
    case ModelKind::Hybrid: {
      std::string out = "hybrid:";
      bool first = true;
      for (const auto& e : model.declared_empty()) {
        if (!first) out += ',';
        out += format_element(model.frame(), e);
        first = false;
      }
      return out;
    }
  }
  return "free";
}

}  // namespace dsmf
