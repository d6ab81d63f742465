#pragma once

// File formats.
//
// BBA text: one `expression <TAB> mass` per line, one source per block, blocks
// separated by blank lines. `#` starts a comment. Optional directives:
//   @frame A,B,C               atom order (otherwise order of first appearance)
//   @instance <id> [truth=X]   starts a new fusion instance
//
// BBA records: JSON {"frame": [...], "instances": [{"id", "truth",
//   "sources": [[{"element", "mass"}, ...], ...]}]}.
//
// Annotations CSV: header `tile,expert,entries`; entries are
//   `class:proportion:certainty` joined by `;`, certainty being a level name
//   (sure, moderately_sure, not_sure) or a number.
//
// Classifier outputs CSV: header `signal,classifier,truth,<class>...`, one
//   row per (signal, classifier) with the full score vector.

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsmf/bba.hpp"
#include "dsmf/expert_models.hpp"

namespace dsmf {

struct FusionInstance {
  std::string id;
  std::vector<MassFunction> sources;
  std::optional<std::size_t> truth;  // atom index
};

struct BbaDocument {
  FrameRef frame;
  std::vector<FusionInstance> instances;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_number(std::string_view text, const std::string& context) {
  const auto t = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError(context + ": '" + t + "' is not a number");
  return value;
}

inline std::string format_mass(double m) {
  std::ostringstream os;
  os << std::setprecision(17) << m;
  return os.str();
}

struct RawSource {
  std::vector<std::pair<std::string, double>> lines;
};
struct RawInstance {
  std::string id;
  std::optional<std::string> truth;
  std::vector<RawSource> sources;
};

}  // namespace detail

// Parses BBA text. The frame comes from `frame` if given, else an @frame
// directive, else the atom names in order of first appearance. Sources are
// built under `model_spec` (see parse_model).
inline BbaDocument read_bba_text(std::istream& in, std::string_view model_spec = "free", FrameRef frame = nullptr) {
  std::vector<detail::RawInstance> raw;
  std::vector<std::string> declared_frame;
  bool open_source = false;
  std::string line;
  std::size_t line_no = 0;
  auto current = [&]() -> detail::RawInstance& {
    if (raw.empty()) raw.push_back({"1", std::nullopt, {}});
    return raw.back();
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    auto text = detail::trim(line);
    if (text.empty()) {
      open_source = false;
      continue;
    }
    if (text.front() == '#') continue;
    if (text.starts_with("@frame")) {
      declared_frame = detail::split(detail::trim(text.substr(6)), ',');
      continue;
    }
    if (text.starts_with("@instance")) {
      std::istringstream ss(text.substr(9));
      detail::RawInstance inst;
      ss >> inst.id;
      if (inst.id.empty()) inst.id = std::to_string(raw.size() + 1);
      std::string tok;
      while (ss >> tok) {
        if (!tok.starts_with("truth=")) throw ParseError(where + ": unknown instance attribute '" + tok + "'");
        inst.truth = tok.substr(6);
      }
      raw.push_back(std::move(inst));
      open_source = false;
      continue;
    }
    if (text.front() == '@') throw ParseError(where + ": unknown directive");
    auto cut = text.rfind('\t');
    if (cut == std::string::npos) cut = text.find_last_of(' ');
    if (cut == std::string::npos) throw ParseError(where + ": expected '<element> <TAB> <mass>'");
    auto expr = detail::trim(std::string_view(text).substr(0, cut));
    const double mass = detail::parse_number(std::string_view(text).substr(cut + 1), where);
    if (expr.empty()) throw ParseError(where + ": missing element");
    auto& inst = current();
    if (!open_source) {
      inst.sources.emplace_back();
      open_source = true;
    }
    inst.sources.back().lines.emplace_back(std::move(expr), mass);
  }
  if (raw.empty()) throw ParseError("no mass assignments found");

  if (!frame) {
    std::vector<std::string> names = declared_frame;
    if (names.empty()) {
      for (const auto& inst : raw)
        for (const auto& s : inst.sources)
          for (const auto& [expr, mass] : s.lines)
            for (auto& n : expression_atoms(expr))
              if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
      for (const auto& inst : raw)
        if (inst.truth && std::find(names.begin(), names.end(), *inst.truth) == names.end())
          names.push_back(*inst.truth);
    }
    if (names.empty()) throw ParseError("cannot infer the frame: no atom names");
    frame = make_frame(std::move(names));
  }
  const auto model = parse_model(frame, model_spec);

  BbaDocument doc{frame, {}};
  for (auto& inst : raw) {
    FusionInstance out{inst.id, {}, std::nullopt};
    if (inst.truth) {
      const auto idx = frame->index_of(*inst.truth);
      if (!idx) throw ParseError("instance " + inst.id + ": truth '" + *inst.truth + "' is not an atom");
      out.truth = idx;
    }
    for (const auto& s : inst.sources) {
      std::vector<FocalElement> items;
      for (const auto& [expr, mass] : s.lines) items.push_back({parse_element(*frame, expr), mass});
      out.sources.push_back(make_bba(model, std::move(items)));
    }
    doc.instances.push_back(std::move(out));
  }
  return doc;
}

inline BbaDocument read_bba_text(const std::string& text, std::string_view model_spec = "free",
                                 FrameRef frame = nullptr) {
  std::istringstream in(text);
  return read_bba_text(in, model_spec, std::move(frame));
}

inline void write_bba_text(std::ostream& out, const BbaDocument& doc) {
  out << "@frame ";
  for (std::size_t i = 0; i < doc.frame->size(); ++i) out << (i ? "," : "") << doc.frame->name(i);
  out << '\n';
  for (const auto& inst : doc.instances) {
    out << "\n@instance " << inst.id;
    if (inst.truth) out << " truth=" << doc.frame->name(*inst.truth);
    out << '\n';
    for (std::size_t s = 0; s < inst.sources.size(); ++s) {
      if (s) out << '\n';
      for (const auto& f : inst.sources[s].focal())
        out << format_element(*doc.frame, f.element) << '\t' << detail::format_mass(f.mass) << '\n';
    }
  }
}

inline nlohmann::ordered_json bba_to_json(const MassFunction& m) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : m.focal())
    arr.push_back({{"element", format_element(m.frame(), f.element)}, {"mass", f.mass}});
  return arr;
}

inline nlohmann::ordered_json bba_document_to_json(const BbaDocument& doc) {
  nlohmann::ordered_json j;
  j["frame"] = doc.frame->atoms();
  auto instances = nlohmann::ordered_json::array();
  for (const auto& inst : doc.instances) {
    nlohmann::ordered_json ji;
    ji["id"] = inst.id;
    if (inst.truth) ji["truth"] = doc.frame->name(*inst.truth);
    auto sources = nlohmann::ordered_json::array();
    for (const auto& s : inst.sources) sources.push_back(bba_to_json(s));
    ji["sources"] = std::move(sources);
    instances.push_back(std::move(ji));
  }
  j["instances"] = std::move(instances);
  return j;
}

inline BbaDocument read_bba_records(std::istream& in, std::string_view model_spec = "free") {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("BBA records: ") + e.what());
  }
  try {
    auto frame = make_frame(j.at("frame").get<std::vector<std::string>>());
    const auto model = parse_model(frame, model_spec);
    BbaDocument doc{frame, {}};
    for (const auto& ji : j.at("instances")) {
      FusionInstance inst{ji.value("id", std::to_string(doc.instances.size() + 1)), {}, std::nullopt};
      if (ji.contains("truth")) {
        const auto t = ji.at("truth").get<std::string>();
        inst.truth = frame->index_of(t);
        if (!inst.truth) throw ParseError("truth '" + t + "' is not an atom");
      }
      for (const auto& js : ji.at("sources")) {
        std::vector<FocalElement> items;
        for (const auto& jf : js)
          items.push_back({parse_element(*frame, jf.at("element").get<std::string>()), jf.at("mass").get<double>()});
        inst.sources.push_back(make_bba(model, std::move(items)));
      }
      doc.instances.push_back(std::move(inst));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("BBA records: ") + e.what());
  }
}

// --- annotations ----------------------------------------------------------

struct AnnotationRecord {
  std::string tile;
  TileAnnotation annotation;
};

inline std::vector<AnnotationRecord> read_annotations_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("annotations: empty input");
  const auto header = detail::split(line, ',');
  if (header != std::vector<std::string>{"tile", "expert", "entries"})
    throw ParseError("annotations: header must be 'tile,expert,entries'");
  std::vector<AnnotationRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::string where = "annotations line " + std::to_string(line_no);
    const auto cols = detail::split(line, ',');
    if (cols.size() != 3) throw ParseError(where + ": expected 3 columns");
    AnnotationRecord rec{cols[0], {cols[1], {}}};
    if (!cols[2].empty()) {
      for (const auto& item : detail::split(cols[2], ';')) {
        const auto parts = detail::split(item, ':');
        if (parts.size() != 3) throw ParseError(where + ": entry '" + item + "' is not class:proportion:certainty");
        AnnotationEntry e{parts[0], detail::parse_number(parts[1], where), CertaintyLevel::Sure};
        if (!parts[2].empty() && (std::isdigit(static_cast<unsigned char>(parts[2][0])) || parts[2][0] == '.'))
          e.certainty = detail::parse_number(parts[2], where);
        else
          e.certainty = parse_certainty_level(parts[2]);
        rec.annotation.entries.push_back(std::move(e));
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

inline void write_annotations_csv(std::ostream& out, const std::vector<AnnotationRecord>& records) {
  out << "tile,expert,entries\n";
  for (const auto& r : records) {
    out << r.tile << ',' << r.annotation.expert_id << ',';
    for (std::size_t i = 0; i < r.annotation.entries.size(); ++i) {
      const auto& e = r.annotation.entries[i];
      out << (i ? ";" : "") << e.cls << ':' << detail::format_mass(e.proportion) << ':';
      if (const auto* level = std::get_if<CertaintyLevel>(&e.certainty))
        out << certainty_level_name(*level);
      else
        out << detail::format_mass(std::get<double>(e.certainty));
    }
    out << '\n';
  }
}

// --- classifier outputs ---------------------------------------------------

struct ClassifierRecord {
  std::string signal;
  std::string classifier;
  std::optional<std::size_t> truth;
  std::vector<double> scores;
};

struct ClassifierTable {
  FrameRef frame;
  std::vector<ClassifierRecord> records;
};

inline ClassifierTable read_classifier_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("classifier outputs: empty input");
  const auto header = detail::split(line, ',');
  if (header.size() < 4 || header[0] != "signal" || header[1] != "classifier" || header[2] != "truth")
    throw ParseError("classifier outputs: header must be 'signal,classifier,truth,<class>...'");
  ClassifierTable table{make_frame(std::vector<std::string>(header.begin() + 3, header.end())), {}};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::string where = "classifier outputs line " + std::to_string(line_no);
    const auto cols = detail::split(line, ',');
    if (cols.size() != header.size()) throw ParseError(where + ": wrong column count");
    ClassifierRecord rec{cols[0], cols[1], std::nullopt, {}};
    if (!cols[2].empty()) {
      rec.truth = table.frame->index_of(cols[2]);
      if (!rec.truth) throw ParseError(where + ": truth '" + cols[2] + "' is not a class");
    }
    for (std::size_t c = 3; c < cols.size(); ++c) rec.scores.push_back(detail::parse_number(cols[c], where));
    table.records.push_back(std::move(rec));
  }
  return table;
}

inline void write_classifier_csv(std::ostream& out, const ClassifierTable& table) {
  out << "signal,classifier,truth";
  for (const auto& n : table.frame->atoms()) out << ',' << n;
  out << '\n';
  for (const auto& r : table.records) {
    out << r.signal << ',' << r.classifier << ',' << (r.truth ? table.frame->name(*r.truth) : "");
    for (double s : r.scores) out << ',' << detail::format_mass(s);
    out << '\n';
  }
}

}  // namespace dsmf
