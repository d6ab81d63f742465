#pragma once

// Combination rules: conjunctive, Dubois-Prade, DSmH and the proportional
// conflict redistribution family (PCR5, PCR6, PCRf, PCRg with x -> x^alpha).
//
// Every rule shares the conjunctive part. A configuration (one focal element
// per source) whose meet is empty under the target model is a conflict; each
// rule decides where its product goes:
//   conjunctive  -> the empty element
//   Dubois-Prade -> join of the responses (Theta if that join is itself empty)
//   DSmH         -> join, else join of u(Y_j), else Theta
//   PCR*         -> split among the asserted elements. Sources asserting the
//                   same element form a group whose weight is
//                     PCR5: product of masses     PCR6: sum of masses
//                     PCRf: sum of mass^alpha     PCRg: (sum of masses)^alpha
// Asserted elements that are empty under the target model take no share; if
// none is left the product goes to Theta. Zero total weight skips the term.

#include <charconv>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsmf/bba.hpp"

namespace dsmf {

enum class RuleKind { Conjunctive, DuboisPrade, DSmH, PCR5, PCR6, PCRf, PCRg };

struct RuleSpec {
  RuleKind kind = RuleKind::Conjunctive;
  double alpha = 1.0;  // PCRf / PCRg only

  static RuleSpec conjunctive() { return {RuleKind::Conjunctive}; }
  static RuleSpec dubois_prade() { return {RuleKind::DuboisPrade}; }
  static RuleSpec dsmh() { return {RuleKind::DSmH}; }
  static RuleSpec pcr5() { return {RuleKind::PCR5}; }
  static RuleSpec pcr6() { return {RuleKind::PCR6}; }
  static RuleSpec pcrf(double alpha) { return checked({RuleKind::PCRf, alpha}); }
  static RuleSpec pcrg(double alpha) { return checked({RuleKind::PCRg, alpha}); }

  // `conj`, `dp`, `dsmh`, `pcr5`, `pcr6`, `pcrf:<alpha>`, `pcrg:<alpha>`.
  static RuleSpec parse(std::string_view text) {
    if (text == "conj") return conjunctive();
    if (text == "dp") return dubois_prade();
    if (text == "dsmh") return dsmh();
    if (text == "pcr5") return pcr5();
    if (text == "pcr6") return pcr6();
    if (text.starts_with("pcrf:") || text.starts_with("pcrg:")) {
      const auto arg = text.substr(5);
      double alpha = 0.0;
      auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), alpha);
      if (ec != std::errc() || ptr != arg.data() + arg.size())
        throw ParseError("bad alpha in rule '" + std::string(text) + "'");
      return text[3] == 'f' ? pcrf(alpha) : pcrg(alpha);
    }
    throw ParseError("unknown rule '" + std::string(text) + "'");
  }

  std::string id() const {
    switch (kind) {
      case RuleKind::Conjunctive: return "conj";
      case RuleKind::DuboisPrade: return "dp";
      case RuleKind::DSmH: return "dsmh";
      case RuleKind::PCR5: return "pcr5";
      case RuleKind::PCR6: return "pcr6";
      case RuleKind::PCRf: return "pcrf:" + format_alpha();
      case RuleKind::PCRg: return "pcrg:" + format_alpha();
    }
    return "conj";
  }

  bool is_pcr() const {
    return kind == RuleKind::PCR5 || kind == RuleKind::PCR6 || kind == RuleKind::PCRf || kind == RuleKind::PCRg;
  }

 private:
  static RuleSpec checked(RuleSpec spec) {
    require(std::isfinite(spec.alpha) && spec.alpha > 0.0, "alpha must be positive");
    return spec;
  }

  std::string format_alpha() const {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, alpha);
    return std::string(buf, ptr);
  }
};

inline std::vector<RuleSpec> parse_rule_list(std::string_view text) {
  std::vector<RuleSpec> rules;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    if (!item.empty()) rules.push_back(RuleSpec::parse(item));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (rules.empty()) throw ParseError("empty rule list");
  return rules;
}

// Group weight used by the PCR variants for sources asserting the same element.
template <RuleKind Kind>
struct GroupWeight;

template <>
struct GroupWeight<RuleKind::PCR5> {
  static double apply(std::span<const double> masses, double) {
    double w = 1.0;
    for (double m : masses) w *= m;
    return w;
  }
};

template <>
struct GroupWeight<RuleKind::PCR6> {
  static double apply(std::span<const double> masses, double) {
    double w = 0.0;
    for (double m : masses) w += m;
    return w;
  }
};

template <>
struct GroupWeight<RuleKind::PCRf> {
  static double apply(std::span<const double> masses, double alpha) {
    double w = 0.0;
    for (double m : masses) w += std::pow(m, alpha);
    return w;
  }
};

template <>
struct GroupWeight<RuleKind::PCRg> {
  static double apply(std::span<const double> masses, double alpha) {
    double s = 0.0;
    for (double m : masses) s += m;
    return std::pow(s, alpha);
  }
};

inline double group_weight(const RuleSpec& rule, std::span<const double> masses) {
  switch (rule.kind) {
    case RuleKind::PCR5: return GroupWeight<RuleKind::PCR5>::apply(masses, rule.alpha);
    case RuleKind::PCR6: return GroupWeight<RuleKind::PCR6>::apply(masses, rule.alpha);
    case RuleKind::PCRf: return GroupWeight<RuleKind::PCRf>::apply(masses, rule.alpha);
    case RuleKind::PCRg: return GroupWeight<RuleKind::PCRg>::apply(masses, rule.alpha);
    default: throw ValidationError("not a PCR rule");
  }
}

namespace detail {

// Small flat accumulator; fused mass functions have few focal elements.
class MassAccumulator {
 public:
  void add(const LatticeElement& x, double mass) {
    for (auto& item : items_) {
      if (item.element == x) {
        item.mass += mass;
        return;
      }
    }
    items_.push_back({x, mass});
  }
  std::vector<FocalElement> release() { return std::move(items_); }

 private:
  std::vector<FocalElement> items_;
};

struct SourceFocal {
  LatticeElement target_reduced;
  LatticeElement u_join;  // u(Y) reduced under the target model
  double mass = 0.0;
};

struct Group {
  std::size_t representative = 0;  // source index whose element names the group
  std::vector<double> masses;
  bool empty = false;
};

}  // namespace detail

// Fuses the sources with every requested rule in one pass over the joint
// configurations. `target` may be stricter than the sources' model (e.g. free
// sources combined under a hybrid model); it defaults to the sources' model.
inline std::vector<MassFunction> combine(std::span<const MassFunction> bbas, std::span<const RuleSpec> rules,
                                         ModelRef target = nullptr) {
  const auto& input = detail::common_model(bbas);
  const auto model = detail::resolve_target(input, std::move(target));
  require(!rules.empty(), "no combination rule requested");
  for (const auto& r : rules)
    if (r.kind == RuleKind::PCRf || r.kind == RuleKind::PCRg)
      require(std::isfinite(r.alpha) && r.alpha > 0.0, "alpha must be positive");

  const Frame& frame = model->frame();
  const auto theta = model->full();
  const auto empty = LatticeElement::empty(frame);

  bool need_u = false;
  for (const auto& r : rules) need_u = need_u || r.kind == RuleKind::DSmH;

  std::vector<std::vector<detail::SourceFocal>> sources(bbas.size());
  for (std::size_t j = 0; j < bbas.size(); ++j) {
    for (const auto& f : bbas[j].focal()) {
      detail::SourceFocal s;
      s.target_reduced = model->reduce(f.element);
      s.u_join = (need_u && !f.element.is_empty()) ? model->reduce(union_decomposition(frame, f.element)) : empty;
      s.mass = f.mass;
      sources[j].push_back(std::move(s));
    }
  }

  std::vector<detail::MassAccumulator> acc(rules.size());
  std::vector<detail::Group> groups;
  std::vector<double> weights;

  detail::for_each_configuration(bbas, [&](std::span<const std::size_t> index, double product,
                                           const LatticeElement& raw_meet) {
    const auto meet_element = model->reduce(raw_meet);
    if (!meet_element.is_empty()) {
      for (auto& a : acc) a.add(meet_element, product);
      return;
    }

    // Lazily built per-configuration data shared by several rules.
    bool have_join = false, have_groups = false;
    LatticeElement join_element;
    auto responses_join = [&]() -> const LatticeElement& {
      if (!have_join) {
        join_element = sources[0][index[0]].target_reduced;
        for (std::size_t j = 1; j < index.size(); ++j)
          join_element = join(join_element, sources[j][index[j]].target_reduced);
        have_join = true;
      }
      return join_element;
    };
    auto build_groups = [&]() {
      if (have_groups) return;
      groups.clear();
      for (std::size_t j = 0; j < index.size(); ++j) {
        const auto& s = sources[j][index[j]];
        auto it = std::find_if(groups.begin(), groups.end(), [&](const detail::Group& g) {
          return sources[g.representative][index[g.representative]].target_reduced == s.target_reduced;
        });
        if (it == groups.end()) {
          groups.push_back({j, {s.mass}, s.target_reduced.is_empty()});
        } else {
          it->masses.push_back(s.mass);
        }
      }
      have_groups = true;
    };

    for (std::size_t r = 0; r < rules.size(); ++r) {
      const auto& rule = rules[r];
      switch (rule.kind) {
        case RuleKind::Conjunctive:
          acc[r].add(empty, product);
          break;
        case RuleKind::DuboisPrade: {
          const auto& u = responses_join();
          acc[r].add(u.is_empty() ? theta : u, product);
          break;
        }
        case RuleKind::DSmH: {
          const auto& u = responses_join();
          if (!u.is_empty()) {
            acc[r].add(u, product);
            break;
          }
          auto uj = sources[0][index[0]].u_join;
          for (std::size_t j = 1; j < index.size(); ++j) uj = join(uj, sources[j][index[j]].u_join);
          acc[r].add(uj.is_empty() ? theta : uj, product);
          break;
        }
        default: {
          build_groups();
          weights.assign(groups.size(), 0.0);
          double total = 0.0;
          for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].empty) continue;
            weights[g] = group_weight(rule, groups[g].masses);
            total += weights[g];
          }
          const bool any_target = std::any_of(groups.begin(), groups.end(),
                                              [](const detail::Group& g) { return !g.empty; });
          if (!any_target) {
            acc[r].add(theta, product);
            break;
          }
          if (total == 0.0) break;
          for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].empty) continue;
            const auto& element = sources[groups[g].representative][index[groups[g].representative]].target_reduced;
            acc[r].add(element, product * weights[g] / total);
          }
          break;
        }
      }
    }
  });

  std::vector<MassFunction> out;
  out.reserve(rules.size());
  for (auto& a : acc) out.push_back(MassFunction::from_reduced(model, a.release()));
  return out;
}

inline MassFunction combine(std::span<const MassFunction> bbas, const RuleSpec& rule, ModelRef target = nullptr) {
  return std::move(combine(bbas, std::span<const RuleSpec>(&rule, 1), std::move(target)).front());
}

inline MassFunction combine_conjunctive(std::span<const MassFunction> bbas, ModelRef target = nullptr) {
  return combine(bbas, RuleSpec::conjunctive(), std::move(target));
}
inline MassFunction combine_dubois_prade(std::span<const MassFunction> bbas, ModelRef target = nullptr) {
  return combine(bbas, RuleSpec::dubois_prade(), std::move(target));
}
inline MassFunction combine_dsmh(std::span<const MassFunction> bbas, ModelRef target = nullptr) {
  return combine(bbas, RuleSpec::dsmh(), std::move(target));
}
inline MassFunction combine_pcr5(std::span<const MassFunction> bbas, ModelRef target = nullptr) {
  return combine(bbas, RuleSpec::pcr5(), std::move(target));
}
inline MassFunction combine_pcr6(std::span<const MassFunction> bbas, ModelRef target = nullptr) {
  return combine(bbas, RuleSpec::pcr6(), std::move(target));
}
inline MassFunction combine_pcrf(std::span<const MassFunction> bbas, double alpha, ModelRef target = nullptr) {
  return combine(bbas, RuleSpec::pcrf(alpha), std::move(target));
}
inline MassFunction combine_pcrg(std::span<const MassFunction> bbas, double alpha, ModelRef target = nullptr) {
  return combine(bbas, RuleSpec::pcrg(alpha), std::move(target));
}

// Moves a fused mass function onto a stricter model. Mass on a focal element X
// that becomes empty is shared among the atoms whose conjunction forms X
// (the atoms of u(X)) in proportion to the mass each atom already holds; if
// those atoms hold nothing it goes to u(X), or to Theta when u(X) is empty too.
inline MassFunction transfer_to_model(const MassFunction& m, ModelRef target) {
  const auto model = detail::resolve_target(m.model_ref(), std::move(target));
  require(m.empty_mass() == 0.0, "cannot transfer a mass function with mass on the empty element");
  const Frame& frame = model->frame();
  detail::MassAccumulator acc;
  for (const auto& f : m.focal()) {
    if (!model->is_empty(f.element)) {
      acc.add(model->reduce(f.element), f.mass);
      continue;
    }
    std::uint32_t atoms = 0;
    for (auto r : minimal_regions(f.element)) atoms |= r;
    std::vector<std::pair<LatticeElement, double>> shares;
    double total = 0.0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      if (!(atoms & (std::uint32_t{1} << i))) continue;
      const auto a = LatticeElement::atom(frame, i);
      const double w = m.mass(a);
      if (w > 0.0) {
        shares.emplace_back(model->reduce(a), w);
        total += w;
      }
    }
    if (total > 0.0) {
      for (const auto& [a, w] : shares) acc.add(a, f.mass * w / total);
    } else {
      const auto u = model->reduce(union_decomposition(frame, f.element));
      acc.add(u.is_empty() ? model->full() : u, f.mass);
    }
  }
  return MassFunction::from_reduced(model, acc.release());
}

}  // namespace dsmf
