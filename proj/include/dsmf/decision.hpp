#pragma once

// Credibility, plausibility and pignistic probability. With regions counted by
// dsm_cardinality the same formulas give the classical bel/pl/betP under the
// Shafer model and the generalized Bel/Pl/GPT on D^Theta.

#include <string>
#include <string_view>
#include <vector>

#include "dsmf/bba.hpp"

namespace dsmf {

namespace detail {
inline LatticeElement decision_argument(const MassFunction& m, const LatticeElement& x) {
  check_frame(m.frame(), x);
  require(!m.model().is_empty(x), "decision functional evaluated on an empty element");
  return m.model().reduce(x);
}
}  // namespace detail

inline double credibility(const MassFunction& m, const LatticeElement& x) {
  const auto key = detail::decision_argument(m, x);
  double s = 0.0;
  for (const auto& f : m.focal())
    if (!f.element.is_empty() && f.element.subset_of(key)) s += f.mass;
  return s;
}

inline double plausibility(const MassFunction& m, const LatticeElement& x) {
  const auto key = detail::decision_argument(m, x);
  double s = 0.0;
  for (const auto& f : m.focal())
    if (f.element.intersects(key)) s += f.mass;
  return s;
}

// Mass on the empty element (raw conjunctive output) is renormalized away.
inline double pignistic(const MassFunction& m, const LatticeElement& x) {
  const auto key = detail::decision_argument(m, x);
  const double empty = m.empty_mass();
  require(empty < 1.0, "pignistic probability undefined: all mass on the empty element");
  double s = 0.0;
  for (const auto& f : m.focal()) {
    if (f.element.is_empty()) continue;
    s += f.mass * static_cast<double>(f.element.meet_size(key)) / static_cast<double>(f.element.size());
  }
  return s / (1.0 - empty);
}

enum class Functional { Credibility, Plausibility, Pignistic, MaxMass };
enum class Candidates { SingletonsOnly, AllNonEmpty };

struct DecisionPolicy {
  Functional functional = Functional::Pignistic;
  Candidates candidates = Candidates::SingletonsOnly;

  // `<bel|pl|betp|maxmass>[:<singletons|all>]`, candidates default to singletons.
  static DecisionPolicy parse(std::string_view text) {
    DecisionPolicy p;
    const auto colon = text.find(':');
    const auto fn = text.substr(0, colon);
    if (fn == "bel") p.functional = Functional::Credibility;
    else if (fn == "pl") p.functional = Functional::Plausibility;
    else if (fn == "betp") p.functional = Functional::Pignistic;
    else if (fn == "maxmass") p.functional = Functional::MaxMass;
    else throw ParseError("unknown decision functional '" + std::string(fn) + "'");
    if (colon != std::string_view::npos) {
      const auto c = text.substr(colon + 1);
      if (c == "singletons") p.candidates = Candidates::SingletonsOnly;
      else if (c == "all") p.candidates = Candidates::AllNonEmpty;
      else throw ParseError("unknown candidate set '" + std::string(c) + "'");
    }
    return p;
  }

  std::string id() const {
    std::string fn;
    switch (functional) {
      case Functional::Credibility: fn = "bel"; break;
      case Functional::Plausibility: fn = "pl"; break;
      case Functional::Pignistic: fn = "betp"; break;
      case Functional::MaxMass: fn = "maxmass"; break;
    }
    return fn + (candidates == Candidates::SingletonsOnly ? ":singletons" : ":all");
  }
};

inline double evaluate(const MassFunction& m, const LatticeElement& x, Functional functional) {
  switch (functional) {
    case Functional::Credibility: return credibility(m, x);
    case Functional::Plausibility: return plausibility(m, x);
    case Functional::Pignistic: return pignistic(m, x);
    case Functional::MaxMass: return m.mass(detail::decision_argument(m, x));
  }
  return 0.0;
}

// Distinct non-empty elements under the model, reduced, in canonical order.
// AllNonEmpty walks D^Theta for frames up to five atoms and 2^Theta beyond.
inline std::vector<LatticeElement> candidate_set(const ConstraintModel& model, Candidates candidates) {
  const Frame& frame = model.frame();
  std::vector<LatticeElement> raw;
  if (candidates == Candidates::SingletonsOnly) {
    for (std::size_t i = 0; i < frame.size(); ++i) raw.push_back(LatticeElement::atom(frame, i));
  } else {
    raw = frame.size() <= Frame::kMaxLatticeAtoms ? enumerate_dsm_lattice(frame) : enumerate_power_set(frame);
  }
  std::vector<LatticeElement> out;
  for (const auto& x : raw) {
    if (model.is_empty(x)) continue;
    auto r = model.reduce(x);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

// Ties (within 1e-12) resolve to the earliest candidate in canonical order.
inline constexpr double kTieTolerance = 1e-12;

inline LatticeElement decide(const MassFunction& m, Functional functional,
                             std::span<const LatticeElement> candidates) {
  require(!candidates.empty(), "empty candidate set");
  std::size_t best = 0;
  double best_score = evaluate(m, candidates[0], functional);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double s = evaluate(m, candidates[i], functional);
    if (s > best_score + kTieTolerance) {
      best = i;
      best_score = s;
    }
  }
  return candidates[best];
}

inline LatticeElement decide(const MassFunction& m, const DecisionPolicy& policy) {
  const auto candidates = candidate_set(m.model(), policy.candidates);
  return decide(m, policy.functional, candidates);
}

}  // namespace dsmf
