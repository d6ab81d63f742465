// Two experts describe one tile: expert 1 sees class A and is moderately
// sure (0.6); expert 2 sees A on 60% and B on 40% of the tile, not sure
// (0.5). Prints the fused masses and bel / pl / betP under each expert model.

#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "dsmf/dsmf.hpp"

using namespace dsmf;

namespace {

void table(const std::string& title, const MassFunction& m, std::vector<LatticeElement> classes = {}) {
  const Frame& f = m.model().frame();
  std::cout << "\n" << title << "\n  element\tmass\tbel\tpl\tbetP\n" << std::fixed << std::setprecision(4);
  if (m.empty_mass() > 0.0) std::cout << "  ~EMPTY~\t" << m.empty_mass() << "\n";
  for (const auto& x : candidate_set(m.model(), Candidates::AllNonEmpty))
    std::cout << "  " << format_element(f, x) << '\t' << m.mass(x) << '\t' << credibility(m, x) << '\t'
              << plausibility(m, x) << '\t' << pignistic(m, x) << '\n';
  if (classes.empty()) classes = candidate_set(m.model(), Candidates::SingletonsOnly);
  std::cout << "  decision (betP over the classes): " << format_element(f, decide(m, Functional::Pignistic, classes))
            << "\n";
}

}  // namespace

int main() {
  const auto classes = make_frame({"A", "B"});
  const TileAnnotation e1{"e1", {{"A", 1.0, 0.6}}};
  const TileAnnotation e2{"e2", {{"A", 0.6, 0.5}, {"B", 0.4, 0.5}}};

  std::vector<MassFunction> m3{model_m3(e1, *classes), model_m3(e2, *classes)};
  // Under M3, class A is A' or A+B.
  const auto fused3 = combine_conjunctive(m3);
  const Frame& f3 = fused3.model().frame();
  const auto both = LatticeElement::atom(f3, 2);
  table("M3 (A' = only A, A+B = both), conjunctive", fused3,
        {join(LatticeElement::atom(f3, 0), both), join(LatticeElement::atom(f3, 1), both)});

  std::vector<MassFunction> m4{model_m4(e1, classes), model_m4(e2, classes)};
  table("M4 on the free model, conjunctive", combine_conjunctive(m4));
  table("M4, PCR6 then A&B declared empty", transfer_to_model(combine_pcr6(m4), ConstraintModel::shafer(classes)));

  const auto shafer = ConstraintModel::shafer(classes);
  std::vector<MassFunction> m5{model_m5(e1, shafer), model_m5(e2, shafer)};
  table("M5 on the power set, conjunctive", combine_conjunctive(m5));
  table("M5 on the power set, Dubois-Prade", combine_dubois_prade(m5));
  table("M5 on the power set, PCR6", combine_pcr6(m5));
  table("M5 on the power set, PCRf with x^2", combine(m5, RuleSpec::pcrf(2.0)));

  const auto free = ConstraintModel::free(classes);
  std::vector<MassFunction> m5f{model_m5(e1, free), model_m5(e2, free)};
  table("M5 on the free model, conjunctive", combine_conjunctive(m5f));
  return 0;
}
