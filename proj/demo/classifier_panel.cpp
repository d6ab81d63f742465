// Three calibrated classifiers on a synthetic ten-class panel, fused with the
// rule family and compared over repeated random test splits.

#include <cstdlib>
#include <iostream>

#include "dsmf/dsmf.hpp"

int main(int argc, char** argv) {
  using namespace dsmf;
  ExperimentConfig c;
  c.source = SourceKind::Classifier;
  ClassifierPanelSpec panel;
  panel.signals_per_class = 30;
  c.synthetic_classifiers = panel;
  c.rules = parse_rule_list("conj,dp,pcrf:0.5,pcrg:0.5,pcr6,pcrg:2,pcrf:2,pcr5");
  c.trials = argc > 1 ? static_cast<std::size_t>(std::strtoul(argv[1], nullptr, 10)) : 100;
  c.seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
  c.keep_instances = false;
  try {
    std::cout << format_report_text(run_experiment(c));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
