#pragma once

// Experiment engine: builds fusion instances from BBA files, expert
// annotations or classifier outputs (read or generated), fuses every instance
// with every configured rule, decides, and aggregates conflict, divergence and
// accuracy statistics.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsmf/decision.hpp"
#include "dsmf/expert_models.hpp"
#include "dsmf/generator.hpp"
#include "dsmf/io.hpp"
#include "dsmf/rules.hpp"
#include "dsmf/statistics.hpp"

namespace dsmf {

enum class SourceKind { Bba, M3, M4, M5, M5Generalized, Classifier };

inline SourceKind parse_source_kind(std::string_view text) {
  if (text == "bba") return SourceKind::Bba;
  if (text == "m3") return SourceKind::M3;
  if (text == "m4") return SourceKind::M4;
  if (text == "m5") return SourceKind::M5;
  if (text == "m5g") return SourceKind::M5Generalized;
  if (text == "classifier") return SourceKind::Classifier;
  throw ParseError("unknown expert model '" + std::string(text) + "'");
}

struct ExperimentConfig {
  std::vector<std::string> frame;    // optional for files that name their classes
  std::string model = "shafer";      // model the fusion runs under
  std::string source_model;          // model the sources are expressed in; empty = model
  SourceKind source = SourceKind::Bba;
  std::vector<RuleSpec> rules{RuleSpec::conjunctive(), RuleSpec::dubois_prade(), RuleSpec::pcr6()};
  DecisionPolicy decision;
  std::optional<std::string> data_path;
  std::string data_format = "text";  // text | records, for BBA files
  std::optional<AnnotationPanelSpec> synthetic_annotations;
  std::optional<ClassifierPanelSpec> synthetic_classifiers;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  double split = 2.0 / 3.0;  // training share; each trial evaluates the rest
  bool reshuffle_calibration = true;
  CertaintyWeights weights;
  CalibrationSettings calibration;
  bool keep_instances = true;  // per-instance detail of the first trial
  std::size_t threads = 0;     // 0 = hardware concurrency

  void validate() const {
    require(!rules.empty(), "experiment needs at least one rule");
    require(trials >= 1, "trial count must be at least 1");
    require(split > 0.0 && split < 1.0, "split ratio must lie in (0, 1)");
    const int sources = (data_path ? 1 : 0) + (synthetic_annotations ? 1 : 0) + (synthetic_classifiers ? 1 : 0);
    require(sources == 1, "experiment needs exactly one data source (file or synthetic generator)");
    if (synthetic_classifiers) require(source == SourceKind::Classifier, "synthetic classifiers need the classifier model");
    if (synthetic_annotations)
      require(source != SourceKind::Bba && source != SourceKind::Classifier,
              "synthetic annotations need an annotation model (m3, m4, m5, m5g)");
    weights.validate();
  }
};

struct InstanceReport {
  std::string id;
  std::optional<std::size_t> truth;
  double conflict = 0.0;
  std::vector<MassFunction> fused;          // per rule
  std::vector<LatticeElement> decisions;    // per rule
};

struct FusionReport {
  FrameRef frame;
  std::string model;
  std::string decision_policy;
  std::vector<std::string> rule_ids;
  std::vector<std::string> source_ids;
  std::vector<std::string> class_names;  // names of the truth labels
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t instances_evaluated = 0;  // summed over trials
  double total_conflict = 0.0;          // mean over evaluated instances
  std::vector<double> auto_conflict;    // per source, order = number of sources
  Matrix divergence;                    // percent
  std::optional<std::vector<AccuracyInterval>> accuracy;
  std::vector<InstanceReport> instances;
  std::string ci_method = "normal approximation over per-trial rates, 95%";
};

namespace detail {

struct TrialOutcome {
  DivergenceTally tally{0};
  std::vector<std::size_t> correct;  // per rule
  std::size_t evaluated = 0;
  std::size_t with_truth = 0;
  double conflict_sum = 0.0;
  std::vector<double> auto_conflict_sum;
  std::vector<InstanceReport> instances;
};

struct FusionSetup {
  ModelRef target;
  std::vector<RuleSpec> rules;
  DecisionPolicy decision;
  std::vector<LatticeElement> candidates;
  std::vector<LatticeElement> truth_elements;  // reduced atoms
  std::vector<std::string> class_names;
};

// `class_images` maps each class to an element of the target frame when the
// two differ (M3); singleton decisions then choose among those images.
inline FusionSetup make_setup(const ExperimentConfig& config, ModelRef target,
                              const std::vector<LatticeElement>& class_images = {}) {
  FusionSetup s{target, config.rules, config.decision, candidate_set(*target, config.decision.candidates), {}, {}};
  if (!class_images.empty()) {
    for (const auto& x : class_images) s.truth_elements.push_back(target->reduce(x));
    if (config.decision.candidates == Candidates::SingletonsOnly) s.candidates = s.truth_elements;
    return s;
  }
  for (std::size_t i = 0; i < target->frame().size(); ++i)
    s.truth_elements.push_back(target->reduce(LatticeElement::atom(target->frame(), i)));
  return s;
}

// Fuses one instance with every rule and records it in the trial outcome.
inline void evaluate_instance(const FusionSetup& setup, const FusionInstance& inst, bool keep, TrialOutcome& out,
                              std::vector<std::vector<LatticeElement>>& decisions) {
  const auto fused = combine(inst.sources, setup.rules, setup.target);
  const double conflict = total_conflict(inst.sources, setup.target);
  out.conflict_sum += conflict;
  const int order = static_cast<int>(inst.sources.size());
  if (out.auto_conflict_sum.size() < inst.sources.size()) out.auto_conflict_sum.resize(inst.sources.size(), 0.0);
  for (std::size_t j = 0; j < inst.sources.size(); ++j) {
    std::vector<MassFunction> copies(static_cast<std::size_t>(order), inst.sources[j]);
    out.auto_conflict_sum[j] += total_conflict(copies, setup.target);
  }
  InstanceReport report{inst.id, inst.truth, conflict, {}, {}};
  for (std::size_t r = 0; r < fused.size(); ++r) {
    auto d = decide(fused[r], setup.decision.functional, setup.candidates);
    if (inst.truth && d == setup.truth_elements[*inst.truth]) ++out.correct[r];
    decisions[r].push_back(d);
    if (keep) report.decisions.push_back(std::move(d));
  }
  ++out.evaluated;
  if (inst.truth) ++out.with_truth;
  if (keep) {
    report.fused = fused;
    out.instances.push_back(std::move(report));
  }
}

inline TrialOutcome new_outcome(std::size_t rules) {
  TrialOutcome o;
  o.tally = DivergenceTally(rules);
  o.correct.assign(rules, 0);
  return o;
}

// Runs `trials` independent work units, possibly in parallel; results are
// stored by trial index so aggregation order never depends on scheduling.
template <class Fn>
std::vector<TrialOutcome> run_trials(std::size_t trials, std::size_t threads, Fn&& fn) {
  std::vector<TrialOutcome> outcomes(trials);
  std::size_t workers = threads ? threads : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, trials);
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) outcomes[t] = fn(t);
    return outcomes;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < trials; t += workers) outcomes[t] = fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return outcomes;
}

inline std::vector<std::size_t> test_indices(std::size_t n, std::size_t trial, const ExperimentConfig& config,
                                             std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (config.trials == 1 && trial == 0) return idx;
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround((1.0 - config.split) * static_cast<double>(n))));
  idx.resize(std::min(keep, n));
  return idx;
}

inline FusionReport aggregate(const ExperimentConfig& config, const FusionSetup& setup,
                              std::vector<std::string> source_ids, std::vector<TrialOutcome> outcomes) {
  FusionReport report;
  report.frame = setup.target->frame_ref();
  report.model = model_id(*setup.target);
  report.decision_policy = config.decision.id();
  for (const auto& r : config.rules) report.rule_ids.push_back(r.id());
  report.source_ids = std::move(source_ids);
  report.class_names = setup.class_names.empty() ? report.frame->atoms() : setup.class_names;
  report.seed = config.seed;
  report.trials = config.trials;

  DivergenceTally tally(config.rules.size());
  double conflict = 0.0;
  std::vector<double> auto_sum;
  bool all_truth = true;
  std::vector<std::vector<double>> rates(config.rules.size());
  for (auto& o : outcomes) {
    tally.merge(o.tally);
    conflict += o.conflict_sum;
    if (auto_sum.size() < o.auto_conflict_sum.size()) auto_sum.resize(o.auto_conflict_sum.size(), 0.0);
    for (std::size_t j = 0; j < o.auto_conflict_sum.size(); ++j) auto_sum[j] += o.auto_conflict_sum[j];
    report.instances_evaluated += o.evaluated;
    all_truth = all_truth && o.evaluated > 0 && o.with_truth == o.evaluated;
    for (std::size_t r = 0; r < config.rules.size(); ++r)
      if (o.evaluated > 0)
        rates[r].push_back(100.0 * static_cast<double>(o.correct[r]) / static_cast<double>(o.evaluated));
  }
  require(report.instances_evaluated > 0, "dataset is empty");
  const double n = static_cast<double>(report.instances_evaluated);
  report.total_conflict = conflict / n;
  for (double s : auto_sum) report.auto_conflict.push_back(s / n);
  report.divergence = tally.percent();
  if (all_truth) {
    std::vector<AccuracyInterval> acc;
    for (const auto& r : rates) acc.push_back(accuracy_with_ci(r));
    report.accuracy = std::move(acc);
  }
  if (!outcomes.empty()) report.instances = std::move(outcomes.front().instances);
  return report;
}

}  // namespace detail

// Fuses a fixed set of instances. With one trial every instance is evaluated;
// otherwise each trial evaluates a fresh random (1 - split) share.
inline FusionReport run_instances(const ExperimentConfig& config, ModelRef target,
                                  const std::vector<FusionInstance>& instances, std::vector<std::string> source_ids = {},
                                  const std::vector<LatticeElement>& class_images = {},
                                  std::vector<std::string> class_names = {}) {
  require(!instances.empty(), "dataset is empty");
  auto setup = detail::make_setup(config, std::move(target), class_images);
  setup.class_names = std::move(class_names);
  auto outcomes = detail::run_trials(config.trials, config.threads, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(config.seed, 1000 + t));
    auto out = detail::new_outcome(config.rules.size());
    std::vector<std::vector<LatticeElement>> decisions(config.rules.size());
    for (auto i : detail::test_indices(instances.size(), t, config, rng))
      detail::evaluate_instance(setup, instances[i], config.keep_instances && t == 0, out, decisions);
    out.tally.add(std::span<const std::vector<LatticeElement>>(decisions));
    return out;
  });
  if (source_ids.empty() && !instances.empty())
    for (std::size_t j = 0; j < instances.front().sources.size(); ++j) source_ids.push_back("s" + std::to_string(j + 1));
  return detail::aggregate(config, setup, std::move(source_ids), std::move(outcomes));
}

// Classifier protocol: per trial, choose the test signals, stream them (in a
// shuffled order when reshuffle_calibration is set) through a fresh
// calibration per classifier, and fuse the calibrated sources of each signal.
inline FusionReport run_classifier_protocol(const ExperimentConfig& config, const ClassifierTable& table) {
  const auto frame = table.frame;
  const auto target = parse_model(frame, config.model);
  const auto source_model = config.source_model.empty() ? target : parse_model(frame, config.source_model);
  require(target->refines(*source_model), "target model must be at least as strict as the source model");

  // Group records by signal, classifiers in order of first appearance.
  std::vector<std::string> classifiers;
  std::vector<std::string> signals;
  std::map<std::string, std::size_t> signal_index;
  for (const auto& r : table.records) {
    if (std::find(classifiers.begin(), classifiers.end(), r.classifier) == classifiers.end())
      classifiers.push_back(r.classifier);
    if (signal_index.emplace(r.signal, signals.size()).second) signals.push_back(r.signal);
  }
  require(classifiers.size() >= 2, "classifier fusion needs at least two classifiers");
  std::vector<std::vector<const ClassifierRecord*>> grid(signals.size(),
                                                         std::vector<const ClassifierRecord*>(classifiers.size()));
  for (const auto& r : table.records) {
    const auto c = static_cast<std::size_t>(
        std::find(classifiers.begin(), classifiers.end(), r.classifier) - classifiers.begin());
    auto& slot = grid[signal_index[r.signal]][c];
    require(slot == nullptr, "duplicate record for signal '" + r.signal + "' and classifier '" + r.classifier + "'");
    slot = &r;
  }
  for (std::size_t s = 0; s < signals.size(); ++s)
    for (std::size_t c = 0; c < classifiers.size(); ++c)
      require(grid[s][c] != nullptr, "signal '" + signals[s] + "' lacks classifier '" + classifiers[c] + "'");

  const auto setup = detail::make_setup(config, target);
  auto outcomes = detail::run_trials(config.trials, config.threads, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(config.seed, 1000 + t));
    auto idx = detail::test_indices(signals.size(), t, config, rng);
    if (!config.reshuffle_calibration) std::sort(idx.begin(), idx.end());
    std::vector<ClassifierCalibration> calibrations;
    for (std::size_t c = 0; c < classifiers.size(); ++c) calibrations.emplace_back(source_model, config.calibration);
    auto out = detail::new_outcome(config.rules.size());
    std::vector<std::vector<LatticeElement>> decisions(config.rules.size());
    for (auto s : idx) {
      FusionInstance inst{signals[s], {}, grid[s][0]->truth};
      for (std::size_t c = 0; c < classifiers.size(); ++c)
        inst.sources.push_back(calibrations[c].calibrate(grid[s][c]->scores));
      detail::evaluate_instance(setup, inst, config.keep_instances && t == 0, out, decisions);
    }
    out.tally.add(std::span<const std::vector<LatticeElement>>(decisions));
    return out;
  });
  return detail::aggregate(config, setup, classifiers, std::move(outcomes));
}

// Builds one instance per tile from annotation records; experts missing on a
// tile contribute a vacuous source.
inline FusionReport run_annotations(const ExperimentConfig& config, FrameRef classes,
                                    const std::vector<AnnotationRecord>& records,
                                    const std::vector<std::size_t>* truth = nullptr) {
  ModelRef source_model;
  ModelRef target;
  switch (config.source) {
    case SourceKind::M3:
      source_model = m3_model(*classes);
      target = source_model;
      break;
    case SourceKind::M4:
      source_model = ConstraintModel::free(classes);
      target = parse_model(classes, config.model);
      break;
    default:
      target = parse_model(classes, config.model);
      source_model = config.source_model.empty() ? target : parse_model(classes, config.source_model);
      break;
  }
  require(target->refines(*source_model), "target model must be at least as strict as the source model");

  std::vector<std::string> experts;
  std::vector<std::string> tiles;
  std::map<std::string, std::size_t> tile_index;
  for (const auto& r : records) {
    if (std::find(experts.begin(), experts.end(), r.annotation.expert_id) == experts.end())
      experts.push_back(r.annotation.expert_id);
    if (tile_index.emplace(r.tile, tiles.size()).second) tiles.push_back(r.tile);
  }
  require(experts.size() >= 2, "annotation fusion needs at least two experts");
  if (truth) require(truth->size() == tiles.size(), "truth labels do not match the tiles");

  std::vector<FusionInstance> instances(tiles.size());
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    instances[t].id = tiles[t];
    instances[t].sources.assign(experts.size(), vacuous_bba(source_model));
    if (truth) instances[t].truth = (*truth)[t];
  }
  std::vector<std::vector<bool>> seen(tiles.size(), std::vector<bool>(experts.size(), false));
  for (const auto& r : records) {
    const auto t = tile_index[r.tile];
    const auto e = static_cast<std::size_t>(
        std::find(experts.begin(), experts.end(), r.annotation.expert_id) - experts.begin());
    require(!seen[t][e], "duplicate annotation for tile '" + r.tile + "' and expert '" + experts[e] + "'");
    seen[t][e] = true;
    auto& slot = instances[t].sources[e];
    switch (config.source) {
      case SourceKind::M3: slot = model_m3(r.annotation, *classes, config.weights); break;
      case SourceKind::M4: slot = model_m4(r.annotation, classes, config.weights); break;
      case SourceKind::M5: slot = model_m5(r.annotation, source_model, config.weights); break;
      case SourceKind::M5Generalized:
        slot = model_m5_generalized(r.annotation, config.weights, source_model);
        break;
      default: throw ValidationError("annotation data needs an annotation model (m3, m4, m5, m5g)");
    }
  }
  std::vector<LatticeElement> images;
  if (config.source == SourceKind::M3) {
    // Class A is A' or A+B, class B is B' or A+B.
    const Frame& f = target->frame();
    const auto both = LatticeElement::atom(f, 2);
    images = {join(LatticeElement::atom(f, 0), both), join(LatticeElement::atom(f, 1), both)};
  }
  return run_instances(config, target, instances, experts, images, images.empty() ? std::vector<std::string>{} : classes->atoms());
}

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("frame")) c.frame = j.at("frame").get<std::vector<std::string>>();
    c.model = j.value("model", c.model);
    c.source_model = j.value("source_model", c.source_model);
    c.source = parse_source_kind(j.value("expert_model", std::string("bba")));
    if (j.contains("rules")) {
      c.rules.clear();
      for (const auto& r : j.at("rules")) c.rules.push_back(RuleSpec::parse(r.get<std::string>()));
    }
    if (j.contains("decision")) c.decision = DecisionPolicy::parse(j.at("decision").get<std::string>());
    if (j.contains("data")) {
      const auto& d = j.at("data");
      if (d.contains("path")) c.data_path = d.at("path").get<std::string>();
      c.data_format = d.value("format", c.data_format);
      if (d.contains("synthetic")) {
        const auto& s = d.at("synthetic");
        const auto kind = s.at("kind").get<std::string>();
        if (kind == "annotations") {
          AnnotationPanelSpec a;
          if (s.contains("classes")) a.classes = s.at("classes").get<std::vector<std::string>>();
          a.experts = s.value("experts", a.experts);
          a.tiles = s.value("tiles", a.tiles);
          a.disagreement = s.value("disagreement", a.disagreement);
          a.multi_class_rate = s.value("multi_class_rate", a.multi_class_rate);
          if (s.contains("certainty_probs")) {
            const auto p = s.at("certainty_probs").get<std::vector<double>>();
            require(p.size() == 3, "certainty_probs needs three values");
            std::copy(p.begin(), p.end(), a.certainty_probs);
          }
          c.synthetic_annotations = a;
        } else if (kind == "classifiers") {
          ClassifierPanelSpec p;
          p.classes = s.value("classes", p.classes);
          p.signals_per_class = s.value("signals_per_class", p.signals_per_class);
          p.confusion_partner_rate = s.value("confusion_partner_rate", p.confusion_partner_rate);
          if (s.contains("sources")) {
            p.sources.clear();
            for (const auto& js : s.at("sources")) {
              ClassifierProfile prof;
              prof.name = js.at("name").get<std::string>();
              prof.accuracy = js.value("accuracy", prof.accuracy);
              prof.crisp_rate = js.value("crisp_rate", prof.crisp_rate);
              prof.top_low = js.value("top_low", prof.top_low);
              prof.top_high = js.value("top_high", prof.top_high);
              p.sources.push_back(prof);
            }
          }
          c.synthetic_classifiers = p;
        } else {
          throw ParseError("unknown synthetic data kind '" + kind + "'");
        }
      }
    }
    c.seed = j.value("seed", c.seed);
    c.trials = j.value("trials", c.trials);
    c.split = j.value("split", c.split);
    c.reshuffle_calibration = j.value("reshuffle_calibration", c.reshuffle_calibration);
    c.keep_instances = j.value("keep_instances", c.keep_instances);
    c.threads = j.value("threads", c.threads);
    if (j.contains("certainty_weights")) {
      const auto w = j.at("certainty_weights").get<std::vector<double>>();
      require(w.size() == 3, "certainty_weights needs three values");
      c.weights = {w[0], w[1], w[2]};
    }
    if (j.contains("calibration")) {
      const auto& cal = j.at("calibration");
      c.calibration.target = cal.value("target", c.calibration.target);
      c.calibration.theta_floor = cal.value("theta_floor", c.calibration.theta_floor);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  return c;
}

// Relative data paths resolve against `base_dir`.
inline FusionReport run_experiment(const ExperimentConfig& config, const std::string& base_dir = {}) {
  config.validate();
  if (config.synthetic_classifiers)
    return run_classifier_protocol(config, generate_classifier_panel(*config.synthetic_classifiers, config.seed));
  if (config.synthetic_annotations) {
    const auto panel = generate_annotation_panel(*config.synthetic_annotations, config.seed);
    return run_annotations(config, panel.frame, panel.records, &panel.truth);
  }

  std::string path = *config.data_path;
  if (!base_dir.empty() && !path.empty() && path.front() != '/') path = base_dir + "/" + path;
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file '" + path + "'");
  FrameRef frame = config.frame.empty() ? nullptr : make_frame(config.frame);

  switch (config.source) {
    case SourceKind::Classifier: {
      auto table = read_classifier_csv(in);
      if (frame) require(*frame == *table.frame, "configured frame does not match the classifier columns");
      return run_classifier_protocol(config, table);
    }
    case SourceKind::Bba: {
      const std::string input_spec = config.source_model.empty() ? config.model : config.source_model;
      auto doc = config.data_format == "records" ? read_bba_records(in, input_spec)
                                                 : read_bba_text(in, input_spec, frame);
      return run_instances(config, parse_model(doc.frame, config.model), doc.instances);
    }
    default: {
      auto records = read_annotations_csv(in);
      if (!frame) {
        std::vector<std::string> names;
        for (const auto& r : records)
          for (const auto& e : r.annotation.entries)
            if (std::find(names.begin(), names.end(), e.cls) == names.end()) names.push_back(e.cls);
        frame = make_frame(std::move(names));
      }
      return run_annotations(config, frame, records);
    }
  }
}

// --- report output --------------------------------------------------------

namespace detail {
inline double round4(double x) { return std::round(x * 1e4) / 1e4 + 0.0; }

inline std::string fixed4(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << round4(x);
  return os.str();
}
}  // namespace detail

inline std::string format_report_text(const FusionReport& r) {
  std::ostringstream os;
  os << "model\t" << r.model << "\n";
  os << "decision\t" << r.decision_policy << "\n";
  os << "seed\t" << r.seed << "\n";
  os << "trials\t" << r.trials << "\n";
  os << "instances\t" << r.instances_evaluated << "\n";
  os << "total_conflict\t" << detail::fixed4(r.total_conflict) << "\n";
  for (std::size_t j = 0; j < r.auto_conflict.size(); ++j)
    os << "auto_conflict\t" << (j < r.source_ids.size() ? r.source_ids[j] : std::to_string(j + 1)) << '\t'
       << detail::fixed4(r.auto_conflict[j]) << "\n";

  os << "\n# proportion of instances with a different decision (%)\nrule";
  for (const auto& id : r.rule_ids) os << '\t' << id;
  os << '\n';
  for (std::size_t a = 0; a < r.rule_ids.size(); ++a) {
    os << r.rule_ids[a];
    for (std::size_t b = 0; b < r.rule_ids.size(); ++b) os << '\t' << detail::fixed4(r.divergence[a][b]);
    os << '\n';
  }
  if (r.accuracy) {
    os << "\n# good-classification rates (%), " << r.ci_method << "\nrule\trate\tinterval\n";
    for (std::size_t a = 0; a < r.rule_ids.size(); ++a) {
      const auto& acc = (*r.accuracy)[a];
      os << r.rule_ids[a] << '\t' << detail::fixed4(acc.rate) << "\t[" << detail::fixed4(acc.lower) << " : "
         << detail::fixed4(acc.upper) << "]\n";
    }
  }
  return os.str();
}

inline nlohmann::ordered_json report_to_json(const FusionReport& r) {
  using detail::round4;
  nlohmann::ordered_json j;
  j["frame"] = r.frame->atoms();
  j["model"] = r.model;
  j["decision"] = r.decision_policy;
  j["rules"] = r.rule_ids;
  j["sources"] = r.source_ids;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["instances_evaluated"] = r.instances_evaluated;
  j["ci_method"] = r.ci_method;
  j["total_conflict"] = round4(r.total_conflict);
  auto ac = nlohmann::ordered_json::array();
  for (double v : r.auto_conflict) ac.push_back(round4(v));
  j["auto_conflict"] = ac;
  auto div = nlohmann::ordered_json::array();
  for (const auto& row : r.divergence) {
    auto jr = nlohmann::ordered_json::array();
    for (double v : row) jr.push_back(round4(v));
    div.push_back(jr);
  }
  j["divergence_percent"] = div;
  if (r.accuracy) {
    auto acc = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < r.rule_ids.size(); ++a) {
      const auto& x = (*r.accuracy)[a];
      acc.push_back({{"rule", r.rule_ids[a]},
                     {"rate", round4(x.rate)},
                     {"lower", round4(x.lower)},
                     {"upper", round4(x.upper)}});
    }
    j["accuracy_percent"] = acc;
  }
  auto insts = nlohmann::ordered_json::array();
  for (const auto& inst : r.instances) {
    nlohmann::ordered_json ji;
    ji["id"] = inst.id;
    if (inst.truth) ji["truth"] = r.class_names.at(*inst.truth);
    ji["conflict"] = round4(inst.conflict);
    auto rules = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < inst.fused.size(); ++a) {
      auto masses = nlohmann::ordered_json::array();
      for (const auto& f : inst.fused[a].focal())
        masses.push_back({{"element", format_element(*r.frame, f.element)}, {"mass", round4(f.mass)}});
      rules.push_back({{"rule", r.rule_ids[a]},
                       {"decision", format_element(*r.frame, inst.decisions[a])},
                       {"masses", masses}});
    }
    ji["fusion"] = rules;
    insts.push_back(std::move(ji));
  }
  j["instances"] = insts;
  return j;
}

inline std::string format_report_records(const FusionReport& r) { return report_to_json(r).dump(2) + "\n"; }

}  // namespace dsmf
