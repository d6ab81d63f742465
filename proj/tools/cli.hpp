#pragma once

// Command-line front end. Kept in a header so the tests can drive it with
// string streams.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsmf/dsmf.hpp"

namespace dsmf::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kParse = 3 };

namespace detail {

inline std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string directory_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

inline std::string fixed4(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << std::round(x * 1e4) / 1e4 + 0.0;
  return os.str();
}

struct FuseOptions {
  std::string input = "-";
  std::string instance;
  std::string model = "free";
  std::string input_model;
  std::string rules = "conj,dp,dsmh,pcr5,pcr6";
  std::string decision = "betp";
  std::string format = "text";
};

inline void run_fuse(const FuseOptions& o, std::ostream& out) {
  const std::string input_spec = o.input_model.empty() ? o.model : o.input_model;
  const auto text = read_all(o.input);
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = first != std::string::npos && text[first] == '{';
  std::istringstream in(text);
  const auto doc = json ? read_bba_records(in, input_spec) : read_bba_text(in, input_spec);
  require(!doc.instances.empty(), "input holds no instance");
  const FusionInstance* inst = &doc.instances.front();
  if (!o.instance.empty()) {
    inst = nullptr;
    for (const auto& i : doc.instances)
      if (i.id == o.instance) inst = &i;
    if (!inst) throw ValidationError("no instance named '" + o.instance + "'");
  }
  const auto target = parse_model(doc.frame, o.model);
  const auto rules = parse_rule_list(o.rules);
  const auto policy = DecisionPolicy::parse(o.decision);
  const auto fused = combine(inst->sources, rules, target);
  const auto candidates = candidate_set(*target, policy.candidates);
  const double conflict = total_conflict(inst->sources, target);
  const Frame& f = *doc.frame;

  if (o.format == "records") {
    nlohmann::ordered_json j;
    j["frame"] = f.atoms();
    j["model"] = model_id(*target);
    j["decision"] = policy.id();
    j["conflict"] = std::round(conflict * 1e4) / 1e4 + 0.0;
    auto results = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < rules.size(); ++r) {
      nlohmann::ordered_json jr;
      jr["rule"] = rules[r].id();
      jr["masses"] = bba_to_json(fused[r]);
      auto table = nlohmann::ordered_json::array();
      for (const auto& x : candidates)
        table.push_back({{"element", format_element(f, x)},
                         {"bel", std::round(credibility(fused[r], x) * 1e4) / 1e4 + 0.0},
                         {"pl", std::round(plausibility(fused[r], x) * 1e4) / 1e4 + 0.0},
                         {"betp", std::round(pignistic(fused[r], x) * 1e4) / 1e4 + 0.0}});
      jr["functionals"] = table;
      jr["decision"] = format_element(f, decide(fused[r], policy.functional, candidates));
      results.push_back(jr);
    }
    j["results"] = results;
    out << j.dump(2) << "\n";
    return;
  }

  out << "instance\t" << inst->id << "\nmodel\t" << model_id(*target) << "\nconflict\t" << fixed4(conflict) << "\n";
  for (std::size_t r = 0; r < rules.size(); ++r) {
    out << "\n# " << rules[r].id() << "\nelement\tmass\tbel\tpl\tbetp\n";
    if (fused[r].empty_mass() > 0.0) out << "~EMPTY~\t" << fixed4(fused[r].empty_mass()) << "\t\t\t\n";
    for (const auto& x : candidates)
      out << format_element(f, x) << '\t' << fixed4(fused[r].mass(x)) << '\t' << fixed4(credibility(fused[r], x)) << '\t'
          << fixed4(plausibility(fused[r], x)) << '\t' << fixed4(pignistic(fused[r], x)) << '\n';
    // Focal elements outside the candidate list still show their mass.
    for (const auto& fe : fused[r].focal())
      if (!fe.element.is_empty() && std::find(candidates.begin(), candidates.end(), fe.element) == candidates.end())
        out << format_element(f, fe.element) << '\t' << fixed4(fe.mass) << "\t\t\t\n";
    out << "decision\t" << policy.id() << '\t' << format_element(f, decide(fused[r], policy.functional, candidates))
        << '\n';
  }
}

struct ExperimentOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  std::string rules;
  std::string decision;
  std::string model;
  std::string format = "text";
};

inline void run_experiment_cmd(const ExperimentOptions& o, std::ostream& out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_all(o.config));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  auto config = experiment_config_from_json(j);
  if (o.seed) config.seed = *o.seed;
  if (o.trials) config.trials = *o.trials;
  if (o.threads) config.threads = *o.threads;
  if (!o.rules.empty()) config.rules = parse_rule_list(o.rules);
  if (!o.decision.empty()) config.decision = DecisionPolicy::parse(o.decision);
  if (!o.model.empty()) config.model = o.model;
  const auto report = run_experiment(config, o.config == "-" ? std::string(".") : directory_of(o.config));
  out << (o.format == "records" ? format_report_records(report) : format_report_text(report));
}

struct GenerateOptions {
  std::string kind;
  std::uint64_t seed = 1;
  std::size_t classes = 0;
  std::size_t experts = 3;
  std::size_t tiles = 1000;
  double disagreement = 0.1;
  double multi_class_rate = 0.2;
  std::size_t signals_per_class = 150;
  std::string format = "text";
};

inline void run_generate(const GenerateOptions& o, std::ostream& out) {
  if (o.kind == "annotations") {
    AnnotationPanelSpec spec;
    if (o.classes) {
      spec.classes.clear();
      for (std::size_t c = 0; c < o.classes; ++c) spec.classes.push_back("C" + std::to_string(c + 1));
    }
    spec.experts = o.experts;
    spec.tiles = o.tiles;
    spec.disagreement = o.disagreement;
    spec.multi_class_rate = o.multi_class_rate;
    const auto panel = generate_annotation_panel(spec, o.seed);
    if (o.format == "records") {
      nlohmann::ordered_json j;
      j["classes"] = panel.frame->atoms();
      auto tiles = nlohmann::ordered_json::array();
      for (std::size_t t = 0; t < panel.truth.size(); ++t)
        tiles.push_back({{"tile", "t" + std::to_string(t + 1)}, {"truth", panel.frame->name(panel.truth[t])}});
      j["truth"] = tiles;
      std::ostringstream csv;
      write_annotations_csv(csv, panel.records);
      j["annotations_csv"] = csv.str();
      out << j.dump(2) << "\n";
    } else {
      write_annotations_csv(out, panel.records);
    }
    return;
  }
  ClassifierPanelSpec spec;
  if (o.classes) spec.classes = o.classes;
  spec.signals_per_class = o.signals_per_class;
  write_classifier_csv(out, generate_classifier_panel(spec, o.seed));
}

inline void run_lattice(const std::string& frame_list, const std::string& model_spec, std::ostream& out) {
  std::vector<std::string> names;
  for (auto& n : dsmf::detail::split(frame_list, ',')) names.push_back(dsmf::detail::trim(n));
  const auto frame = make_frame(names);
  require(frame->size() <= Frame::kMaxLatticeAtoms, "lattice listing supports at most 5 atoms");
  const auto model = parse_model(frame, model_spec);
  std::size_t shown = 0;
  std::ostringstream body;
  std::vector<LatticeElement> seen;
  for (const auto& x : enumerate_dsm_lattice(*frame)) {
    const auto r = model->reduce(x);
    if (std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
    seen.push_back(r);
    body << shown++ << '\t' << model->cardinality(r) << '\t' << (r.is_empty() ? "~EMPTY~" : format_element(*frame, r))
         << '\n';
  }
  out << "# " << shown << " elements, model " << model_id(*model) << "\nindex\tcardinality\telement\n" << body.str();
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Belief-function fusion toolkit: combination rules on power sets and hyper-power sets"};
  app.require_subcommand(1);

  detail::FuseOptions fo;
  auto* fuse = app.add_subcommand("fuse", "fuse one instance of a BBA file and print masses, functionals and decisions");
  fuse->add_option("input", fo.input, "BBA text or JSON records file, '-' for stdin")->capture_default_str();
  fuse->add_option("--instance", fo.instance, "instance id (default: the first)");
  fuse->add_option("--model", fo.model, "fusion model: free | shafer | hybrid:<e1,e2,...>")->capture_default_str();
  fuse->add_option("--input-model", fo.input_model, "model the sources are written in (default: --model)");
  fuse->add_option("--rules", fo.rules, "rule list, e.g. conj,dp,pcr6,pcrf:0.5")->capture_default_str();
  fuse->add_option("--decision", fo.decision, "<bel|pl|betp|maxmass>[:singletons|all]")->capture_default_str();
  fuse->add_option("--format", fo.format, "text | records")->check(CLI::IsMember({"text", "records"}))->capture_default_str();

  detail::ExperimentOptions eo;
  auto* exp = app.add_subcommand("experiment", "run an experiment config and print its report");
  exp->add_option("config", eo.config, "experiment JSON config, '-' for stdin")->required();
  exp->add_option("--seed", eo.seed, "override the seed");
  exp->add_option("--trials", eo.trials, "override the trial count");
  exp->add_option("--threads", eo.threads, "worker threads (0 = all cores)");
  exp->add_option("--rules", eo.rules, "override the rule list");
  exp->add_option("--decision", eo.decision, "override the decision policy");
  exp->add_option("--model", eo.model, "override the fusion model");
  exp->add_option("--format", eo.format, "text | records")->check(CLI::IsMember({"text", "records"}))->capture_default_str();

  detail::GenerateOptions go;
  auto* gen = app.add_subcommand("generate", "write a synthetic annotation panel or classifier table as CSV");
  gen->add_option("kind", go.kind, "annotations | classifiers")->required()->check(CLI::IsMember({"annotations", "classifiers"}));
  gen->add_option("--seed", go.seed, "random seed")->capture_default_str();
  gen->add_option("--classes", go.classes, "number of classes (default: 7 sediments or 10 targets)");
  gen->add_option("--experts", go.experts, "annotation experts")->capture_default_str();
  gen->add_option("--tiles", go.tiles, "annotated tiles")->capture_default_str();
  gen->add_option("--disagreement", go.disagreement, "chance an expert relabels a class")->capture_default_str();
  gen->add_option("--multi-class-rate", go.multi_class_rate, "share of two-sediment tiles")->capture_default_str();
  gen->add_option("--signals-per-class", go.signals_per_class, "classifier signals per class")->capture_default_str();
  gen->add_option("--format", go.format, "text (CSV) | records (JSON with truth)")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();

  std::string frame_list, lattice_model = "free";
  auto* lat = app.add_subcommand("lattice", "list the elements of D^Theta (or of a model's quotient)");
  lat->add_option("--frame", frame_list, "comma-separated atom names, at most 5")->required();
  lat->add_option("--model", lattice_model, "free | shafer | hybrid:<e1,...>")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    if (*fuse) detail::run_fuse(fo, out);
    else if (*exp) detail::run_experiment_cmd(eo, out);
    else if (*gen) detail::run_generate(go, out);
    else if (*lat) detail::run_lattice(frame_list, lattice_model, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}

}  // namespace dsmf::cli
