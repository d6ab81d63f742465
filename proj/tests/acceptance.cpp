// Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when a
// criterion fails for a reason not listed among the known deviations.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "worked_examples.hpp"

using namespace dsmf;

namespace {

constexpr double kTableTol = 5e-5;
constexpr double kIdentityTol = 1e-12;
constexpr double kOracleTol = 1e-12;
constexpr double kSumTol = 1e-9;
constexpr double kOrderTol = 1e-12;
constexpr double kWorkedSeconds = 1.0;
constexpr double kPanelSeconds = 60.0;
constexpr double kSmallestPairShare = 0.80;
constexpr double kCalibrationTarget = 0.8;
constexpr double kCalibrationBand = 0.02;
constexpr double kThetaFloor = 0.001;

struct Outcome {
  bool pass = true;
  bool known = false;  // failure matches a documented deviation
  std::string detail;
};

int unknown_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const std::string& id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, false, std::string("exception: ") + e.what()};
  }
  std::ostringstream time;
  time << std::fixed << std::setprecision(2) << seconds_since(t0) << "s";
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << name << "  (" << time.str() << ")";
  if (!o.pass && o.known) std::cout << "  [known deviation]";
  if (!o.detail.empty()) std::cout << "\n      " << o.detail;
  std::cout << std::endl;
  if (!o.pass && !o.known) ++unknown_failures;
}

FrameRef abc(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
  return make_frame(names);
}

std::string num(double x, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// --- 1 -----------------------------------------------------------------------

Outcome worked_tables() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t cells = 0, matched = 0;
  std::vector<std::string> known, unknown;
  for (const auto& t : worked::tables()) {
    const Frame& f = t.fused.model().frame();
    auto check = [&](double got, double want) {
      ++cells;
      if (std::abs(got - want) <= kTableTol) {
        ++matched;
        return true;
      }
      return false;
    };
    if (!check(t.fused.empty_mass(), t.empty_mass)) unknown.push_back(t.name + " m(empty)");
    for (const auto& row : t.rows) {
      const auto x = parse_element(f, row.element);
      const std::string at = t.name + " " + row.element;
      if (!check(t.fused.mass(x), row.mass)) unknown.push_back(at + " m=" + num(t.fused.mass(x)));
      if (!check(credibility(t.fused, x), row.bel))
        unknown.push_back(at + " bel=" + num(credibility(t.fused, x)));
      if (!check(pignistic(t.fused, x), row.betp))
        unknown.push_back(at + " betP=" + num(pignistic(t.fused, x)));
      const double pl = plausibility(t.fused, x);
      if (!check(pl, row.pl)) {
        const auto* d = worked::find_pl_deviation(t.name, row.element);
        if (d && std::abs(pl - d->standard) <= kTableTol)
          known.push_back(at + " Pl printed " + num(row.pl) + ", computed " + num(pl));
        else
          unknown.push_back(at + " pl=" + num(pl));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.detail = std::to_string(matched) + "/" + std::to_string(cells) + " cells within " + num(kTableTol) + ", " +
             num(elapsed, 3) + "s";
  if (elapsed >= kWorkedSeconds) {
    o.pass = false;
    o.detail += "; slower than " + num(kWorkedSeconds) + "s";
    return o;
  }
  if (!unknown.empty()) {
    o.pass = false;
    for (const auto& u : unknown) o.detail += "\n      mismatch: " + u;
    return o;
  }
  if (!known.empty()) {
    o.pass = false;
    o.known = true;
    for (const auto& k : known) o.detail += "\n      " + k;
    o.detail +=
        "\n      the printed free-model Pl cells count only focal elements sharing an atom with X; that reading is"
        "\n      not monotone and puts Pl(B)=0.7 below GPT(B)=0.7833, so standard plausibility is kept";
  }
  return o;
}

// --- 2 -----------------------------------------------------------------------

Outcome rule_identities() {
  std::mt19937_64 rng(20240501);
  double d56 = 0.0, df = 0.0, dg = 0.0;
  std::size_t pairs = 0, triples = 0;
  const std::vector<RuleSpec> two_rules{RuleSpec::pcr5(), RuleSpec::pcr6()};
  const std::vector<RuleSpec> three_rules{RuleSpec::pcr6(), RuleSpec::pcrf(1.0), RuleSpec::pcrg(1.0)};
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto f = abc(n);
    for (const auto& model : {ConstraintModel::free(f), ConstraintModel::shafer(f)}) {
      const auto cand = oracle::focal_candidates(*model);
      for (int i = 0; i < 300; ++i) {
        std::vector<MassFunction> s{oracle::random_bba(rng, model, cand, 4), oracle::random_bba(rng, model, cand, 4)};
        const auto r = combine(s, two_rules);
        for (const auto& fe : r[0].focal()) d56 = std::max(d56, std::abs(fe.mass - r[1].mass(fe.element)));
        for (const auto& fe : r[1].focal()) d56 = std::max(d56, std::abs(fe.mass - r[0].mass(fe.element)));
        ++pairs;
      }
      for (int i = 0; i < 300; ++i) {
        std::vector<MassFunction> s{oracle::random_bba(rng, model, cand, 4), oracle::random_bba(rng, model, cand, 4),
                                    oracle::random_bba(rng, model, cand, 4)};
        const auto r = combine(s, three_rules);
        for (const auto& fe : r[0].focal()) {
          df = std::max(df, std::abs(fe.mass - r[1].mass(fe.element)));
          dg = std::max(dg, std::abs(fe.mass - r[2].mass(fe.element)));
        }
        for (std::size_t k = 1; k < 3; ++k)
          for (const auto& fe : r[k].focal())
            (k == 1 ? df : dg) = std::max(k == 1 ? df : dg, std::abs(fe.mass - r[0].mass(fe.element)));
        ++triples;
      }
    }
  }
  Outcome o;
  o.pass = pairs >= 1000 && triples >= 1000 && d56 < kIdentityTol && df < kIdentityTol && dg < kIdentityTol;
  o.detail = std::to_string(pairs) + " two-source cases: max|PCR5-PCR6|=" + num(d56) + "; " +
             std::to_string(triples) + " three-source cases: max|PCRf(1)-PCR6|=" + num(df) +
             ", max|PCRg(1)-PCR6|=" + num(dg);
  return o;
}

// --- 3 -----------------------------------------------------------------------

// Every mass function over `elements` with masses on a 0.1 grid.
std::vector<MassFunction> grid_bbas(const ModelRef& model, const std::vector<LatticeElement>& elements) {
  std::vector<MassFunction> out;
  std::vector<int> tenths(elements.size(), 0);
  std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
    if (i + 1 == elements.size()) {
      tenths[i] = left;
      std::vector<FocalElement> items;
      for (std::size_t k = 0; k < elements.size(); ++k)
        if (tenths[k]) items.push_back({elements[k], tenths[k] / 10.0});
      out.push_back(make_bba(model, std::move(items)));
      return;
    }
    for (int t = 0; t <= left; ++t) {
      tenths[i] = t;
      fill(i + 1, left - t);
    }
  };
  fill(0, 10);
  return out;
}

Outcome oracle_equivalence() {
  const auto rules = parse_rule_list("conj,dp,dsmh,pcr5,pcr6,pcrf:0.5,pcrf:2,pcrg:0.5,pcrg:2");
  std::mt19937_64 rng(77);
  double worst = 0.0;
  std::string worst_at;
  std::size_t cases = 0;
  auto run = [&](std::size_t n, const std::vector<MassFunction>& s, const ModelRef& target, bool shafer_target,
                 const std::string& label) {
    std::vector<oracle::Source> os;
    for (const auto& m : s) os.push_back(oracle::to_source(m));
    const auto got = combine(s, rules, target);
    const auto forbid = oracle::forbidden(n, shafer_target);
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const auto want = oracle::combine(n, os, oracle::to_rule(rules[r]), rules[r].alpha, forbid);
      const double d = oracle::max_diff(got[r], want);
      if (d > worst) {
        worst = d;
        worst_at = label + " " + rules[r].id();
      }
    }
    ++cases;
  };
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto f = abc(n);
    struct Setup {
      ModelRef source, target;
      bool shafer_target;
      std::string label;
    };
    const std::vector<Setup> setups{{ConstraintModel::free(f), ConstraintModel::free(f), false, "free"},
                                    {ConstraintModel::shafer(f), ConstraintModel::shafer(f), true, "shafer"},
                                    {ConstraintModel::free(f), ConstraintModel::shafer(f), true, "free->shafer"}};
    for (const auto& st : setups) {
      const auto grid = grid_bbas(st.source, oracle::focal_candidates(*st.source));
      const std::string tag = "n=" + std::to_string(n) + " " + st.label;
      // Two sources: every grid combination.
      for (const auto& a : grid)
        for (const auto& b : grid) run(n, {a, b}, st.target, st.shafer_target, tag + " M=2");
      // Three sources: all of them on small grids, a seeded sample otherwise.
      if (grid.size() <= 66) {
        for (const auto& a : grid)
          for (const auto& b : grid)
            for (const auto& c : grid) run(n, {a, b, c}, st.target, st.shafer_target, tag + " M=3");
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
        for (int i = 0; i < 20000; ++i)
          run(n, {grid[pick(rng)], grid[pick(rng)], grid[pick(rng)]}, st.target, st.shafer_target, tag + " M=3");
      }
    }
  }
  Outcome o;
  o.pass = worst <= kOracleTol;
  o.detail = std::to_string(cases) + " grid cases x " + std::to_string(rules.size()) + " rules, max deviation " +
             num(worst) + (worst_at.empty() ? "" : " (" + worst_at + ")");
  return o;
}

// --- 4 -----------------------------------------------------------------------

Outcome conservation() {
  std::mt19937_64 rng(4242);
  const auto rules = parse_rule_list("dp,dsmh,pcr5,pcr6,pcrf:0.5,pcrf:2,pcrg:0.5,pcrg:2");
  std::size_t cases = 0, degenerate = 0, violations = 0;
  std::string first;
  auto check = [&](const std::vector<MassFunction>& s, const ModelRef& target, bool is_degenerate) {
    const auto out = combine(s, rules, target);
    for (std::size_t r = 0; r < rules.size(); ++r) {
      bool ok = std::abs(out[r].total() - 1.0) <= kSumTol && out[r].empty_mass() == 0.0;
      for (const auto& fe : out[r].focal()) ok = ok && !target->is_empty(fe.element) && fe.mass >= 0.0;
      if (!ok && violations++ == 0) first = rules[r].id();
    }
    ++cases;
    degenerate += is_degenerate ? 1 : 0;
  };
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto f = abc(n);
    const std::vector<std::pair<ModelRef, ModelRef>> setups{
        {ConstraintModel::free(f), ConstraintModel::free(f)},
        {ConstraintModel::shafer(f), ConstraintModel::shafer(f)},
        {ConstraintModel::free(f), ConstraintModel::shafer(f)},
        {ConstraintModel::free(f), n >= 2 ? parse_model(f, "hybrid:A&B") : ConstraintModel::free(f)}};
    for (const auto& [source, target] : setups) {
      const auto cand = oracle::focal_candidates(*source);
      std::uniform_int_distribution<std::size_t> pick(0, cand.size() - 1);
      std::uniform_int_distribution<int> sources(2, 4);
      for (int i = 0; i < 700; ++i) {
        std::vector<MassFunction> s;
        const int m = sources(rng);
        for (int k = 0; k < m; ++k) s.push_back(oracle::random_bba(rng, source, cand, 5));
        check(s, target, false);
      }
      // Degenerate inputs: explicit zero masses, single focal elements, and
      // sources that each sit on one atom (fully conflicting under Shafer).
      for (int i = 0; i < 150; ++i) {
        std::vector<MassFunction> s;
        const int m = sources(rng);
        for (int k = 0; k < m; ++k) {
          const auto& x = cand[pick(rng)];
          const auto& y = cand[pick(rng)];
          if (x == y)
            s.push_back(make_bba(source, {{x, 1.0}}));
          else
            s.push_back(make_bba(source, {{x, 0.0}, {y, 1.0}}));
        }
        check(s, target, true);
        std::vector<MassFunction> atoms;
        for (int k = 0; k < m; ++k)
          atoms.push_back(make_bba(source, {{LatticeElement::atom(*f, static_cast<std::size_t>(k) % n), 1.0}}));
        check(atoms, target, true);
      }
    }
  }
  Outcome o;
  o.pass = cases >= 10000 && violations == 0;
  o.detail = std::to_string(cases) + " instances (" + std::to_string(degenerate) + " degenerate) x " +
             std::to_string(rules.size()) + " rules, " + std::to_string(violations) + " violations" +
             (first.empty() ? "" : ", first in " + first);
  return o;
}

// --- 5 -----------------------------------------------------------------------

Outcome lattice_suite() {
  std::vector<std::string> problems;
  const std::size_t sizes[] = {2, 5, 19};
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto l = enumerate_dsm_lattice(*abc(n));
    std::set<oracle::Regions> got;
    for (const auto& x : l) got.insert(oracle::to_regions(x));
    if (l.size() != sizes[n - 1]) problems.push_back("|D| at n=" + std::to_string(n) + " is " + std::to_string(l.size()));
    if (got != oracle::closure(n)) problems.push_back("closure mismatch at n=" + std::to_string(n));
  }
  const auto f = abc(3);
  const auto y = parse_element(*f, "(A&B)|(A&C)");
  if (union_decomposition(*f, y) != parse_element(*f, "A|B|C")) problems.push_back("u((A&B)|(A&C)) != A|B|C");

  const auto l = enumerate_dsm_lattice(*f);
  const auto bottom = LatticeElement::empty(*f), top = LatticeElement::full(*f);
  std::size_t laws = 0, broken = 0;
  auto law = [&](bool ok) {
    ++laws;
    broken += ok ? 0 : 1;
  };
  for (const auto& a : l) {
    law(meet(a, a) == a && join(a, a) == a);
    law(meet(a, top) == a && join(a, bottom) == a);
    for (const auto& b : l) {
      law(meet(a, b) == meet(b, a) && join(a, b) == join(b, a));
      law(meet(a, join(a, b)) == a && join(a, meet(a, b)) == a);
      law(a.subset_of(b) == (meet(a, b) == a));
      law(std::find(l.begin(), l.end(), meet(a, b)) != l.end() && std::find(l.begin(), l.end(), join(a, b)) != l.end());
      for (const auto& c : l) {
        law(meet(a, meet(b, c)) == meet(meet(a, b), c) && join(a, join(b, c)) == join(join(a, b), c));
        law(meet(a, join(b, c)) == join(meet(a, b), meet(a, c)) && join(a, meet(b, c)) == meet(join(a, b), join(a, c)));
      }
    }
  }
  if (broken) problems.push_back(std::to_string(broken) + " lattice law violations");
  Outcome o;
  o.pass = problems.empty();
  o.detail = "|D| = 2, 5, 19 vs closure oracle; u((A&B)|(A&C)) = A|B|C; " + std::to_string(laws) +
             " law instances at n=3";
  for (const auto& p : problems) o.detail += "\n      " + p;
  return o;
}

// --- 6 -----------------------------------------------------------------------

Outcome monotonicity() {
  std::mt19937_64 rng(606);
  std::size_t bbas = 0, checks = 0, violations = 0;
  std::string first;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto f = abc(n);
    std::vector<ModelRef> models{ConstraintModel::free(f), ConstraintModel::shafer(f)};
    if (n >= 2) models.push_back(parse_model(f, "hybrid:A&B"));
    for (const auto& model : models) {
      const auto all = candidate_set(*model, Candidates::AllNonEmpty);
      const auto cand = oracle::focal_candidates(*model);
      for (int i = 0; i < 150; ++i) {
        const auto m = oracle::random_bba(rng, model, cand, 6);
        ++bbas;
        std::vector<double> bel, pl, bet;
        for (const auto& x : all) {
          bel.push_back(credibility(m, x));
          pl.push_back(plausibility(m, x));
          bet.push_back(pignistic(m, x));
          ++checks;
          if (!(bel.back() <= bet.back() + kOrderTol && bet.back() <= pl.back() + kOrderTol) && violations++ == 0)
            first = "bel<=betP<=pl at " + format_element(*f, x);
        }
        for (std::size_t a = 0; a < all.size(); ++a)
          for (std::size_t b = 0; b < all.size(); ++b) {
            if (!all[a].subset_of(all[b])) continue;
            ++checks;
            const bool ok = bel[a] <= bel[b] + kOrderTol && pl[a] <= pl[b] + kOrderTol && bet[a] <= bet[b] + kOrderTol;
            if (!ok && violations++ == 0) first = "monotonicity " + format_element(*f, all[a]) + " <= " +
                                                 format_element(*f, all[b]);
          }
      }
    }
  }
  Outcome o;
  o.pass = bbas >= 1000 && violations == 0;
  o.detail = std::to_string(bbas) + " BBAs, " + std::to_string(checks) + " checks, " + std::to_string(violations) +
             " violations" + (first.empty() ? "" : ", first: " + first);
  return o;
}

// --- 7 -----------------------------------------------------------------------

ExperimentConfig radar_config(std::uint64_t seed, std::size_t trials, const std::string& rules) {
  ExperimentConfig c;
  c.source = SourceKind::Classifier;
  ClassifierPanelSpec p;
  p.classes = 10;
  p.signals_per_class = 30;
  c.synthetic_classifiers = p;
  c.rules = parse_rule_list(rules);
  c.seed = seed;
  c.trials = trials;
  c.keep_instances = false;
  return c;
}

const char* const kRadarRules = "conj,dp,pcrf:0.5,pcrg:0.5,pcr6,pcrg:2,pcrf:2,pcr5";

Outcome protocol_shape() {
  std::vector<std::string> problems;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_experiment(radar_config(1, 800, kRadarRules));
  const double elapsed = seconds_since(t0);
  if (elapsed >= kPanelSeconds) problems.push_back("800-trial panel took " + num(elapsed) + "s");

  const auto& d = r.divergence;
  const std::size_t k = r.rule_ids.size();
  for (std::size_t a = 0; a < k; ++a) {
    if (d[a][a] != 0.0) problems.push_back("non-zero diagonal for " + r.rule_ids[a]);
    for (std::size_t b = 0; b < k; ++b) {
      if (d[a][b] != d[b][a]) problems.push_back("asymmetric entry " + r.rule_ids[a] + "/" + r.rule_ids[b]);
      if (d[a][b] < 0.0 || d[a][b] > 100.0) problems.push_back("entry outside [0,100]");
    }
  }
  const std::size_t i5 = 7, i6 = 4;
  if (!(d[i5][i6] > 0.0)) problems.push_back("PCR5 and PCR6 columns coincide with three sources");
  if (!r.accuracy) {
    problems.push_back("no accuracy table");
  } else {
    for (const auto& a : *r.accuracy)
      if (!(std::isfinite(a.lower) && std::isfinite(a.upper) && a.lower <= a.rate && a.rate <= a.upper &&
            a.lower < a.upper && a.lower >= 0.0 && a.upper <= 100.0))
        problems.push_back("invalid interval");
  }

  // Rank property over seeds. Divergence is pairwise, so the conj, dp, pcr6,
  // pcr5 comparison reads a sub-matrix of the full run.
  const int seeds = 20;
  int smallest = 0, row_smallest = 0;
  const std::size_t four[] = {0, 1, 4, 7};
  for (int s = 0; s < seeds; ++s) {
    const auto rs = run_experiment(radar_config(100 + static_cast<std::uint64_t>(s), 100, kRadarRules));
    double low = 1e9;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) low = std::min(low, rs.divergence[four[a]][four[b]]);
    smallest += rs.divergence[0][1] <= low ? 1 : 0;
    bool row = true;
    for (std::size_t b = 2; b < rs.rule_ids.size(); ++b) row = row && rs.divergence[0][1] <= rs.divergence[0][b];
    row_smallest += row ? 1 : 0;
  }
  const double share = static_cast<double>(smallest) / seeds;
  if (share < kSmallestPairShare) problems.push_back("conj/dp smallest pair in only " + num(share * 100) + "% of seeds");

  Outcome o;
  o.pass = problems.empty();
  std::ostringstream os;
  os << "800 trials in " << std::fixed << std::setprecision(1) << elapsed << "s; PCR5/PCR6 divergence "
     << std::setprecision(2) << d[i5][i6] << "%; conj/dp smallest pair among conj,dp,pcr6,pcr5 in " << smallest << "/"
     << seeds << " seeds; smallest in the conj row of all 8 rules in " << row_smallest << "/" << seeds << " seeds";
  o.detail = os.str();
  for (const auto& p : problems) o.detail += "\n      " + p;
  return o;
}

// Divergence from conj should grow along dp, pcrf:0.5 ~ pcrg:0.5, pcr6,
// pcrg:2, pcrf:2, pcr5.
Outcome rule_ordering() {
  const auto r = run_experiment(radar_config(1, 200, kRadarRules));
  const std::vector<double> expected{1, 2.5, 2.5, 4, 5, 6, 7};
  std::vector<double> observed;
  for (std::size_t b = 1; b < r.rule_ids.size(); ++b) observed.push_back(r.divergence[0][b]);
  const double rho = spearman(expected, observed);
  Outcome o;
  o.pass = rho >= 0.9;
  o.detail = "Spearman correlation of distance from conj with the expected ordering: " + num(rho);
  return o;
}

// --- 8 -----------------------------------------------------------------------

Outcome calibration() {
  ClassifierPanelSpec p;
  p.classes = 10;
  p.signals_per_class = 1000;
  const auto table = generate_classifier_panel(p, 8);
  std::size_t streamed = 0, below_floor = 0;
  double min_theta = 1.0, worst_late = 0.0, sum = 0.0;
  std::map<std::string, std::pair<ClassifierCalibration, std::pair<double, std::size_t>>> per;
  const auto model = ConstraintModel::shafer(table.frame);
  for (const auto& rec : table.records) {
    auto it = per.find(rec.classifier);
    if (it == per.end()) it = per.emplace(rec.classifier, std::pair{ClassifierCalibration(model), std::pair{0.0, 0}}).first;
    const auto m = it->second.first.calibrate(rec.scores);
    const double theta = m.mass(LatticeElement::full(*table.frame));
    min_theta = std::min(min_theta, theta);
    below_floor += theta < kThetaFloor - 1e-12 ? 1 : 0;
    auto& [s, c] = it->second.second;
    s += 1.0 - theta;
    ++c;
    sum += 1.0 - theta;
    ++streamed;
    // Running mean once each stream is past its first half.
    if (c > p.classes * p.signals_per_class / 2) worst_late = std::max(worst_late, std::abs(s / c - kCalibrationTarget));
  }
  std::ostringstream os;
  os << streamed << " outputs over " << per.size() << " classifiers; final running means";
  bool ok = streamed >= 10000 && below_floor == 0 && worst_late <= kCalibrationBand;
  for (const auto& [name, v] : per) {
    const double mean = v.second.first / static_cast<double>(v.second.second);
    ok = ok && std::abs(mean - kCalibrationTarget) <= kCalibrationBand;
    os << " " << name << "=" << std::fixed << std::setprecision(4) << mean;
  }
  os << "; worst late deviation " << std::setprecision(4) << worst_late << "; min m(Theta) " << min_theta;
  (void)sum;
  Outcome o;
  o.pass = ok;
  o.detail = os.str();
  return o;
}

}  // namespace

int main() {
  std::cout << "acceptance run" << std::endl;
  report("1", "worked-example tables", worked_tables);
  report("2", "rule identities", rule_identities);
  report("3", "oracle equivalence on the 0.1 grid", oracle_equivalence);
  report("4", "conservation and normalization", conservation);
  report("5", "lattice", lattice_suite);
  report("6", "decision ordering and monotonicity", monotonicity);
  report("7", "protocol shape on the synthetic radar panel", protocol_shape);
  report("7b", "rule ordering by distance from conj", rule_ordering);
  report("8", "classifier calibration", calibration);
  std::cout << (unknown_failures ? "acceptance: FAILED" : "acceptance: all failures are documented deviations or none")
            << std::endl;
  return unknown_failures ? 1 : 0;
}
