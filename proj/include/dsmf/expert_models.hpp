#pragma once

// Belief models turning expert tile annotations and classifier scores into
// mass functions.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dsmf/bba.hpp"

namespace dsmf {

enum class CertaintyLevel { Sure, ModeratelySure, NotSure };

inline CertaintyLevel parse_certainty_level(std::string_view text) {
  if (text == "sure") return CertaintyLevel::Sure;
  if (text == "moderately_sure") return CertaintyLevel::ModeratelySure;
  if (text == "not_sure") return CertaintyLevel::NotSure;
  throw ParseError("unknown certainty level '" + std::string(text) + "'");
}

inline std::string_view certainty_level_name(CertaintyLevel level) {
  switch (level) {
    case CertaintyLevel::Sure: return "sure";
    case CertaintyLevel::ModeratelySure: return "moderately_sure";
    case CertaintyLevel::NotSure: return "not_sure";
  }
  return "sure";
}

struct CertaintyWeights {
  double sure = 2.0 / 3.0;
  double moderately_sure = 0.5;
  double not_sure = 1.0 / 3.0;

  void validate() const {
    require(sure <= 1.0 && sure >= moderately_sure && moderately_sure >= not_sure && not_sure > 0.0,
            "certainty weights must satisfy 1 >= sure >= moderately_sure >= not_sure > 0");
  }

  double weight(CertaintyLevel level) const {
    switch (level) {
      case CertaintyLevel::Sure: return sure;
      case CertaintyLevel::ModeratelySure: return moderately_sure;
      case CertaintyLevel::NotSure: return not_sure;
    }
    return not_sure;
  }
};

// Either a named level (mapped through CertaintyWeights) or a direct weight.
using Certainty = std::variant<CertaintyLevel, double>;

struct AnnotationEntry {
  std::string cls;
  double proportion = 1.0;
  Certainty certainty = CertaintyLevel::Sure;
};

struct TileAnnotation {
  std::string expert_id;
  std::vector<AnnotationEntry> entries;

  void validate() const {
    require(!entries.empty(), "annotation of expert '" + expert_id + "' has no entries");
    double total = 0.0;
    for (const auto& e : entries) {
      require(e.proportion > 0.0 && e.proportion <= 1.0,
              "proportion of '" + e.cls + "' must lie in (0, 1]");
      if (const auto* c = std::get_if<double>(&e.certainty))
        require(*c >= 0.0 && *c <= 1.0, "certainty of '" + e.cls + "' must lie in [0, 1]");
      total += e.proportion;
    }
    require(total <= 1.0 + kMassTolerance, "proportions of expert '" + expert_id + "' sum above 1");
  }
};

inline double certainty_weight(const AnnotationEntry& e, const CertaintyWeights& weights) {
  if (const auto* level = std::get_if<CertaintyLevel>(&e.certainty)) return weights.weight(*level);
  return std::get<double>(e.certainty);
}

namespace detail {

// For the two-class models: which classes of {A, B} the expert names.
struct TwoClassStatement {
  bool says_a = false;
  bool says_b = false;
  double weight_a = 0.0;  // c_X for a single-class statement
  double weight_b = 0.0;
  double joint = 0.0;     // p_A c_A + p_B c_B
};

inline TwoClassStatement read_two_class(const TileAnnotation& ann, const Frame& classes,
                                        const CertaintyWeights& weights) {
  require(classes.size() == 2, "two-class models need a frame of exactly two classes");
  ann.validate();
  require(ann.entries.size() <= 2, "two-class annotation has more than two entries");
  TwoClassStatement s;
  for (const auto& e : ann.entries) {
    const auto idx = classes.index_of(e.cls);
    require(idx.has_value(), "class '" + e.cls + "' is not in the two-class frame");
    const double c = certainty_weight(e, weights);
    if (*idx == 0) {
      require(!s.says_a, "class '" + e.cls + "' listed twice");
      s.says_a = true;
      s.weight_a = c;
    } else {
      require(!s.says_b, "class '" + e.cls + "' listed twice");
      s.says_b = true;
      s.weight_b = c;
    }
    s.joint += e.proportion * c;
  }
  require(s.joint <= 1.0 + kMassTolerance, "p_A c_A + p_B c_B exceeds 1");
  return s;
}

inline MassFunction two_focal(ModelRef model, LatticeElement focus, double mass) {
  mass = std::clamp(mass, 0.0, 1.0);
  auto full = LatticeElement::full(model->frame());
  return make_bba(model, std::vector<FocalElement>{{std::move(focus), mass}, {std::move(full), 1.0 - mass}});
}

}  // namespace detail

// Theta' = {A', B', C'} with A' = A minus B, B' = B minus A, C' = A and B,
// all exclusive (Shafer model).
inline ModelRef m3_model(const Frame& classes) {
  require(classes.size() == 2, "model M3 needs a frame of exactly two classes");
  const auto& a = classes.name(0);
  const auto& b = classes.name(1);
  return ConstraintModel::shafer(make_frame({a + "'", b + "'", a + "+" + b}));
}

inline MassFunction model_m3(const TileAnnotation& ann, const Frame& classes, const CertaintyWeights& weights = {}) {
  const auto s = detail::read_two_class(ann, classes, weights);
  auto model = m3_model(classes);
  const Frame& f = model->frame();
  const auto a_only = LatticeElement::atom(f, 0);
  const auto b_only = LatticeElement::atom(f, 1);
  const auto both = LatticeElement::atom(f, 2);
  if (s.says_a && s.says_b) return detail::two_focal(model, both, s.joint);
  if (s.says_a) return detail::two_focal(model, join(a_only, both), s.weight_a);
  return detail::two_focal(model, join(b_only, both), s.weight_b);
}

// Free DSm model on {A, B}; a two-class statement asserts A & B.
inline MassFunction model_m4(const TileAnnotation& ann, FrameRef classes, const CertaintyWeights& weights = {}) {
  const auto s = detail::read_two_class(ann, *classes, weights);
  auto model = ConstraintModel::free(classes);
  const Frame& f = model->frame();
  const auto a = LatticeElement::atom(f, 0);
  const auto b = LatticeElement::atom(f, 1);
  if (s.says_a && s.says_b) return detail::two_focal(model, meet(a, b), s.joint);
  if (s.says_a) return detail::two_focal(model, a, s.weight_a);
  return detail::two_focal(model, b, s.weight_b);
}

namespace detail {

inline MassFunction proportional_model(const TileAnnotation& ann, const ModelRef& model,
                                       const CertaintyWeights& weights) {
  const Frame& f = model->frame();
  std::vector<double> per_class(f.size(), 0.0);
  double assigned = 0.0;
  for (const auto& e : ann.entries) {
    const auto idx = f.index_of(e.cls);
    require(idx.has_value(), "class '" + e.cls + "' is not in the frame");
    const double m = e.proportion * certainty_weight(e, weights);
    per_class[*idx] += m;
    assigned += m;
  }
  require(assigned <= 1.0 + kMassTolerance,
          "annotation of expert '" + ann.expert_id + "' leaves negative mass on the ignorance");
  std::vector<FocalElement> items;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (per_class[i] > 0.0) items.push_back({LatticeElement::atom(f, i), per_class[i]});
  // Whatever is left goes to the full ignorance; tiny rounding excess is absorbed.
  const double rest = std::max(0.0, 1.0 - assigned);
  items.push_back({LatticeElement::full(f), rest});
  if (assigned > 1.0) items.front().mass -= assigned - 1.0;
  return make_bba(model, std::move(items));
}

}  // namespace detail

// m(X) = p_X c_X for each stated class, remainder on A | B. The model may be
// free (DSmT) or Shafer (DST).
inline MassFunction model_m5(const TileAnnotation& ann, const ModelRef& model, const CertaintyWeights& weights = {}) {
  require(model->frame().size() == 2, "model M5 needs a frame of exactly two classes");
  ann.validate();
  return detail::proportional_model(ann, model, weights);
}

// m(X) = sum over certainty levels k of p_Xk c_k, remainder on Theta. The same
// class may appear several times with different certainty levels.
inline MassFunction model_m5_generalized(const TileAnnotation& ann, const CertaintyWeights& weights,
                                         const ModelRef& model) {
  weights.validate();
  if (ann.entries.empty()) return vacuous_bba(model);
  ann.validate();
  return detail::proportional_model(ann, model, weights);
}

struct CalibrationSettings {
  double target = 0.8;         // expected mean belief on the two retained targets
  double theta_floor = 0.001;  // minimum mass kept on the ignorance
};

// Turns a classifier's score vector into a mass function on its two best
// targets plus Theta, rescaled by the adaptive factor
//   f = (target / mean(o)) * (target / mean(b)),  b = f * o,
// where the means run over every signal this classifier has processed so far.
// One instance per classifier; the order of calls matters.
class ClassifierCalibration {
 public:
  explicit ClassifierCalibration(ModelRef model, CalibrationSettings settings = {})
      : model_(std::move(model)), settings_(settings) {
    require(settings_.target > 0.0 && settings_.target < 1.0, "calibration target must lie in (0, 1)");
    require(settings_.theta_floor > 0.0 && settings_.theta_floor < 1.0, "Theta floor must lie in (0, 1)");
  }

  double factor() const noexcept { return factor_; }
  std::size_t processed() const noexcept { return count_; }
  double mean_scores() const noexcept { return count_ ? sum_o_ / static_cast<double>(count_) : 0.0; }
  double mean_beliefs() const noexcept { return count_ ? sum_b_ / static_cast<double>(count_) : 0.0; }
  const ConstraintModel& model() const { return *model_; }

  MassFunction calibrate(std::span<const double> scores) {
    const Frame& f = model_->frame();
    require(scores.size() == f.size(), "score vector length does not match the frame");
    for (double s : scores) require(std::isfinite(s) && s >= 0.0 && s <= 1.0, "scores must lie in [0, 1]");

    // Two highest scores; ties resolve to the lower class index.
    std::size_t first = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[first]) first = i;
    std::optional<std::size_t> second;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (i == first) continue;
      if (!second || scores[i] > scores[*second]) second = i;
    }
    const double o1 = scores[first];
    const double o2 = second ? scores[*second] : 0.0;
    require(o1 > 0.0, "all classifier scores are zero");

    double b1 = factor_ * o1;
    double b2 = factor_ * o2;

    sum_o_ += o1 + o2;
    sum_b_ += b1 + b2;
    ++count_;
    factor_ = (settings_.target / mean_scores()) * (settings_.target / mean_beliefs());

    // Keep the larger mass, force the other so that Theta holds the floor.
    const double floor = settings_.theta_floor;
    if (1.0 - b1 - b2 < floor) {
      b1 = std::min(b1, 1.0 - floor);
      b2 = std::max(0.0, 1.0 - floor - b1);
    }
    std::vector<FocalElement> items{{LatticeElement::atom(f, first), b1}};
    if (second && b2 > 0.0) items.push_back({LatticeElement::atom(f, *second), b2});
    items.push_back({LatticeElement::full(f), 1.0 - b1 - b2});
    return make_bba(model_, std::move(items));
  }

 private:
  ModelRef model_;
  CalibrationSettings settings_;
  double factor_ = 1.0;
  double sum_o_ = 0.0;
  double sum_b_ = 0.0;
  std::size_t count_ = 0;
};

inline MassFunction calibrate_classifier(ClassifierCalibration& calibration, std::span<const double> scores) {
  return calibration.calibrate(scores);
}

}  // namespace dsmf
