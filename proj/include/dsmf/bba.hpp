#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsmf/expression.hpp"
#include "dsmf/frame.hpp"

namespace dsmf {

inline constexpr double kMassTolerance = 1e-9;

struct FocalElement {
  LatticeElement element;
  double mass = 0.0;
};

// A basic belief assignment over a constraint model. Focal elements are kept
// reduced under the model and sorted in canonical order; only the output of the
// raw conjunctive rule may carry mass on the empty element.
class MassFunction {
 public:
  MassFunction() = default;

  const ConstraintModel& model() const { return *model_; }
  const ModelRef& model_ref() const noexcept { return model_; }
  const Frame& frame() const { return model_->frame(); }
  std::span<const FocalElement> focal() const noexcept { return focal_; }

  double mass(const LatticeElement& x) const {
    const auto key = model_->reduce(x);
    auto it = std::lower_bound(focal_.begin(), focal_.end(), key,
                               [](const FocalElement& f, const LatticeElement& k) {
                                 return canonical_less(f.element, k);
                               });
    return (it != focal_.end() && it->element == key) ? it->mass : 0.0;
  }

  double empty_mass() const {
    return (!focal_.empty() && focal_.front().element.is_empty()) ? focal_.front().mass : 0.0;
  }

  double total() const {
    double s = 0.0;
    for (const auto& f : focal_) s += f.mass;
    return s;
  }

  // Builds from already-reduced elements; duplicates are summed in input order
  // and zero masses dropped. No sum check.
  static MassFunction from_reduced(ModelRef model, std::vector<FocalElement> items) {
    MassFunction m;
    m.model_ = std::move(model);
    std::stable_sort(items.begin(), items.end(), [](const FocalElement& a, const FocalElement& b) {
      return canonical_less(a.element, b.element);
    });
    for (auto& item : items) {
      if (!m.focal_.empty() && m.focal_.back().element == item.element)
        m.focal_.back().mass += item.mass;
      else
        m.focal_.push_back(std::move(item));
    }
    std::erase_if(m.focal_, [](const FocalElement& f) { return f.mass == 0.0; });
    return m;
  }

 private:
  ModelRef model_;
  std::vector<FocalElement> focal_;
};

inline MassFunction make_bba(ModelRef model, std::vector<FocalElement> assignments) {
  require(model != nullptr, "mass function needs a model");
  double sum = 0.0;
  std::vector<FocalElement> reduced;
  reduced.reserve(assignments.size());
  for (auto& a : assignments) {
    check_frame(model->frame(), a.element);
    require(std::isfinite(a.mass), "mass is not finite");
    require(a.mass >= 0.0, "negative mass " + std::to_string(a.mass));
    if (a.mass == 0.0) continue;
    require(!model->is_empty(a.element),
            "mass on element '" + format_element(model->frame(), a.element) + "' which is empty under the model");
    sum += a.mass;
    reduced.push_back({model->reduce(a.element), a.mass});
  }
  require(std::abs(sum - 1.0) <= kMassTolerance, "masses sum to " + std::to_string(sum) + ", expected 1");
  return MassFunction::from_reduced(std::move(model), std::move(reduced));
}

// Convenience form taking element expressions, e.g. {{"A", 0.6}, {"A|B", 0.4}}.
inline MassFunction make_bba(ModelRef model, std::initializer_list<std::pair<std::string_view, double>> items) {
  std::vector<FocalElement> assignments;
  for (const auto& [text, mass] : items) assignments.push_back({parse_element(model->frame(), text), mass});
  return make_bba(std::move(model), std::move(assignments));
}

inline MassFunction vacuous_bba(ModelRef model) {
  auto full = model->full();
  return MassFunction::from_reduced(std::move(model), {{std::move(full), 1.0}});
}

namespace detail {

inline const ModelRef& common_model(std::span<const MassFunction> bbas) {
  require(bbas.size() >= 2, "combination needs at least two sources");
  const auto& model = bbas.front().model_ref();
  for (const auto& m : bbas) require(m.model() == *model, "sources use different constraint models");
  return model;
}

inline ModelRef resolve_target(const ModelRef& input, ModelRef target) {
  if (!target) return input;
  require(target->refines(*input), "target model must be at least as strict as the sources' model");
  return target;
}

// Visits every joint configuration of focal elements in lexicographic order
// (source 0 outermost). The callback receives the chosen indices, the product
// of masses and the meet of the chosen elements.
template <class Visitor>
void for_each_configuration(std::span<const MassFunction> bbas, Visitor&& visit) {
  const std::size_t m = bbas.size();
  for (const auto& b : bbas)
    if (b.focal().empty()) return;
  std::vector<std::size_t> index(m, 0);
  std::vector<LatticeElement> prefix_meet(m);
  std::vector<double> prefix_product(m);
  auto refresh = [&](std::size_t from) {
    for (std::size_t j = from; j < m; ++j) {
      const auto& f = bbas[j].focal()[index[j]];
      prefix_meet[j] = j == 0 ? f.element : meet(prefix_meet[j - 1], f.element);
      prefix_product[j] = j == 0 ? f.mass : prefix_product[j - 1] * f.mass;
    }
  };
  refresh(0);
  while (true) {
    visit(std::span<const std::size_t>(index), prefix_product[m - 1], prefix_meet[m - 1]);
    std::size_t j = m;
    while (j > 0) {
      --j;
      if (++index[j] < bbas[j].focal().size()) break;
      index[j] = 0;
      if (j == 0) return;
    }
    refresh(j);
  }
}

}  // namespace detail

// Conjunctive mass landing on configurations whose meet is empty under the
// target model (defaults to the sources' model).
inline double total_conflict(std::span<const MassFunction> bbas, ModelRef target = nullptr) {
  const auto model = detail::resolve_target(detail::common_model(bbas), std::move(target));
  double conflict = 0.0;
  detail::for_each_configuration(bbas, [&](auto, double product, const LatticeElement& meet_element) {
    if (model->is_empty(meet_element)) conflict += product;
  });
  return conflict;
}

inline double auto_conflict(const MassFunction& bba, int order) {
  require(order >= 2, "auto-conflict order must be at least 2");
  std::vector<MassFunction> copies(static_cast<std::size_t>(order), bba);
  return total_conflict(copies);
}

}  // namespace dsmf
