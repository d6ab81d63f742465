#pragma once

// Synthetic stand-ins for expert annotation panels and classifier score
// streams. Every generator is a pure function of its spec and seed.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dsmf/io.hpp"

namespace dsmf {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

struct AnnotationPanelSpec {
  std::vector<std::string> classes{"rock", "cobble", "ripple", "sand", "silt", "shadow", "other"};
  std::size_t experts = 3;
  std::size_t tiles = 1000;
  double disagreement = 0.1;     // chance an expert relabels a class of the tile
  double multi_class_rate = 0.2; // chance a tile holds two sediments
  double certainty_probs[3] = {0.5, 0.3, 0.2};  // sure, moderately sure, not sure

  void validate() const {
    require(classes.size() >= 2, "annotation panel needs at least two classes");
    require(experts >= 1, "annotation panel needs at least one expert");
    require(tiles >= 1, "annotation panel needs at least one tile");
    require(disagreement >= 0.0 && disagreement <= 1.0, "disagreement must lie in [0, 1]");
    require(multi_class_rate >= 0.0 && multi_class_rate <= 1.0, "multi_class_rate must lie in [0, 1]");
    double total = 0.0;
    for (double p : certainty_probs) {
      require(p >= 0.0, "certainty probabilities must be non-negative");
      total += p;
    }
    require(total > 0.0, "certainty probabilities must not all be zero");
  }
};

struct AnnotationPanel {
  FrameRef frame;
  std::vector<AnnotationRecord> records;  // tile-major, experts in order
  std::vector<std::size_t> truth;         // dominant class per tile
};

inline AnnotationPanel generate_annotation_panel(const AnnotationPanelSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(derive_seed(seed, 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t k = spec.classes.size();
  std::uniform_int_distribution<std::size_t> pick_class(0, k - 1);
  std::discrete_distribution<int> pick_level(std::begin(spec.certainty_probs), std::end(spec.certainty_probs));

  AnnotationPanel panel{make_frame(spec.classes), {}, {}};
  for (std::size_t t = 0; t < spec.tiles; ++t) {
    // Ground-truth composition of the tile.
    std::vector<std::pair<std::size_t, double>> parts;
    const std::size_t main = pick_class(rng);
    if (unit(rng) < spec.multi_class_rate) {
      std::size_t other = pick_class(rng);
      while (other == main) other = pick_class(rng);
      const double p = 0.5 + 0.4 * unit(rng);
      parts = {{main, p}, {other, 1.0 - p}};
    } else {
      parts = {{main, 1.0}};
    }
    panel.truth.push_back(main);

    const std::string tile = "t" + std::to_string(t + 1);
    for (std::size_t e = 0; e < spec.experts; ++e) {
      TileAnnotation ann{"e" + std::to_string(e + 1), {}};
      for (const auto& [cls, p] : parts) {
        std::size_t said = cls;
        if (unit(rng) < spec.disagreement) {
          said = pick_class(rng);
          while (said == cls) said = pick_class(rng);
        }
        const auto level = static_cast<CertaintyLevel>(pick_level(rng));
        auto it = std::find_if(ann.entries.begin(), ann.entries.end(),
                               [&](const AnnotationEntry& x) { return x.cls == spec.classes[said] &&
                                                                     x.certainty == Certainty(level); });
        if (it != ann.entries.end())
          it->proportion += p;
        else
          ann.entries.push_back({spec.classes[said], p, level});
      }
      panel.records.push_back({tile, std::move(ann)});
    }
  }
  return panel;
}

struct ClassifierProfile {
  std::string name;
  double accuracy = 0.85;   // chance the top score is the true class
  double crisp_rate = 0.0;  // chance of a one-hot output (score 1 on the top class)
  double top_low = 0.45;    // range of the top score when not crisp
  double top_high = 0.95;
};

struct ClassifierPanelSpec {
  std::size_t classes = 10;
  std::size_t signals_per_class = 150;
  std::vector<ClassifierProfile> sources{
      {"fknn", 0.86, 0.55, 0.55, 0.95},
      {"sart", 0.82, 0.0, 0.40, 0.85},
      {"mlp", 0.84, 0.0, 0.45, 0.90},
  };
  double confusion_partner_rate = 0.5;  // share of errors going to a fixed look-alike class

  void validate() const {
    require(classes >= 2, "classifier panel needs at least two classes");
    require(classes <= Frame::kMaxAtoms, "classifier panel has too many classes");
    require(signals_per_class >= 1, "classifier panel needs signals");
    require(!sources.empty(), "classifier panel needs at least one source");
    for (const auto& s : sources) {
      require(s.accuracy >= 0.0 && s.accuracy <= 1.0, "accuracy must lie in [0, 1]");
      require(s.crisp_rate >= 0.0 && s.crisp_rate <= 1.0, "crisp_rate must lie in [0, 1]");
      require(s.top_low > 0.0 && s.top_low <= s.top_high && s.top_high <= 1.0,
              "top score range must satisfy 0 < low <= high <= 1");
    }
    require(confusion_partner_rate >= 0.0 && confusion_partner_rate <= 1.0,
            "confusion_partner_rate must lie in [0, 1]");
  }
};

// Scores are non-negative and sum to at most 1 over the classes, as a
// normalized classifier output would.
inline ClassifierTable generate_classifier_panel(const ClassifierPanelSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<std::string> names;
  for (std::size_t c = 0; c < spec.classes; ++c) names.push_back("T" + std::to_string(c + 1));
  ClassifierTable table{make_frame(names), {}};

  std::mt19937_64 rng(derive_seed(seed, 2));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t k = spec.classes;
  std::uniform_int_distribution<std::size_t> pick_class(0, k - 1);
  std::vector<std::size_t> partner(k);
  for (std::size_t c = 0; c < k; ++c) partner[c] = (c + 1) % k;

  auto other_than = [&](std::size_t a, std::size_t b) {
    std::size_t c = pick_class(rng);
    while (c == a || c == b) c = pick_class(rng);
    return c;
  };

  std::vector<std::size_t> truths;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t s = 0; s < spec.signals_per_class; ++s) truths.push_back(c);
  std::shuffle(truths.begin(), truths.end(), rng);

  for (std::size_t i = 0; i < truths.size(); ++i) {
    const std::size_t truth = truths[i];
    for (const auto& src : spec.sources) {
      std::size_t top = truth;
      if (unit(rng) >= src.accuracy)
        top = unit(rng) < spec.confusion_partner_rate ? partner[truth] : other_than(truth, truth);
      std::vector<double> scores(k, 0.0);
      if (unit(rng) < src.crisp_rate) {
        scores[top] = 1.0;
      } else {
        const double s1 = src.top_low + (src.top_high - src.top_low) * unit(rng);
        std::size_t second;
        if (top != truth)
          second = unit(rng) < 0.6 ? truth : other_than(top, top);
        else
          second = unit(rng) < spec.confusion_partner_rate ? partner[truth] : other_than(top, top);
        const double s2 = std::min(s1, 1.0 - s1) * (0.3 + 0.7 * unit(rng));
        scores[top] = s1;
        scores[second] = s2;
        // The rest shares what is left, each strictly below the second score.
        double rest = std::max(0.0, 1.0 - s1 - s2) * unit(rng);
        std::vector<double> w(k, 0.0);
        double wsum = 0.0;
        for (std::size_t c = 0; c < k; ++c)
          if (c != top && c != second) wsum += (w[c] = unit(rng));
        for (std::size_t c = 0; c < k; ++c)
          if (wsum > 0.0 && w[c] > 0.0) scores[c] = std::min(rest * w[c] / wsum, 0.9 * s2);
      }
      table.records.push_back({"s" + std::to_string(i + 1), src.name, truth, std::move(scores)});
    }
  }
  return table;
}

}  // namespace dsmf
