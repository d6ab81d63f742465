#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "dsmf/errors.hpp"

namespace dsmf {

using Matrix = std::vector<std::vector<double>>;

// Pooled disagreement counts between decision vectors of several rules.
class DivergenceTally {
 public:
  explicit DivergenceTally(std::size_t rules) : differ_(rules, std::vector<std::size_t>(rules, 0)) {}

  template <class Decision>
  void add(std::span<const std::vector<Decision>> decisions) {
    require(decisions.size() == differ_.size(), "decision vectors do not match the rule count");
    const std::size_t n = decisions.empty() ? 0 : decisions.front().size();
    for (const auto& d : decisions) require(d.size() == n, "decision vectors have different lengths");
    for (std::size_t r = 0; r < decisions.size(); ++r)
      for (std::size_t s = r + 1; s < decisions.size(); ++s) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < n; ++i) c += decisions[r][i] == decisions[s][i] ? 0 : 1;
        differ_[r][s] += c;
        differ_[s][r] += c;
      }
    total_ += n;
  }

  void merge(const DivergenceTally& other) {
    require(other.differ_.size() == differ_.size(), "tallies for different rule sets");
    for (std::size_t r = 0; r < differ_.size(); ++r)
      for (std::size_t s = 0; s < differ_.size(); ++s) differ_[r][s] += other.differ_[r][s];
    total_ += other.total_;
  }

  std::size_t instances() const noexcept { return total_; }

  // Entry (r, s): percentage of instances where rules r and s decide differently.
  Matrix percent() const {
    Matrix out(differ_.size(), std::vector<double>(differ_.size(), 0.0));
    if (total_ == 0) return out;
    for (std::size_t r = 0; r < differ_.size(); ++r)
      for (std::size_t s = 0; s < differ_.size(); ++s)
        out[r][s] = 100.0 * static_cast<double>(differ_[r][s]) / static_cast<double>(total_);
    return out;
  }

 private:
  std::vector<std::vector<std::size_t>> differ_;
  std::size_t total_ = 0;
};

template <class Decision>
Matrix divergence_matrix(std::span<const std::vector<Decision>> decisions) {
  DivergenceTally tally(decisions.size());
  tally.add(decisions);
  return tally.percent();
}

struct AccuracyInterval {
  double rate = 0.0;  // percent
  double lower = 0.0;
  double upper = 0.0;
};

inline constexpr double kNormalQuantile95 = 1.959963984540054;

// Mean of per-trial good-classification rates with a 95% normal-approximation
// interval on that mean.
inline AccuracyInterval accuracy_with_ci(std::span<const double> trial_rates) {
  require(!trial_rates.empty(), "no trials");
  const double n = static_cast<double>(trial_rates.size());
  const double mean = std::accumulate(trial_rates.begin(), trial_rates.end(), 0.0) / n;
  if (trial_rates.size() == 1) return {mean, mean, mean};
  double ss = 0.0;
  for (double r : trial_rates) ss += (r - mean) * (r - mean);
  const double half = kNormalQuantile95 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return {mean, mean - half, mean + half};
}

template <class Decision>
AccuracyInterval accuracy_with_ci(std::span<const std::vector<Decision>> decisions_per_trial,
                                  std::span<const std::vector<Decision>> truth_per_trial) {
  require(decisions_per_trial.size() == truth_per_trial.size(), "decision and truth trial counts differ");
  std::vector<double> rates;
  for (std::size_t t = 0; t < decisions_per_trial.size(); ++t) {
    const auto& d = decisions_per_trial[t];
    const auto& truth = truth_per_trial[t];
    require(d.size() == truth.size(), "missing truth labels");
    require(!d.empty(), "trial without instances");
    std::size_t ok = 0;
    for (std::size_t i = 0; i < d.size(); ++i) ok += d[i] == truth[i] ? 1 : 0;
    rates.push_back(100.0 * static_cast<double>(ok) / static_cast<double>(d.size()));
  }
  return accuracy_with_ci(rates);
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, "spearman needs two equal-length samples");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  if (da == 0.0 || db == 0.0) return 0.0;
  return num / std::sqrt(da * db);
}

}  // namespace dsmf
