/* Copyright 2026 The hsaudit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/


// Brute-force reference implementations used as test oracles. They share no
// code with the library and favour obviousness over speed.

#ifndef HSAUDIT_TESTS_ORACLES_H_
#define HSAUDIT_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hsaudit::oracle {

// Lower middle order statistic after a full sort.
inline double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

inline double Mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  void Add(bool gold_positive, bool predicted_positive) {
    if (gold_positive && predicted_positive) ++tp;
    else if (!gold_positive && predicted_positive) ++fp;
    else if (gold_positive) ++fn;
    else ++tn;
  }
  double Precision() const { return tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp); }
  double Recall() const { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }
  double F1() const {
    const double p = Precision(), r = Recall();
    return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
  }
  double Accuracy() const {
    const std::size_t n = tp + fp + fn + tn;
    return n == 0 ? 0.0 : double(tp + tn) / double(n);
  }
};

inline std::optional<double> Pearson(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const double mx = Mean(x), my = Mean(y);
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Average ranks (1-based) by pairwise comparison.
inline std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      if (w == v[i]) ++equal;
    }
    r[i] = double(less) + (double(equal) + 1.0) / 2.0;
  }
  return r;
}

// Softmax in long double without max subtraction; fine for moderate logits.
inline std::vector<double> Softmax(const std::vector<double>& z) {
  long double sum = 0;
  for (double v : z) sum += std::exp(static_cast<long double>(v));
  std::vector<double> p;
  for (double v : z) p.push_back(static_cast<double>(std::exp(static_cast<long double>(v)) / sum));
  return p;
}

struct BinTally {
  std::size_t count = 0;
  long double score_sum = 0;
  std::size_t positives = 0;
};

// n half-open bins [k/n, (k+1)/n); the last one also takes 1.0.
inline std::vector<BinTally> Bin(const std::vector<std::pair<double, bool>>& preds, int n) {
  std::vector<BinTally> bins(n);
  for (const auto& [s, positive] : preds) {
    for (int k = 0; k < n; ++k) {
      const double lo = double(k) / n, hi = double(k + 1) / n;
      if ((s >= lo && s < hi) || (k == n - 1 && s >= lo)) {
        ++bins[k].count;
        bins[k].score_sum += s;
        bins[k].positives += positive ? 1 : 0;
        break;
      }
    }
  }
  return bins;
}

inline double Ece(const std::vector<BinTally>& bins) {
  std::size_t total = 0;
  for (const auto& b : bins) total += b.count;
  long double ece = 0;
  for (const auto& b : bins) {
    if (b.count == 0) continue;
    const long double mean = b.score_sum / b.count;
    const long double emp = static_cast<long double>(b.positives) / b.count;
    ece += static_cast<long double>(b.count) / total * std::fabs(mean - emp);
  }
  return static_cast<double>(ece);
}

// Fraction of points whose label agrees with the truth under the best
// one-to-one relabeling, found greedily on the contingency table (exact when
// clusters are pure).
inline double PermutationAgreement(const std::vector<int>& truth,
                                   const std::vector<int>& found) {
  std::map<std::pair<int, int>, std::size_t> table;
  for (std::size_t i = 0; i < truth.size(); ++i) ++table[{truth[i], found[i]}];
  std::vector<std::pair<std::size_t, std::pair<int, int>>> cells;
  for (const auto& [k, v] : table) cells.push_back({v, k});
  std::sort(cells.rbegin(), cells.rend());
  std::map<int, bool> used_t, used_f;
  std::size_t agree = 0;
  for (const auto& [v, k] : cells) {
    if (used_t[k.first] || used_f[k.second]) continue;
    used_t[k.first] = used_f[k.second] = true;
    agree += v;
  }
  return double(agree) / double(truth.size());
}

}  // namespace hsaudit::oracle

#endif  // HSAUDIT_TESTS_ORACLES_H_
