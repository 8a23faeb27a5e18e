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


#include "hsaudit/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "hsaudit/csv.h"
#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

double SquaredDistance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::unordered_map<std::string, const ScoreRecord*> IndexPredictions(
    std::span<const ScoreRecord> predictions) {
  std::unordered_map<std::string, const ScoreRecord*> out;
  out.reserve(predictions.size());
  for (const auto& p : predictions) out.emplace(p.case_id, &p);
  return out;
}

void FinishPrf(PrfRow& row) {
  row.precision_degenerate = row.tp + row.fp == 0;
  row.recall_degenerate = row.tp + row.fn == 0;
  row.precision = row.precision_degenerate
                      ? 0.0
                      : static_cast<double>(row.tp) / static_cast<double>(row.tp + row.fp);
  row.recall = row.recall_degenerate
                   ? 0.0
                   : static_cast<double>(row.tp) / static_cast<double>(row.tp + row.fn);
  const double pr = row.precision + row.recall;
  row.f1 = pr > 0.0 ? 2.0 * row.precision * row.recall / pr : 0.0;
  const std::size_t n = row.tp + row.fp + row.fn + row.tn;
  row.accuracy = n == 0 ? 0.0 : static_cast<double>(row.tp + row.tn) / static_cast<double>(n);
}

// Index of the nearest centroid; ties go to the lowest index.
int Nearest(const Point2& p, const std::vector<Point2>& centroids, double* dist2) {
  int best = 0;
  double best_d = SquaredDistance(p, centroids[0]);
  for (std::size_t j = 1; j < centroids.size(); ++j) {
    const double d = SquaredDistance(p, centroids[j]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  if (dist2 != nullptr) *dist2 = best_d;
  return best;
}

std::vector<Point2> SeedPlusPlus(std::span<const Point2> points, int k,
                                 std::mt19937_64& rng) {
  std::vector<Point2> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(points[UniformIndex(rng, points.size())]);
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    d2[i] = SquaredDistance(points[i], centroids[0]);
  }
  while (centroids.size() < static_cast<std::size_t>(k)) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = UniformDouble(rng) * total;
      double acc = 0.0;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = UniformIndex(rng, points.size());
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(points[i], centroids.back()));
    }
  }
  return centroids;
}

KMeansResult LloydRun(std::span<const Point2> points, std::vector<Point2> centroids,
                      const KMeansOptions& options) {
  const std::size_t k = centroids.size();
  KMeansResult run;
  run.assignment.assign(points.size(), 0);
  std::vector<double> dist2(points.size());

  auto assign = [&] {
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      run.assignment[i] = Nearest(points[i], centroids, &dist2[i]);
      inertia += dist2[i];
    }
    run.inertia_history.push_back(inertia);
    return inertia;
  };

  run.inertia = assign();
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    std::vector<Point2> sums(k);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto c = static_cast<std::size_t>(run.assignment[i]);
      sums[c].x += points[i].x;
      sums[c].y += points[i].y;
      ++counts[c];
    }
    std::vector<Point2> next(k);
    std::vector<bool> taken(points.size(), false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        next[c] = {sums[c].x / static_cast<double>(counts[c]),
                   sums[c].y / static_cast<double>(counts[c])};
        continue;
      }
      // Empty cluster: move it onto the point farthest from its centroid.
      std::size_t far = points.size();
      double far_d = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!taken[i] && dist2[i] > far_d) {
          far_d = dist2[i];
          far = i;
        }
      }
      if (far == points.size()) {
        next[c] = centroids[c];
      } else {
        taken[far] = true;
        next[c] = points[far];
        dist2[far] = 0.0;
      }
    }
    double drift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      drift = std::max(drift, std::sqrt(SquaredDistance(centroids[c], next[c])));
    }
    centroids = std::move(next);
    run.iterations = iter + 1;
    run.inertia = assign();
    if (drift < options.tolerance) break;
  }
  run.centroids = std::move(centroids);
  return run;
}

std::vector<double> Ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::string OptionalField(const std::optional<double>& v) {
  return v ? FormatShortest(*v) : std::string();
}

}  // namespace

PrfTable PrfPerIdentity(std::span<const ScoreRecord> predictions, const Corpus& corpus,
                        GoldLabel positive) {
  const auto by_case = IndexPredictions(predictions);
  std::map<TargetIdentity, PrfRow> rows;
  for (const auto& c : corpus.cases()) {
    if (c.identity.is_none()) continue;
    auto it = by_case.find(c.case_id);
    if (it == by_case.end()) {
      throw Error(ErrorCode::kMissingPrediction, "no prediction for case '" + c.case_id + "'");
    }
    PrfRow& row = rows[c.identity];
    const bool gold_pos = c.gold == positive;
    const bool pred_pos = it->second->label == positive;
    if (gold_pos && pred_pos) ++row.tp;
    if (!gold_pos && pred_pos) ++row.fp;
    if (gold_pos && !pred_pos) ++row.fn;
    if (!gold_pos && !pred_pos) ++row.tn;
  }
  PrfTable table;
  PrfRow& macro = table.macro;
  macro.name = "Avg";
  for (auto& [identity, row] : rows) {
    row.name = identity.DisplayName();
    row.identity = identity;
    FinishPrf(row);
    macro.tp += row.tp;
    macro.fp += row.fp;
    macro.fn += row.fn;
    macro.tn += row.tn;
    macro.precision += row.precision;
    macro.recall += row.recall;
    macro.f1 += row.f1;
    macro.accuracy += row.accuracy;
    macro.precision_degenerate = macro.precision_degenerate || row.precision_degenerate;
    macro.recall_degenerate = macro.recall_degenerate || row.recall_degenerate;
    table.rows.push_back(row);
  }
  if (!rows.empty()) {
    const auto n = static_cast<double>(rows.size());
    macro.precision /= n;
    macro.recall /= n;
    macro.f1 /= n;
    macro.accuracy /= n;
  }
  return table;
}

KMeansResult KMeans2D(std::span<const Point2> points, int k, std::uint64_t seed,
                      const KMeansOptions& options) {
  if (k < 1 || points.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kTooFewPoints, std::to_string(points.size()) +
                                              " points cannot form " + std::to_string(k) +
                                              " clusters");
  }
  std::mt19937_64 rng(seed);
  KMeansResult best;
  bool have_best = false;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    KMeansResult run = LloydRun(points, SeedPlusPlus(points, k, rng), options);
    run.best_restart = r;
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

std::vector<Cluster2D> ClusterScmScores(std::span<const ScmScore> scores, int k,
                                        std::uint64_t seed, KMeansResult* raw) {
  std::vector<Point2> points;
  points.reserve(scores.size());
  for (const auto& s : scores) points.push_back({s.warmth, s.competence});
  KMeansResult result = KMeans2D(points, k, seed);
  std::vector<Cluster2D> clusters(result.centroids.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    clusters[c].id = static_cast<int>(c);
    clusters[c].centroid = result.centroids[c];
    clusters[c].distance = std::hypot(result.centroids[c].x, result.centroids[c].y);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    clusters[static_cast<std::size_t>(result.assignment[i])].members.push_back(
        scores[i].case_id);
  }
  if (raw != nullptr) *raw = std::move(result);
  return clusters;
}

void FillClusterAccuracy(std::vector<Cluster2D>& clusters,
                         std::span<const ScoreRecord> predictions, const Corpus& corpus) {
  const auto by_case = IndexPredictions(predictions);
  for (auto& cluster : clusters) {
    std::size_t correct = 0;
    for (const auto& id : cluster.members) {
      const TestCase& c = corpus.Get(id);
      auto it = by_case.find(id);
      if (it == by_case.end()) {
        throw Error(ErrorCode::kMissingPrediction, "no prediction for case '" + id + "'");
      }
      if (it->second->label == c.gold) ++correct;
    }
    cluster.accuracy.reset();
    if (!cluster.members.empty()) {
      cluster.accuracy =
          static_cast<double>(correct) / static_cast<double>(cluster.members.size());
    }
  }
}

std::optional<double> PearsonCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> SpearmanCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) return std::nullopt;
  const auto rx = Ranks(x);
  const auto ry = Ranks(y);
  return PearsonCorrelation(rx, ry);
}

ClusterCorrelation ClusterAccuracyCorrelation(std::span<const Cluster2D> clusters) {
  ClusterCorrelation out;
  for (const auto& c : clusters) {
    if (!c.members.empty() && c.accuracy) out.table.push_back(c);
  }
  if (out.table.size() < 3) {
    throw Error(ErrorCode::kTooFewClusters,
                std::to_string(out.table.size()) + " non-empty clusters, need 3");
  }
  std::stable_sort(out.table.begin(), out.table.end(), [](const auto& a, const auto& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  std::vector<double> dist, acc;
  for (const auto& c : out.table) {
    dist.push_back(c.distance);
    acc.push_back(*c.accuracy);
  }
  out.pearson = PearsonCorrelation(dist, acc);
  out.spearman = SpearmanCorrelation(dist, acc);
  out.degenerate = !out.pearson.has_value();
  return out;
}

int BinIndex(double score, int n) {
  const int i = static_cast<int>(std::floor(score * n));
  return std::clamp(i, 0, n - 1);
}

ReliabilityTable ReliabilityBins(std::span<const ScoreRecord> predictions,
                                 const Corpus& corpus, int n, GoldLabel positive) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "reliability needs n >= 2 bins");
  std::vector<double> sum_pred(static_cast<std::size_t>(n), 0.0);
  std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
  ReliabilityTable table;
  table.bins.resize(static_cast<std::size_t>(n));
  for (const auto& p : predictions) {
    const TestCase& c = corpus.Get(p.case_id);
    const auto b = static_cast<std::size_t>(BinIndex(p.score, n));
    sum_pred[b] += p.score;
    if (c.gold == positive) ++pos[b];
    ++table.bins[b].count;
  }
  table.total = predictions.size();
  for (int i = 0; i < n; ++i) {
    auto& bin = table.bins[static_cast<std::size_t>(i)];
    bin.index = i + 1;
    bin.lo = static_cast<double>(i) / n;
    bin.hi = static_cast<double>(i + 1) / n;
    if (bin.count == 0) continue;
    const auto count = static_cast<double>(bin.count);
    bin.mean_predicted = sum_pred[static_cast<std::size_t>(i)] / count;
    bin.empirical_rate = static_cast<double>(pos[static_cast<std::size_t>(i)]) / count;
    table.ece += count / static_cast<double>(table.total) *
                 std::abs(*bin.mean_predicted - *bin.empirical_rate);
  }
  return table;
}

ScoreHistogram ComputeScoreHistogram(std::span<const ScoreRecord> predictions,
                                     const Corpus& corpus, int bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "histogram needs bins >= 1");
  ScoreHistogram h;
  h.bins = bins;
  h.counts[GoldLabel::kHateful].assign(static_cast<std::size_t>(bins), 0);
  h.counts[GoldLabel::kNonHateful].assign(static_cast<std::size_t>(bins), 0);
  for (const auto& p : predictions) {
    const TestCase& c = corpus.Get(p.case_id);
    ++h.counts[c.gold][static_cast<std::size_t>(BinIndex(p.score, bins))];
  }
  return h;
}

std::string ClustersToCsv(std::span<const Cluster2D> clusters,
                          std::span<const ScmScore> scores) {
  std::unordered_map<std::string, int> cluster_of;
  for (const auto& c : clusters) {
    for (const auto& id : c.members) cluster_of.emplace(id, c.id);
  }
  std::string out = CsvLine({"case_id", "cluster", "warmth", "competence"});
  for (const auto& s : scores) {
    auto it = cluster_of.find(s.case_id);
    out += CsvLine({s.case_id, it == cluster_of.end() ? "" : std::to_string(it->second),
                    FormatShortest(s.warmth), FormatShortest(s.competence)});
  }
  return out;
}

std::string ReliabilityToCsv(const ReliabilityTable& table) {
  std::string out = CsvLine({"bin", "lo", "hi", "mean_pred", "emp_rate", "count"});
  for (const auto& b : table.bins) {
    out += CsvLine({std::to_string(b.index), FormatShortest(b.lo), FormatShortest(b.hi),
                    OptionalField(b.mean_predicted), OptionalField(b.empirical_rate),
                    std::to_string(b.count)});
  }
  return out;
}

}  // namespace hsaudit
