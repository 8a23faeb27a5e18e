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


// Classification metrics, 2-D k-means with distance/accuracy correlation,
// and reliability statistics.

#ifndef HSAUDIT_ANALYSIS_H_
#define HSAUDIT_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsaudit/adapters.h"
#include "hsaudit/corpus.h"
#include "hsaudit/scm.h"

namespace hsaudit {

struct PrfRow {
  std::string name;  // identity display name, or "Avg"
  std::optional<TargetIdentity> identity;  // nullopt for the macro row
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  bool precision_degenerate = false;  // tp + fp == 0
  bool recall_degenerate = false;     // tp + fn == 0
};

struct PrfTable {
  std::vector<PrfRow> rows;  // identity order; named identities first
  PrfRow macro;              // unweighted mean of the rows
};

// Per-identity P/R/F1 for `positive`, over cases naming a protected group.
// Predictions for cases outside the corpus are ignored. Throws
// Error(kMissingPrediction) when a corpus case has no prediction.
PrfTable PrfPerIdentity(std::span<const ScoreRecord> predictions, const Corpus& corpus,
                        GoldLabel positive = GoldLabel::kHateful);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  double tolerance = 1e-8;  // max centroid drift
};

struct KMeansResult {
  std::vector<Point2> centroids;
  std::vector<int> assignment;  // per input point
  double inertia = 0.0;
  std::vector<double> inertia_history;  // after each assignment step, best run
  int iterations = 0;
  int best_restart = 0;
};

// k-means++ seeding, Lloyd iterations, empty clusters re-seeded to the point
// farthest from its centroid, best restart by inertia (ties: lowest index).
// Throws Error(kTooFewPoints) when points.size() < k or k < 1.
KMeansResult KMeans2D(std::span<const Point2> points, int k, std::uint64_t seed,
                      const KMeansOptions& options = {});

struct Cluster2D {
  int id = 0;
  Point2 centroid;
  std::vector<std::string> members;  // case ids
  double distance = 0.0;             // |centroid|
  std::optional<double> accuracy;    // fraction label == gold
};

// Clusters the (warmth, competence) points of `scores`.
std::vector<Cluster2D> ClusterScmScores(std::span<const ScmScore> scores, int k,
                                        std::uint64_t seed, KMeansResult* raw = nullptr);

// Throws Error(kMissingPrediction) / Error(kUnknownCaseId).
void FillClusterAccuracy(std::vector<Cluster2D>& clusters,
                         std::span<const ScoreRecord> predictions, const Corpus& corpus);

// Sample correlations; nullopt when either variable has zero variance.
std::optional<double> PearsonCorrelation(std::span<const double> x, std::span<const double> y);
std::optional<double> SpearmanCorrelation(std::span<const double> x, std::span<const double> y);

struct ClusterCorrelation {
  std::optional<double> pearson;   // headline
  std::optional<double> spearman;
  bool degenerate = false;         // constant distance or accuracy
  std::vector<Cluster2D> table;    // non-empty clusters sorted by distance
};

// Correlates centroid distance with cluster accuracy over clusters that have
// members. Throws Error(kTooFewClusters) with fewer than three such clusters.
ClusterCorrelation ClusterAccuracyCorrelation(std::span<const Cluster2D> clusters);

struct ReliabilityBin {
  int index = 0;  // 1-based
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::optional<double> mean_predicted;  // nullopt for empty bins
  std::optional<double> empirical_rate;
};

struct ReliabilityTable {
  std::vector<ReliabilityBin> bins;
  double ece = 0.0;
  std::size_t total = 0;
};

// Bin index of a score in n equal-width bins over [0, 1]; the last bin is
// closed at 1.0.
int BinIndex(double score, int n);

// Throws Error(kInvalidArgument) when n < 2, Error(kUnknownCaseId) for
// predictions outside the corpus.
ReliabilityTable ReliabilityBins(std::span<const ScoreRecord> predictions,
                                 const Corpus& corpus, int n = 20,
                                 GoldLabel positive = GoldLabel::kHateful);

struct ScoreHistogram {
  int bins = 0;
  std::map<GoldLabel, std::vector<std::size_t>> counts;  // both labels present
};

ScoreHistogram ComputeScoreHistogram(std::span<const ScoreRecord> predictions,
                                     const Corpus& corpus, int bins = 20);

// clusters.csv: case_id,cluster,warmth,competence
std::string ClustersToCsv(std::span<const Cluster2D> clusters,
                          std::span<const ScmScore> scores);
// reliability.csv: bin,lo,hi,mean_pred,emp_rate,count
std::string ReliabilityToCsv(const ReliabilityTable& table);

}  // namespace hsaudit

#endif  // HSAUDIT_ANALYSIS_H_
