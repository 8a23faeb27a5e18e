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


// Rendering of analysis results into markdown/CSV tables and plot-ready CSV
// files, plus the manifest that lists every emitted file with its checksum.

#ifndef HSAUDIT_REPORT_H_
#define HSAUDIT_REPORT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsaudit/analysis.h"
#include "hsaudit/bias.h"
#include "hsaudit/corpus.h"
#include "hsaudit/emotion.h"
#include "hsaudit/scm.h"

namespace hsaudit {

struct Table {
  std::string name;         // file stem
  std::string producer_op;  // operation that computed the values
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct DataFile {
  std::string name;  // file stem
  std::string producer_op;
  std::string csv;
};

struct ReportBundle {
  std::vector<std::pair<std::string, std::string>> metadata;  // in insertion order
  std::vector<Table> tables;
  std::vector<DataFile> plots;
};

struct ManifestEntry {
  std::string name;  // path relative to the bundle directory
  std::string sha256;
  std::string producer_op;
};

std::string RenderMarkdown(const Table& table);
std::string RenderCsv(const Table& table);

// Writes tables/<name>.md and tables/<name>.csv. Throws Error(kIoFailure).
std::vector<ManifestEntry> EmitTables(const ReportBundle& bundle,
                                      const std::filesystem::path& dir);
// Writes plots/<name>.csv.
std::vector<ManifestEntry> EmitPlotData(const ReportBundle& bundle,
                                        const std::filesystem::path& dir);
// manifest.json: {"files":[{"name","sha256","producer_op"}],"metadata":{...}}
std::string RenderManifest(const ReportBundle& bundle,
                           std::span<const ManifestEntry> files);
// Tables, plot data and manifest.json; returns the manifest text.
std::string EmitBundle(const ReportBundle& bundle, const std::filesystem::path& dir);

// Table builders.
Table CorpusStatsTable(const std::string& corpus_name, const CorpusStats& stats);
Table BiasTable(std::span<const BiasProfile> profiles);
Table PrfReportTable(const std::string& name, const std::string& model_id,
                     const PrfTable& prf);
Table EmotionAccuracyTable(const std::string& model_id,
                           const std::map<Emotion, AccuracyCell>& cells);
Table PolarityAccuracyTable(
    const std::string& model_id,
    const std::map<std::pair<GoldLabel, Polarity>, AccuracyCell>& cells);
Table ScmMeansTable(const std::map<std::pair<TargetIdentity, GoldLabel>, ScmMeans>& means);
Table StereotypeTableReport(const StereotypeTable& table);
Table ClusterCorrelationTable(const std::string& model_id,
                              const ClusterCorrelation& correlation);
Table CalibrationTable(const std::string& model_id, const ReliabilityTable& reliability);

// Plot-data builders.
DataFile BiasBarsData(std::span<const BiasProfile> profiles);
DataFile EmotionMatrixData(const std::string& name, const EmotionDistribution& dist);
DataFile ScatterData(std::span<const ScmScore> scores, const Corpus& corpus,
                     std::span<const Cluster2D> clusters);
DataFile DistanceAccuracyData(const std::string& model_id,
                              const ClusterCorrelation& correlation);
DataFile ReliabilityData(const std::string& model_id, const ReliabilityTable& table);
DataFile HistogramData(const std::string& model_id, const ScoreHistogram& histogram);

}  // namespace hsaudit

#endif  // HSAUDIT_REPORT_H_
