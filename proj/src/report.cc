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


#include "hsaudit/report.h"

#include <algorithm>
#include <unordered_map>

#include "json.hpp"

#include "hsaudit/csv.h"
#include "hsaudit/error.h"
#include "hsaudit/util.h"

namespace hsaudit {
namespace {

constexpr char kNotAvailable[] = "n/a";

std::string Fixed(const std::optional<double>& v, int precision) {
  return v ? FormatFixed(*v, precision) : kNotAvailable;
}

std::string PolarityName(Polarity p) {
  switch (p) {
    case Polarity::kNegative: return "-1";
    case Polarity::kAmbiguous: return "0";
    case Polarity::kPositive: return "1";
  }
  return "";
}

std::string MarkdownCell(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') {
      out += "\\|";
    } else if (ch == '\n' || ch == '\r') {
      out += ' ';
    } else {
      out += ch;
    }
  }
  return out;
}

}  // namespace

std::string RenderMarkdown(const Table& table) {
  std::string out;
  if (!table.title.empty()) out += "### " + table.title + "\n\n";
  auto line = [&](const std::vector<std::string>& cells) {
    out += "|";
    for (const auto& c : cells) out += " " + MarkdownCell(c) + " |";
    out += "\n";
  };
  line(table.columns);
  out += "|";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& row : table.rows) line(row);
  return out;
}

std::string RenderCsv(const Table& table) {
  std::string out = CsvLine(table.columns);
  for (const auto& row : table.rows) out += CsvLine(row);
  return out;
}

std::vector<ManifestEntry> EmitTables(const ReportBundle& bundle,
                                      const std::filesystem::path& dir) {
  std::vector<ManifestEntry> entries;
  for (const auto& t : bundle.tables) {
    const std::string md = RenderMarkdown(t);
    const std::string csv = RenderCsv(t);
    const std::string stem = "tables/" + FileSlug(t.name);
    WriteFile(dir / (stem + ".md"), md);
    WriteFile(dir / (stem + ".csv"), csv);
    entries.push_back({stem + ".md", Sha256Hex(md), t.producer_op});
    entries.push_back({stem + ".csv", Sha256Hex(csv), t.producer_op});
  }
  return entries;
}

std::vector<ManifestEntry> EmitPlotData(const ReportBundle& bundle,
                                        const std::filesystem::path& dir) {
  std::vector<ManifestEntry> entries;
  for (const auto& p : bundle.plots) {
    const std::string name = "plots/" + FileSlug(p.name) + ".csv";
    WriteFile(dir / name, p.csv);
    entries.push_back({name, Sha256Hex(p.csv), p.producer_op});
  }
  return entries;
}

std::string RenderManifest(const ReportBundle& bundle,
                           std::span<const ManifestEntry> files) {
  std::vector<ManifestEntry> sorted(files.begin(), files.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  nlohmann::ordered_json j;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : sorted) {
    nlohmann::ordered_json e;
    e["name"] = f.name;
    e["sha256"] = f.sha256;
    e["producer_op"] = f.producer_op;
    j["files"].push_back(std::move(e));
  }
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : bundle.metadata) j["metadata"][k] = v;
  return j.dump(2) + "\n";
}

std::string EmitBundle(const ReportBundle& bundle, const std::filesystem::path& dir) {
  auto entries = EmitTables(bundle, dir);
  auto plots = EmitPlotData(bundle, dir);
  entries.insert(entries.end(), plots.begin(), plots.end());
  const std::string manifest = RenderManifest(bundle, entries);
  WriteFile(dir / "manifest.json", manifest);
  return manifest;
}

Table CorpusStatsTable(const std::string& corpus_name, const CorpusStats& stats) {
  Table t;
  t.name = "corpus_stats_" + corpus_name;
  t.producer_op = "corpus_stats";
  t.title = "Examples per target identity (" + corpus_name + ")";
  t.columns = {"Identity", "Hateful", "Non-hateful", "Total"};
  std::map<TargetIdentity, std::pair<std::size_t, std::size_t>> by_identity;
  for (const auto& [key, count] : stats) {
    auto& cell = by_identity[key.first];
    (key.second == GoldLabel::kHateful ? cell.first : cell.second) += count;
  }
  std::size_t h = 0, nh = 0;
  for (const auto& [identity, cell] : by_identity) {
    t.rows.push_back({identity.DisplayName(), std::to_string(cell.first),
                      std::to_string(cell.second), std::to_string(cell.first + cell.second)});
    h += cell.first;
    nh += cell.second;
  }
  t.rows.push_back({"Total", std::to_string(h), std::to_string(nh), std::to_string(h + nh)});
  return t;
}

Table BiasTable(std::span<const BiasProfile> profiles) {
  Table t;
  t.name = "bias_profile";
  t.producer_op = "identity_bias_profile";
  t.title = "Identity bias (mean median-normalized prediction, %)";
  t.columns = {"Identity"};
  for (const auto& p : profiles) t.columns.push_back(p.model_id + " bias (%)");
  for (IdentityKind kind : kNamedIdentities) {
    const TargetIdentity identity(kind);
    std::vector<std::string> row = {identity.DisplayName()};
    for (const auto& p : profiles) {
      auto it = p.bias.find(identity);
      row.push_back(it == p.bias.end() ? kNotAvailable : FormatFixed(it->second * 100.0, 2));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table PrfReportTable(const std::string& name, const std::string& model_id,
                     const PrfTable& prf) {
  Table t;
  t.name = name;
  t.producer_op = "prf_per_identity";
  t.title = "Per-identity P/R/F1 (" + model_id + ")";
  t.columns = {"Identity", "P", "R", "F1", "Acc", "TP", "FP", "FN", "TN", "Degenerate"};
  auto add = [&](const PrfRow& r) {
    std::string flag;
    if (r.precision_degenerate) flag += "P";
    if (r.recall_degenerate) flag += "R";
    t.rows.push_back({r.name, FormatFixed(r.precision, 3), FormatFixed(r.recall, 3),
                      FormatFixed(r.f1, 3), FormatFixed(r.accuracy, 3), std::to_string(r.tp),
                      std::to_string(r.fp), std::to_string(r.fn), std::to_string(r.tn),
                      flag.empty() ? "-" : flag});
  };
  for (const auto& r : prf.rows) add(r);
  add(prf.macro);
  return t;
}

Table EmotionAccuracyTable(const std::string& model_id,
                           const std::map<Emotion, AccuracyCell>& cells) {
  Table t;
  t.name = "emotion_accuracy_" + model_id;
  t.producer_op = "accuracy_by_emotion";
  t.title = "Accuracy by emotion (" + model_id + ")";
  t.columns = {"Emotion", "Polarity", "N", "Correct", "Accuracy"};
  for (const auto& [e, cell] : cells) {
    t.rows.push_back({std::string(EmotionDisplayName(e)), PolarityName(PolarityOf(e)),
                      std::to_string(cell.n), std::to_string(cell.correct),
                      Fixed(cell.accuracy, 3)});
  }
  return t;
}

Table PolarityAccuracyTable(
    const std::string& model_id,
    const std::map<std::pair<GoldLabel, Polarity>, AccuracyCell>& cells) {
  Table t;
  t.name = "polarity_accuracy_" + model_id;
  t.producer_op = "accuracy_by_polarity_and_label";
  t.title = "Accuracy by gold label and emotion polarity (" + model_id + ")";
  t.columns = {"Gold", "Polarity", "N", "Correct", "Accuracy"};
  for (const auto& [key, cell] : cells) {
    t.rows.push_back({std::string(GoldLabelName(key.first)), PolarityName(key.second),
                      std::to_string(cell.n), std::to_string(cell.correct),
                      Fixed(cell.accuracy, 3)});
  }
  return t;
}

Table ScmMeansTable(const std::map<std::pair<TargetIdentity, GoldLabel>, ScmMeans>& means) {
  Table t;
  t.name = "scm_means";
  t.producer_op = "scm_identity_means";
  t.title = "Mean warmth and competence per identity and gold label";
  t.columns = {"Identity", "Gold", "N", "Warmth", "Competence"};
  for (const auto& [key, m] : means) {
    t.rows.push_back({key.first.DisplayName(), std::string(GoldLabelName(key.second)),
                      std::to_string(m.n), FormatFixed(m.warmth, 2),
                      FormatFixed(m.competence, 2)});
  }
  return t;
}

Table StereotypeTableReport(const StereotypeTable& table) {
  Table t;
  t.name = "top_stereotypes";
  t.producer_op = "top_stereotypes";
  t.title = "Most frequent extracted spans";
  t.columns = {"Identity", "Gold", "Spans"};
  for (const auto& [key, spans] : table) {
    std::string joined;
    for (const auto& [span, count] : spans) {
      if (!joined.empty()) joined += ", ";
      joined += span + " (" + std::to_string(count) + ")";
    }
    t.rows.push_back({key.first.DisplayName(), std::string(GoldLabelName(key.second)), joined});
  }
  return t;
}

Table ClusterCorrelationTable(const std::string& model_id,
                              const ClusterCorrelation& correlation) {
  Table t;
  t.name = "cluster_accuracy_" + model_id;
  t.producer_op = "cluster_accuracy_correlation";
  t.title = "Cluster distance vs accuracy (" + model_id + "); Pearson r = " +
            Fixed(correlation.pearson, 3) + ", Spearman rho = " +
            Fixed(correlation.spearman, 3);
  t.columns = {"Cluster", "Warmth", "Competence", "Distance", "Size", "Accuracy"};
  for (const auto& c : correlation.table) {
    t.rows.push_back({std::to_string(c.id), FormatFixed(c.centroid.x, 3),
                      FormatFixed(c.centroid.y, 3), FormatFixed(c.distance, 3),
                      std::to_string(c.members.size()), Fixed(c.accuracy, 3)});
  }
  return t;
}

Table CalibrationTable(const std::string& model_id, const ReliabilityTable& reliability) {
  Table t;
  t.name = "calibration_" + model_id;
  t.producer_op = "reliability_bins";
  t.title = "Reliability (" + model_id + "); ECE = " + FormatFixed(reliability.ece, 4);
  t.columns = {"Bin", "Lo", "Hi", "Count", "Mean predicted", "Empirical rate"};
  for (const auto& b : reliability.bins) {
    t.rows.push_back({std::to_string(b.index), FormatFixed(b.lo, 2), FormatFixed(b.hi, 2),
                      std::to_string(b.count), Fixed(b.mean_predicted, 4),
                      Fixed(b.empirical_rate, 4)});
  }
  return t;
}

DataFile BiasBarsData(std::span<const BiasProfile> profiles) {
  DataFile d{"bias_bars", "identity_bias_profile", CsvLine({"model_id", "identity", "bias"})};
  for (const auto& p : profiles) {
    for (const auto& [identity, bias] : p.bias) {
      d.csv += CsvLine({p.model_id, identity.Key(), FormatShortest(bias)});
    }
  }
  return d;
}

DataFile EmotionMatrixData(const std::string& name, const EmotionDistribution& dist) {
  DataFile d{name, "emotion_distribution", CsvLine({"group", "emotion", "count"})};
  for (const auto& [group, row] : dist.counts) {
    for (const auto& [e, count] : row) {
      d.csv += CsvLine({group, std::string(EmotionName(e)), std::to_string(count)});
    }
  }
  return d;
}

DataFile ScatterData(std::span<const ScmScore> scores, const Corpus& corpus,
                     std::span<const Cluster2D> clusters) {
  std::unordered_map<std::string, int> cluster_of;
  for (const auto& c : clusters) {
    for (const auto& id : c.members) cluster_of.emplace(id, c.id);
  }
  DataFile d{"scm_scatter", "scm_score",
             CsvLine({"case_id", "identity", "gold", "warmth", "competence", "cluster"})};
  for (const auto& s : scores) {
    const TestCase& c = corpus.Get(s.case_id);
    auto it = cluster_of.find(s.case_id);
    d.csv += CsvLine({s.case_id, c.identity.Key(), std::string(GoldLabelName(c.gold)),
                      FormatShortest(s.warmth), FormatShortest(s.competence),
                      it == cluster_of.end() ? "" : std::to_string(it->second)});
  }
  return d;
}

DataFile DistanceAccuracyData(const std::string& model_id,
                              const ClusterCorrelation& correlation) {
  DataFile d{"distance_accuracy_" + model_id, "cluster_accuracy_correlation",
             CsvLine({"cluster", "distance", "accuracy", "size"})};
  for (const auto& c : correlation.table) {
    d.csv += CsvLine({std::to_string(c.id), FormatShortest(c.distance),
                      c.accuracy ? FormatShortest(*c.accuracy) : "",
                      std::to_string(c.members.size())});
  }
  return d;
}

DataFile ReliabilityData(const std::string& model_id, const ReliabilityTable& table) {
  return {"reliability_" + model_id, "reliability_bins", ReliabilityToCsv(table)};
}

DataFile HistogramData(const std::string& model_id, const ScoreHistogram& histogram) {
  DataFile d{"score_histogram_" + model_id, "score_histogram",
             CsvLine({"bin", "lo", "hi", "hateful", "non_hateful"})};
  const auto& h = histogram.counts.at(GoldLabel::kHateful);
  const auto& nh = histogram.counts.at(GoldLabel::kNonHateful);
  for (int i = 0; i < histogram.bins; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    d.csv += CsvLine({std::to_string(i + 1),
                      FormatShortest(static_cast<double>(i) / histogram.bins),
                      FormatShortest(static_cast<double>(i + 1) / histogram.bins),
                      std::to_string(h[idx]), std::to_string(nh[idx])});
  }
  return d;
}

}  // namespace hsaudit
