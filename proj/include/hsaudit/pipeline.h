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


// Stage orchestration. Each stage reads the outputs of earlier stages from
// the run's output directory and writes its own, so any stage can be re-run
// on its own once its inputs exist:
//
//   <out>/stages/<stage>/...   stage outputs
//   <out>/cache/<corpus>/...   append-only score, NLI and reply caches
//   <out>/report/...           tables, plot data and manifest.json

#ifndef HSAUDIT_PIPELINE_H_
#define HSAUDIT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "hsaudit/adapters.h"
#include "hsaudit/config.h"
#include "hsaudit/error.h"
#include "hsaudit/report.h"
#include "hsaudit/transport.h"

namespace hsaudit {

enum class Stage {
  kIngest,
  kScore,
  kBias,
  kDebias,
  kAnnotate,
  kScm,
  kCluster,
  kCalibrate,
  kMetrics,
  kReport,
  kAll,
};

std::optional<Stage> ParseStage(std::string_view name);
std::string_view StageName(Stage stage);

// 2 config/usage, 3 backend, 4 data.
int ExitCodeFor(ErrorCode code);

struct RunOptions {
  Stage stage = Stage::kAll;
  std::optional<std::filesystem::path> out;  // overrides run.out
  std::optional<std::uint64_t> seed;         // overrides run.seed
  bool offline = false;                      // refuse all network access
  HttpTransport* transport = nullptr;        // default: network or offline
  RetryPolicy retry;
  std::ostream* log = nullptr;               // progress lines
};

struct RunResult {
  int exit_code = 0;
  std::optional<ErrorCode> error;
  std::string failed_stage;
  std::string error_json;  // machine-readable summary, empty on success
  std::optional<ReportBundle> bundle;  // set when the report stage ran
};

// Never throws for errors raised by the toolkit; they are mapped to exit
// codes and summarised in error_json.
RunResult RunPipeline(const RunConfig& config, const RunOptions& options);

}  // namespace hsaudit

#endif  // HSAUDIT_PIPELINE_H_
