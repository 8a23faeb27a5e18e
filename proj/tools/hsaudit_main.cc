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


// hsaudit: runs an audit, or one stage of it, from a TOML run config.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsaudit/config.h"
#include "hsaudit/error.h"
#include "hsaudit/pipeline.h"

namespace {

int Fail(std::string_view error, const std::string& message, int exit_code) {
  nlohmann::ordered_json j;
  j["error"] = error;
  j["stage"] = "";
  j["message"] = message;
  j["exit_code"] = exit_code;
  std::cerr << j.dump() << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hate-speech classifier audit toolkit"};
  std::string config_path;
  std::string stage_name = "all";
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool offline = false;
  bool quiet = false;
  app.add_option("--config", config_path, "Run config (TOML)")->required();
  app.add_option("--stage", stage_name,
                 "ingest, score, bias, debias, annotate, scm, cluster, "
                 "calibrate, metrics, report or all");
  app.add_option("--out", out, "Output directory (overrides run.out)");
  app.add_option("--seed", seed, "Seed (overrides run.seed)");
  app.add_flag("--offline", offline, "Forbid all network access");
  app.add_flag("-q,--quiet", quiet, "Suppress progress lines");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto stage = hsaudit::ParseStage(stage_name);
  if (!stage) return Fail("ConfigInvalid", "unknown stage '" + stage_name + "'", 2);

  hsaudit::RunConfig config;
  try {
    config = hsaudit::LoadRunConfig(config_path);
  } catch (const hsaudit::Error& e) {
    return Fail(hsaudit::ErrorCodeName(e.code()), e.detail(),
                hsaudit::ExitCodeFor(e.code()));
  } catch (const std::exception& e) {
    return Fail("Internal", e.what(), 4);
  }

  hsaudit::RunOptions options;
  options.stage = *stage;
  if (out) options.out = *out;
  options.seed = seed;
  options.offline = offline;
  if (!quiet) options.log = &std::cerr;
  const auto result = hsaudit::RunPipeline(config, options);
  if (result.exit_code != 0) std::cerr << result.error_json << "\n";
  return result.exit_code;
}
