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


// Writes the deterministic synthetic audit fixture (corpus, cached LLM
// replies, NLI logits and a builtin-lexicon run config) to a directory.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hsaudit/synthetic.h"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic audit fixture generator"};
  std::string dir = "data/synthetic";
  hsaudit::SyntheticOptions options;
  options.extras = true;
  bool no_extras = false;
  app.add_option("--dir", dir, "Output directory");
  app.add_option("--templates", options.templates, "Number of templates");
  app.add_option("--seed", options.seed, "Seed");
  app.add_flag("--no-extras", no_extras,
               "Omit the slur, incomplete-set and untargeted rows");
  CLI11_PARSE(app, argc, argv);
  if (no_extras) options.extras = false;
  try {
    hsaudit::WriteSyntheticData(hsaudit::MakeSyntheticData(options), dir);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 4;
  }
  return 0;
}
