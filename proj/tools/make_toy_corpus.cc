// Copyright 2026 The fusebeam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// make_toy_corpus: synthesizes a small tone-word corpus with fitted toy
// models, a bigram LM and a ready-to-run decode config.

#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "toy_corpus.h"

int main(int argc, char** argv) {
  fusebeam::cli::ToyCorpusOptions opts;
  CLI::App app{"Generate a toy corpus for fusebeam"};
  app.add_option("--out-dir", opts.out_dir)->required();
  app.add_option("--train", opts.train_utterances);
  app.add_option("--test", opts.test_utterances);
  app.add_option("--seed", opts.seed);
  CLI11_PARSE(app, argc, argv);
  return fusebeam::cli::RunGuarded(
      [&] {
        fusebeam::cli::MakeToyCorpus(opts, std::cout);
        return 0;
      },
      std::cerr);
}
