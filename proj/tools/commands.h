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

#ifndef FUSEBEAM_TOOLS_COMMANDS_H_
#define FUSEBEAM_TOOLS_COMMANDS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "fusebeam/frontend/normalization.h"
#include "fusebeam/metrics/error_rate.h"
#include "run_config.h"

#include "json.hpp"

namespace fusebeam::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitItemFailure = 1;
inline constexpr int kExitConfigError = 2;

// FUSEBEAM_JOBS when set to a positive integer, else 1.
int DefaultJobs();

// Runs `fn`, mapping ConfigError and FormatError to kExitConfigError and any
// other exception to kExitItemFailure.
int RunGuarded(const std::function<int()>& fn, std::ostream& err);

// Writes to a sibling temporary file and renames it into place.
void WriteFileAtomic(const std::string& path, const std::string& content);

struct FeaturesOptions {
  std::string manifest;
  nlohmann::json frontend = nlohmann::json::object();
  std::string out_dir;
  std::string stats_out;  // fit global normalization over the run
  std::string stats_in;   // apply existing normalization
  MaskSpec time_masks;
  MaskSpec freq_masks;
  std::uint64_t seed = 0;
  int jobs = 1;
};

int CmdFeatures(const FeaturesOptions& opts, std::ostream& out, std::ostream& err);
int CmdDecode(const RunConfig& cfg, int jobs, std::ostream& out, std::ostream& err);
int CmdAblation(const RunConfig& cfg, int jobs, std::ostream& out, std::ostream& err);
int CmdDiversity(const RunConfig& cfg, int jobs, std::ostream& out, std::ostream& err);

struct ScoreOptions {
  std::string refs;  // id<TAB>text lines, or a manifest
  std::string hyps;  // id<TAB>text lines, or decode results (.jsonl)
  ErrorUnit unit = ErrorUnit::kWord;
  bool keep_whitespace = false;  // character scoring only
  std::string report_json;
};

int CmdScore(const ScoreOptions& opts, std::ostream& out, std::ostream& err);

// {wer, cer, S, D, I, N}; the counts follow `primary`.
nlohmann::ordered_json ScoreReportJson(const std::optional<ErrorReport>& wer,
                                       const std::optional<ErrorReport>& cer,
                                       ErrorUnit primary);
std::string ScoreReportText(const std::optional<ErrorReport>& wer,
                            const std::optional<ErrorReport>& cer);

}  // namespace fusebeam::cli

#endif  // FUSEBEAM_TOOLS_COMMANDS_H_
