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

#include "run_config.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fusebeam/error.h"

namespace fusebeam::cli {

namespace {

using nlohmann::json;

std::string Resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return (path.is_relative() ? base / path : path).lexically_normal().string();
}

template <typename T>
T Field(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + key + "': wrong type");
  }
}

ModelEntry ParseModel(const json& m, std::size_t index, const std::filesystem::path& base) {
  const std::string where = "config field 'models[" + std::to_string(index) + "]";
  if (!m.is_object()) throw ConfigError(where + "': expected an object");
  ModelEntry e;
  e.path = Resolve(base, Field<std::string>(m, "path", ""));
  if (e.path.empty()) throw ConfigError(where + ".path': required");
  if (!m.contains("frontend")) throw ConfigError(where + ".frontend': required");
  try {
    const json& fe = m.at("frontend");
    e.frontend = fe.is_string() ? FrontendConfig::Defaults(ParseFrontend(fe.get<std::string>()))
                                : FrontendConfigFromJson(fe);
  } catch (const ConfigError& err) {
    throw ConfigError(where + ".frontend': " + err.what());
  }
  e.name = Field<std::string>(m, "name", FrontendName(e.frontend.kind));
  e.stats_path = Resolve(base, Field<std::string>(m, "stats", ""));
  if (m.contains("dev_error") && !m.at("dev_error").is_null()) {
    e.dev_error = Field<double>(m, "dev_error", 0.0);
  }
  return e;
}

}  // namespace

RunConfig RunConfigFromJson(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig cfg;
  cfg.manifest = Resolve(base_dir, Field<std::string>(j, "manifest", ""));
  if (j.contains("models")) {
    if (!j.at("models").is_array()) throw ConfigError("config field 'models': expected a list");
    for (std::size_t i = 0; i < j.at("models").size(); ++i) {
      cfg.models.push_back(ParseModel(j.at("models")[i], i, base_dir));
    }
  }

  cfg.ctc_weight = Field<double>(j, "ctc_weight", 0.3);
  if (!(cfg.ctc_weight >= 0.0 && cfg.ctc_weight <= 1.0)) {
    throw ConfigError("config field 'ctc_weight': must lie in [0, 1]");
  }
  if (j.contains("alpha")) {
    const json& a = j.at("alpha");
    if (a.is_string()) {
      const std::string mode = a.get<std::string>();
      if (mode == "uniform") {
        cfg.alpha_mode = AlphaMode::kUniform;
      } else if (mode == "validation_weighted") {
        cfg.alpha_mode = AlphaMode::kValidationWeighted;
      } else {
        throw ConfigError("config field 'alpha': unknown mode '" + mode + "'");
      }
    } else {
      try {
        for (const json& row : a) {
          if (row.size() != 2) throw ConfigError("config field 'alpha': rows need 2 entries");
          cfg.alpha.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
        }
      } catch (const json::exception&) {
        throw ConfigError("config field 'alpha': expected a mode or an M x 2 matrix");
      }
      cfg.alpha_mode = AlphaMode::kExplicit;
    }
  }

  cfg.lm_path = Resolve(base_dir, Field<std::string>(j, "lm", ""));
  if (j.contains("lm_weight")) {
    const json& w = j.at("lm_weight");
    if (w.is_string()) {
      if (w.get<std::string>() != "auto") {
        throw ConfigError("config field 'lm_weight': expected \"auto\" or a number");
      }
    } else if (w.is_number()) {
      cfg.lm_weight = w.get<double>();
      if (!(*cfg.lm_weight >= 0.0)) throw ConfigError("config field 'lm_weight': must be >= 0");
    } else if (!w.is_null()) {
      throw ConfigError("config field 'lm_weight': expected \"auto\" or a number");
    }
  }

  cfg.decode.beam_size = Field<int>(j, "beam_size", cfg.decode.beam_size);
  cfg.decode.pre_beam_size = Field<int>(j, "pre_beam_size", cfg.decode.pre_beam_size);
  cfg.decode.maxlen_ratio = Field<double>(j, "maxlen_ratio", cfg.decode.maxlen_ratio);
  cfg.decode.subsample_factor = Field<int>(j, "subsample_factor", cfg.decode.subsample_factor);
  cfg.decode.minlen = Field<int>(j, "minlen", cfg.decode.minlen);
  try {
    cfg.decode.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config field ") + e.what());
  }

  if (j.contains("mix")) {
    cfg.mix.attention = Field<double>(j.at("mix"), "attention", cfg.mix.attention);
    cfg.mix.ctc = Field<double>(j.at("mix"), "ctc", cfg.mix.ctc);
  }
  if (j.contains("order")) {
    for (const json& o : j.at("order")) {
      if (o.is_number_integer()) {
        cfg.order.push_back(o.get<int>());
        continue;
      }
      const std::string name = o.is_string() ? o.get<std::string>() : "";
      int found = -1;
      for (std::size_t i = 0; i < cfg.models.size(); ++i) {
        if (cfg.models[i].name == name) found = static_cast<int>(i);
      }
      if (found < 0) throw ConfigError("config field 'order': unknown model '" + name + "'");
      cfg.order.push_back(found);
    }
  }
  cfg.out_dir = Resolve(base_dir, Field<std::string>(j, "out_dir", ""));
  cfg.seed = Field<std::uint64_t>(j, "seed", 0);
  return cfg;
}

json LoadJsonFile(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
}

json ModelFlagToJson(const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(flag);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() < 3 || parts.size() > 4) {
    throw ConfigError("--model: expected name:frontend:path[:stats], got '" + flag + "'");
  }
  json m = {{"name", parts[0]}, {"frontend", parts[1]}, {"path", parts[2]}};
  if (parts.size() == 4) m["stats"] = parts[3];
  return m;
}

json AlphaFlagToJson(const std::string& flag) {
  if (flag == "uniform" || flag == "validation_weighted") return flag;
  try {
    return json::parse(flag);
  } catch (const json::exception&) {
    throw ConfigError("--alpha: expected uniform, validation_weighted or a JSON matrix");
  }
}

json LmWeightFlagToJson(const std::string& flag) {
  if (flag == "auto") return flag;
  try {
    std::size_t used = 0;
    const double v = std::stod(flag, &used);
    if (used != flag.size()) throw std::invalid_argument(flag);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("--lm-weight: expected auto or a number");
  }
}

FusionWeights ResolveWeights(const RunConfig& cfg, int num_models) {
  FusionWeights w;
  switch (cfg.alpha_mode) {
    case AlphaMode::kUniform:
      w = FusionWeights::Uniform(num_models, cfg.ctc_weight);
      break;
    case AlphaMode::kValidationWeighted: {
      std::vector<double> errors;
      for (int i = 0; i < num_models; ++i) {
        if (!cfg.models.at(i).dev_error) {
          throw ConfigError("config field 'models[" + std::to_string(i) +
                            "].dev_error': required by validation_weighted alpha");
        }
        errors.push_back(*cfg.models[i].dev_error);
      }
      w = FusionWeights::ValidationWeighted(errors, cfg.ctc_weight);
      break;
    }
    case AlphaMode::kExplicit:
      if (static_cast<int>(cfg.alpha.size()) != num_models) {
        throw ConfigError("config field 'alpha': has " + std::to_string(cfg.alpha.size()) +
                          " rows for " + std::to_string(num_models) + " models");
      }
      w.alpha = cfg.alpha;
      break;
  }
  w.lm_weight = cfg.lm_weight ? *cfg.lm_weight : EnsembleLmWeight(num_models);
  try {
    w.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config field 'alpha': ") + e.what());
  }
  return w;
}

nlohmann::ordered_json ResolvedConfigJson(const RunConfig& cfg, const FusionWeights& weights) {
  nlohmann::ordered_json j;
  j["manifest"] = cfg.manifest;
  nlohmann::ordered_json models = nlohmann::ordered_json::array();
  for (const ModelEntry& m : cfg.models) {
    nlohmann::ordered_json e;
    e["name"] = m.name;
    e["path"] = m.path;
    e["frontend"] = FrontendConfigToJson(m.frontend);
    e["stats"] = m.stats_path;
    e["dev_error"] = m.dev_error ? json(*m.dev_error) : json(nullptr);
    models.push_back(std::move(e));
  }
  j["models"] = std::move(models);
  j["alpha_mode"] = cfg.alpha_mode == AlphaMode::kUniform              ? "uniform"
                    : cfg.alpha_mode == AlphaMode::kValidationWeighted ? "validation_weighted"
                                                                       : "explicit";
  j["alpha"] = weights.alpha;
  j["ctc_weight"] = cfg.ctc_weight;
  j["lm"] = cfg.lm_path;
  j["lm_weight_mode"] = cfg.lm_weight ? "fixed" : "auto";
  j["lm_weight"] = weights.lm_weight;
  j["beam_size"] = cfg.decode.beam_size;
  j["pre_beam_size"] = cfg.decode.PreBeamSize();
  j["maxlen_ratio"] = cfg.decode.maxlen_ratio;
  j["subsample_factor"] = cfg.decode.subsample_factor;
  j["minlen"] = cfg.decode.minlen;
  j["mix"] = {{"attention", cfg.mix.attention}, {"ctc", cfg.mix.ctc}};
  j["order"] = cfg.order;
  j["out_dir"] = cfg.out_dir;
  j["seed"] = cfg.seed;
  return j;
}

std::vector<LoadedModel> LoadModels(const RunConfig& cfg) {
  if (cfg.models.empty()) throw ConfigError("config field 'models': at least one model is required");
  std::vector<LoadedModel> out;
  for (const ModelEntry& e : cfg.models) {
    LoadedModel m;
    m.name = e.name;
    try {
      m.model = ToyModel::Load(e.path);
      if (!e.stats_path.empty()) m.stats = NormalizationStats::Load(e.stats_path);
    } catch (const FormatError& err) {
      throw ConfigError("model " + e.name + ": " + err.what());
    }
    m.frontend = e.frontend;
    m.dev_error = e.dev_error;
    out.push_back(std::move(m));
  }
  SharedVocabulary(out);
  return out;
}

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string FormatAlpha(const ScorePairs& alpha) {
  std::string s = "[";
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i > 0) s += ", ";
    s += "[" + FormatNumber(alpha[i][kAttention]) + ", " + FormatNumber(alpha[i][kCtc]) + "]";
  }
  return s + "]";
}

}  // namespace fusebeam::cli
