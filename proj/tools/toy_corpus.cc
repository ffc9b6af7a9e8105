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

#include "toy_corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "fusebeam/error.h"
#include "fusebeam/log_math.h"
#include "json.hpp"

namespace fusebeam::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kSampleRate = 16000;
constexpr double kToneHz[] = {300.0, 700.0, 1500.0, 3100.0};

}  // namespace

Vocabulary ToyVocabulary() {
  return Vocabulary({"<blank>", "<sos/eos>", "do", "re", "mi", "fa"}, 0, 1, 1);
}

ToyUtterance SynthesizeToyUtterance(const std::string& id, std::uint64_t seed,
                                    double noise_std) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num_words(1, 4), word(2, 5);
  std::uniform_real_distribution<double> dur(0.16, 0.26), pause(0.05, 0.1);
  std::normal_distribution<double> noise(0.0, noise_std);

  ToyUtterance utt;
  utt.id = id;
  utt.audio.sample_rate = kSampleRate;
  std::vector<double>& x = utt.audio.samples;
  x.assign(static_cast<std::size_t>(0.1 * kSampleRate), 0.0);
  const int n = num_words(rng);
  for (int k = 0; k < n; ++k) {
    const TokenId w = word(rng);
    const int len = static_cast<int>(dur(rng) * kSampleRate);
    const int start = static_cast<int>(x.size());
    const double f = kToneHz[w - 2];
    for (int i = 0; i < len; ++i) {
      const double ramp = std::min({1.0, i / 160.0, (len - 1 - i) / 160.0});
      x.push_back(0.5 * ramp * std::sin(2.0 * std::numbers::pi * f * i / kSampleRate));
    }
    utt.labels.push_back(w);
    utt.segments.emplace_back(start, start + len);
    x.resize(x.size() + static_cast<std::size_t>(pause(rng) * kSampleRate), 0.0);
  }
  x.resize(x.size() + static_cast<std::size_t>(0.05 * kSampleRate), 0.0);
  for (double& s : x) s += noise(rng);
  return utt;
}

namespace {

// Per-frame targets: the word covering the frame centre, blank elsewhere.
std::vector<TokenId> FrameTargets(const ToyUtterance& utt, const FrontendConfig& fe,
                                  int num_frames, int subsample_factor) {
  const int frame = fe.frame.FrameLength(kSampleRate);
  const int hop = fe.frame.HopLength(kSampleRate);
  const int out_frames = (num_frames + subsample_factor - 1) / subsample_factor;
  std::vector<TokenId> targets(out_frames, 0);
  for (int t = 0; t < out_frames; ++t) {
    const int centre_frame = std::min(t * subsample_factor + subsample_factor / 2, num_frames - 1);
    const int centre = centre_frame * hop + frame / 2;
    for (std::size_t k = 0; k < utt.segments.size(); ++k) {
      if (centre >= utt.segments[k].first && centre < utt.segments[k].second) {
        targets[t] = utt.labels[k];
      }
    }
  }
  return targets;
}

RowMatrix BigramLogTable(const std::vector<ToyUtterance>& train, const Vocabulary& vocab) {
  const int n = vocab.size();
  RowMatrix counts = RowMatrix::Constant(n, n, 0.0);
  for (const ToyUtterance& u : train) {
    TokenId prev = vocab.sos_id();
    for (TokenId w : u.labels) {
      counts(prev, w) += 1.0;
      prev = w;
    }
    counts(prev, vocab.eos_id()) += 1.0;
  }
  RowMatrix table = RowMatrix::Constant(n, n, -20.0);
  for (int h = 0; h < n; ++h) {
    double total = 0.0;
    for (TokenId c : vocab.Candidates()) total += counts(h, c) + 0.5;
    for (TokenId c : vocab.Candidates()) table(h, c) = std::log((counts(h, c) + 0.5) / total);
  }
  return table;
}

}  // namespace

TrainedToyModel TrainToyModel(const std::vector<ToyUtterance>& train, const FrontendConfig& fe,
                              int subsample_factor, int iterations) {
  const Vocabulary vocab = ToyVocabulary();
  std::vector<FeatureMatrix> feats;
  for (const ToyUtterance& u : train) feats.push_back(ExtractFeatures(u.audio, fe));
  TrainedToyModel out;
  out.stats = FitGlobalNormalization(feats);

  const int dim = feats.front().dim();
  const int n = vocab.size();
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<TokenId> targets;
  for (std::size_t u = 0; u < train.size(); ++u) {
    const FeatureMatrix f = ApplyNormalization(feats[u], out.stats);
    const std::vector<TokenId> y = FrameTargets(train[u], fe, f.num_frames(), subsample_factor);
    for (std::size_t t = 0; t < y.size(); ++t) {
      const int start = static_cast<int>(t) * subsample_factor;
      const int count = std::min(subsample_factor, f.num_frames() - start);
      rows.push_back(f.data.middleRows(start, count).colwise().mean());
      targets.push_back(y[t]);
    }
  }
  RowMatrix x(rows.size(), dim);
  RowMatrix y = RowMatrix::Zero(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    x.row(r) = rows[r];
    y(r, targets[r]) = 1.0;
  }

  RowMatrix w = RowMatrix::Zero(dim, n);
  Eigen::RowVectorXd b = Eigen::RowVectorXd::Zero(n);
  const double lr = 0.5, l2 = 1e-3;
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (int it = 0; it < iterations; ++it) {
    RowMatrix p = (x * w).rowwise() + b;
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      const double m = p.row(r).maxCoeff();
      p.row(r) = (p.row(r).array() - m).exp();
      p.row(r) /= p.row(r).sum();
    }
    const RowMatrix diff = p - y;
    w -= lr * (inv * (x.transpose() * diff) + l2 * w);
    b -= lr * inv * diff.colwise().sum();
  }

  ToyModel& m = out.model;
  m = ToyModel::Zeros(vocab, dim, n);
  m.encoder = w;
  m.encoder_bias = b;
  m.embedding = RowMatrix::Identity(n, n);
  m.output.topRows(n) = BigramLogTable(train, vocab);
  m.Validate();
  return out;
}

std::string ToyBigramArpa(const std::vector<ToyUtterance>& train, const Vocabulary& vocab) {
  std::map<std::string, double> unigram;
  std::map<std::string, std::map<std::string, double>> bigram;
  double total = 0.0;
  for (TokenId c : vocab.Candidates()) {
    const std::string w = c == vocab.eos_id() ? "</s>" : vocab.token(c);
    unigram[w] = 1.0;  // add-one
    total += 1.0;
  }
  for (const ToyUtterance& u : train) {
    std::string prev = "<s>";
    std::vector<std::string> words;
    for (TokenId t : u.labels) words.push_back(vocab.token(t));
    words.push_back("</s>");
    for (const std::string& w : words) {
      unigram[w] += 1.0;
      total += 1.0;
      bigram[prev][w] += 1.0;
      prev = w;
    }
  }
  // Histories followed by every word keep no mass for back-off.
  const auto discount_for = [&](const std::map<std::string, double>& next) {
    return next.size() == unigram.size() ? 0.0 : 0.5;
  };
  std::map<std::string, double> p_uni;
  for (const auto& [w, c] : unigram) p_uni[w] = c / total;

  std::ostringstream os;
  std::size_t num_bigrams = 0;
  for (const auto& [h, next] : bigram) num_bigrams += next.size();
  os << "\\data\\\nngram 1=" << unigram.size() + 1 << "\nngram 2=" << num_bigrams << "\n\n";
  os << "\\1-grams:\n";
  std::map<std::string, double> backoff;
  for (const auto& [h, next] : bigram) {
    const double discount = discount_for(next);
    if (discount == 0.0) continue;
    double count = 0.0, seen_p = 0.0, seen_uni = 0.0;
    for (const auto& [w, c] : next) count += c;
    for (const auto& [w, c] : next) {
      seen_p += (c - discount) / count;
      seen_uni += p_uni[w];
    }
    backoff[h] = (1.0 - seen_p) / (1.0 - seen_uni);
  }
  char buf[64];
  const auto log10_of = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.7f", std::log10(v));
    return std::string(buf);
  };
  os << "-99\t<s>\t" << log10_of(backoff.count("<s>") ? backoff["<s>"] : 1.0) << '\n';
  for (const auto& [w, p] : p_uni) {
    os << log10_of(p) << '\t' << w;
    if (backoff.count(w)) os << '\t' << log10_of(backoff[w]);
    os << '\n';
  }
  os << "\n\\2-grams:\n";
  for (const auto& [h, next] : bigram) {
    const double discount = discount_for(next);
    double count = 0.0;
    for (const auto& [w, c] : next) count += c;
    for (const auto& [w, c] : next) os << log10_of((c - discount) / count) << '\t' << h << ' ' << w << '\n';
  }
  os << "\n\\end\\\n";
  return os.str();
}

void MakeToyCorpus(const ToyCorpusOptions& opts, std::ostream& log) {
  if (opts.out_dir.empty()) throw ConfigError("--out-dir: required");
  const fs::path root = fs::absolute(opts.out_dir);
  fs::create_directories(root / "wav");
  fs::create_directories(root / "models");
  const Vocabulary vocab = ToyVocabulary();

  std::vector<ToyUtterance> train, test;
  const auto write_split = [&](const std::string& split, int count, std::uint64_t offset,
                               std::vector<ToyUtterance>& out) {
    std::ofstream manifest(root / (split + ".tsv"));
    for (int i = 0; i < count; ++i) {
      char id[32];
      std::snprintf(id, sizeof(id), "%s%03d", split.c_str(), i);
      ToyUtterance u = SynthesizeToyUtterance(id, opts.seed * 1000003 + offset + i);
      const std::string rel = "wav/" + u.id + ".wav";
      WriteWav((root / rel).string(), u.audio);
      manifest << u.id << '\t' << rel << '\t' << vocab.Decode(u.labels) << '\n';
      out.push_back(std::move(u));
    }
  };
  write_split("train", opts.train_utterances, 0, train);
  write_split("test", opts.test_utterances, 500000, test);

  nlohmann::ordered_json config;
  config["manifest"] = "test.tsv";
  config["models"] = nlohmann::ordered_json::array();
  for (Frontend kind : opts.frontends) {
    const FrontendConfig fe = FrontendConfig::Defaults(kind);
    std::string name = FrontendName(kind);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    const TrainedToyModel trained = TrainToyModel(train, fe);
    trained.model.Save((root / "models" / (name + ".toym.json")).string());
    trained.stats.Save((root / "models" / (name + ".stats.json")).string());
    config["models"].push_back({{"name", name},
                                {"path", "models/" + name + ".toym.json"},
                                {"frontend", FrontendConfigToJson(fe)},
                                {"stats", "models/" + name + ".stats.json"}});
    log << "trained " << name << " (" << fe.Dim(kSampleRate) << " dims)\n";
  }
  std::ofstream(root / "lm.arpa") << ToyBigramArpa(train, vocab);
  config["lm"] = "lm.arpa";
  config["alpha"] = "uniform";
  config["lm_weight"] = "auto";
  config["beam_size"] = 5;
  config["out_dir"] = "out";
  std::ofstream(root / "config.json") << config.dump(2) << '\n';
  log << "wrote " << train.size() << " training and " << test.size()
      << " test utterances to " << root.string() << '\n';
}

}  // namespace fusebeam::cli
