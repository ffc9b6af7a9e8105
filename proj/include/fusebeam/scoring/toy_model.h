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

#ifndef FUSEBEAM_SCORING_TOY_MODEL_H_
#define FUSEBEAM_SCORING_TOY_MODEL_H_

#include <string>

#include "fusebeam/frontend/feature_matrix.h"
#include "fusebeam/metrics/parameter_set.h"
#include "fusebeam/scoring/attention.h"
#include "fusebeam/scoring/ctc.h"
#include "fusebeam/scoring/vocabulary.h"

#include "json.hpp"

namespace fusebeam {

// Encoder output h: mean-pooled features, T' x D'.
struct EncodedUtterance {
  RowMatrix h;
  Frontend frontend = Frontend::kMel;

  int num_frames() const { return static_cast<int>(h.rows()); }
};

// Small stand-in for an attention encoder-decoder. The encoder is a per-frame
// affine map with softmax after mean-pool decimation; the decoder conditions
// on the last token embedding and the time-averaged encoder output.
//
// TOYM1 file: {"format": "TOYM1", "vocab": [...], "blank_id", "sos_id",
// "eos_id", "matrices": {...}} with matrices
//   encoder       D x N      encoder_bias  1 x N (optional)
//   embedding     N x E      context       D x E
//   output       2E x N      bias          1 x N
struct ToyModel {
  Vocabulary vocab;
  RowMatrix encoder;
  RowMatrix encoder_bias;
  RowMatrix embedding;
  RowMatrix context;
  RowMatrix output;
  RowMatrix bias;

  int input_dim() const { return static_cast<int>(encoder.rows()); }
  int embed_dim() const { return static_cast<int>(embedding.cols()); }

  // All weights zero: uniform posteriors everywhere.
  static ToyModel Zeros(const Vocabulary& vocab, int input_dim, int embed_dim);

  // Throws FormatError on inconsistent shapes or non-finite weights.
  void Validate() const;

  ParameterSet ToParameters() const;
  static ToyModel FromParameters(const Vocabulary& vocab,
                                 const ParameterSet& params);

  nlohmann::json ToJson() const;
  static ToyModel FromJson(const nlohmann::json& doc);
  void Save(const std::string& path) const;
  static ToyModel Load(const std::string& path);
};

struct EncoderOutput {
  EncodedUtterance encoded;
  CtcPosteriorGrid grid;
};

// T' = ceil(T / subsample_factor); each output frame is the mean of its
// group of input frames.
EncoderOutput ToyEncode(const FeatureMatrix& features, const ToyModel& model,
                        int subsample_factor = 4);

class ToyAttentionScorer : public AttentionScorer {
 public:
  ToyAttentionScorer(const ToyModel& model, const EncodedUtterance& encoded);

  int vocab_size() const override { return static_cast<int>(bias_.size()); }
  std::vector<double> LogProbs(std::span<const TokenId> prefix) const override;

 private:
  RowMatrix embedding_;
  RowMatrix output_;
  Eigen::RowVectorXd bias_;
  Eigen::RowVectorXd projected_context_;  // mean(h) * context
};

}  // namespace fusebeam

#endif  // FUSEBEAM_SCORING_TOY_MODEL_H_
