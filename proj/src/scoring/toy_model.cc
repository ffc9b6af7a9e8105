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

#include "fusebeam/scoring/toy_model.h"

#include <fstream>
#include <stdexcept>

#include "fusebeam/error.h"
#include "fusebeam/log_math.h"

namespace fusebeam {
namespace {

Tensor ToTensor(const RowMatrix& m) {
  Tensor t;
  t.shape = {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())};
  t.values.assign(m.data(), m.data() + m.size());
  return t;
}

RowMatrix FromTensor(const ParameterSet& params, const std::string& name) {
  const auto it = params.find(name);
  if (it == params.end()) throw FormatError("TOYM1: missing matrix " + name);
  const Tensor& t = it->second;
  if (t.shape.size() != 2) throw FormatError("TOYM1: matrix " + name + " must be 2-D");
  RowMatrix m(static_cast<Eigen::Index>(t.shape[0]), static_cast<Eigen::Index>(t.shape[1]));
  std::copy(t.values.begin(), t.values.end(), m.data());
  return m;
}

void ExpectShape(const RowMatrix& m, Eigen::Index rows, Eigen::Index cols,
                 const std::string& name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw FormatError("TOYM1: matrix " + name + " has shape " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }
}

}  // namespace

ToyModel ToyModel::Zeros(const Vocabulary& vocab, int input_dim, int embed_dim) {
  const int n = vocab.size();
  ToyModel m;
  m.vocab = vocab;
  m.encoder = RowMatrix::Zero(input_dim, n);
  m.encoder_bias = RowMatrix::Zero(1, n);
  m.embedding = RowMatrix::Zero(n, embed_dim);
  m.context = RowMatrix::Zero(input_dim, embed_dim);
  m.output = RowMatrix::Zero(2 * embed_dim, n);
  m.bias = RowMatrix::Zero(1, n);
  return m;
}

void ToyModel::Validate() const {
  const Eigen::Index n = vocab.size(), d = encoder.rows(), e = embedding.cols();
  if (d < 1 || e < 1) throw FormatError("TOYM1: empty encoder or embedding");
  ExpectShape(encoder, d, n, "encoder");
  ExpectShape(encoder_bias, 1, n, "encoder_bias");
  ExpectShape(embedding, n, e, "embedding");
  ExpectShape(context, d, e, "context");
  ExpectShape(output, 2 * e, n, "output");
  ExpectShape(bias, 1, n, "bias");
  for (const RowMatrix* m : {&encoder, &encoder_bias, &embedding, &context, &output, &bias}) {
    if (!m->allFinite()) throw FormatError("TOYM1: non-finite weights");
  }
}

ParameterSet ToyModel::ToParameters() const {
  return {{"encoder", ToTensor(encoder)},     {"encoder_bias", ToTensor(encoder_bias)},
          {"embedding", ToTensor(embedding)}, {"context", ToTensor(context)},
          {"output", ToTensor(output)},       {"bias", ToTensor(bias)}};
}

ToyModel ToyModel::FromParameters(const Vocabulary& vocab,
                                  const ParameterSet& params) {
  ToyModel m;
  m.vocab = vocab;
  m.encoder = FromTensor(params, "encoder");
  m.encoder_bias = params.count("encoder_bias")
                       ? FromTensor(params, "encoder_bias")
                       : RowMatrix(RowMatrix::Zero(1, vocab.size()));
  m.embedding = FromTensor(params, "embedding");
  m.context = FromTensor(params, "context");
  m.output = FromTensor(params, "output");
  m.bias = FromTensor(params, "bias");
  m.Validate();
  return m;
}

nlohmann::json ToyModel::ToJson() const {
  nlohmann::json doc;
  doc["format"] = "TOYM1";
  doc["vocab"] = vocab.tokens();
  doc["blank_id"] = vocab.blank_id();
  doc["sos_id"] = vocab.sos_id();
  doc["eos_id"] = vocab.eos_id();
  doc["matrices"] = ParameterSetToJson(ToParameters());
  return doc;
}

ToyModel ToyModel::FromJson(const nlohmann::json& doc) {
  try {
    if (doc.value("format", std::string()) != "TOYM1") {
      throw FormatError("not a TOYM1 document");
    }
    Vocabulary vocab(doc.at("vocab").get<std::vector<std::string>>(),
                     doc.at("blank_id").get<int>(), doc.at("sos_id").get<int>(),
                     doc.at("eos_id").get<int>());
    return FromParameters(vocab, ParameterSetFromJson(doc.at("matrices")));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("TOYM1: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("TOYM1: ") + e.what());
  }
}

void ToyModel::Save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot write " + path);
  os << ToJson().dump() << "\n";
}

ToyModel ToyModel::Load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  try {
    return FromJson(nlohmann::json::parse(is));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

EncoderOutput ToyEncode(const FeatureMatrix& features, const ToyModel& model,
                        int subsample_factor) {
  if (subsample_factor < 1) throw std::invalid_argument("subsample factor must be >= 1");
  if (features.dim() != model.input_dim()) {
    throw std::invalid_argument("feature dimension " + std::to_string(features.dim()) +
                                " does not match encoder input " +
                                std::to_string(model.input_dim()));
  }
  features.Validate();
  const int frames = features.num_frames();
  const int out_frames = (frames + subsample_factor - 1) / subsample_factor;
  EncoderOutput out;
  out.encoded.frontend = features.frontend;
  out.encoded.h.resize(out_frames, features.dim());
  for (int t = 0; t < out_frames; ++t) {
    const int start = t * subsample_factor;
    const int count = std::min(subsample_factor, frames - start);
    out.encoded.h.row(t) = features.data.middleRows(start, count).colwise().mean();
  }
  const RowMatrix logits =
      (out.encoded.h * model.encoder).rowwise() + model.encoder_bias.row(0);
  out.grid.log_probs.resize(out_frames, model.vocab.size());
  for (int t = 0; t < out_frames; ++t) {
    const Eigen::RowVectorXd row = logits.row(t);
    const auto lp = LogSoftmax(std::span<const double>(row.data(), row.size()));
    for (int k = 0; k < model.vocab.size(); ++k) out.grid.log_probs(t, k) = lp[k];
  }
  return out;
}

ToyAttentionScorer::ToyAttentionScorer(const ToyModel& model,
                                       const EncodedUtterance& encoded)
    : embedding_(model.embedding), output_(model.output), bias_(model.bias.row(0)) {
  if (encoded.h.cols() != model.context.rows()) {
    throw std::invalid_argument("encoder output does not match decoder context size");
  }
  projected_context_ = encoded.h.colwise().mean() * model.context;
}

std::vector<double> ToyAttentionScorer::LogProbs(
    std::span<const TokenId> prefix) const {
  if (prefix.empty()) throw std::invalid_argument("prefix must start with sos");
  for (TokenId id : prefix) {
    if (id < 0 || id >= embedding_.rows()) {
      throw std::invalid_argument("token id " + std::to_string(id) + " out of range");
    }
  }
  const TokenId last = prefix.back();
  const Eigen::Index e = embedding_.cols();
  Eigen::RowVectorXd logits = bias_;
  logits += embedding_.row(last) * output_.topRows(e);
  logits += projected_context_ * output_.bottomRows(e);
  return LogSoftmax(std::span<const double>(logits.data(), logits.size()));
}

}  // namespace fusebeam
