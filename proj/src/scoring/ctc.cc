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

#include "fusebeam/scoring/ctc.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fusebeam/log_math.h"

namespace fusebeam {

void CtcPosteriorGrid::Validate(double tolerance) const {
  if (log_probs.rows() < 1 || log_probs.cols() < 2) {
    throw std::invalid_argument("CTC grid must have at least one frame and two tokens");
  }
  if (!log_probs.allFinite()) throw std::invalid_argument("CTC grid has non-finite entries");
  for (Eigen::Index t = 0; t < log_probs.rows(); ++t) {
    const Eigen::RowVectorXd row = log_probs.row(t);
    const double lse = LogSumExp(std::span<const double>(row.data(), row.size()));
    if (std::abs(lse) > tolerance) {
      throw std::invalid_argument("CTC grid row " + std::to_string(t) +
                                  " is not normalized");
    }
  }
}

CtcPrefixScorer::CtcPrefixScorer(const CtcPosteriorGrid& grid,
                                 const Vocabulary& vocab)
    : grid_(&grid), vocab_(&vocab) {
  if (grid.vocab_size() != vocab.size()) {
    throw std::invalid_argument("CTC grid width does not match the vocabulary");
  }
  if (grid.num_frames() < 1) throw std::invalid_argument("CTC grid has no frames");
}

CtcPrefixState CtcPrefixScorer::InitialState() const {
  const int frames = grid_->num_frames();
  const TokenId blank = vocab_->blank_id();
  CtcPrefixState state;
  state.r_nonblank.assign(frames, kLogZero);
  state.r_blank.resize(frames);
  double acc = 0.0;
  for (int t = 0; t < frames; ++t) {
    acc = ClampLog(acc + grid_->log_probs(t, blank));
    state.r_blank[t] = acc;
  }
  state.prefix_logp = 0.0;
  state.last_token = vocab_->sos_id();
  state.length = 0;
  return state;
}

std::vector<CtcExtension> CtcPrefixScorer::Extend(
    std::span<const TokenId> prefix, const CtcPrefixState& state,
    std::span<const TokenId> candidates) const {
  const int frames = grid_->num_frames();
  if (prefix.empty() || prefix.front() != vocab_->sos_id()) {
    throw std::invalid_argument("prefix must start with sos");
  }
  if (state.length != static_cast<int>(prefix.size()) - 1 ||
      state.last_token != prefix.back() ||
      static_cast<int>(state.r_blank.size()) != frames ||
      static_cast<int>(state.r_nonblank.size()) != frames) {
    throw std::invalid_argument("CTC state does not belong to this prefix");
  }
  const TokenId blank = vocab_->blank_id();
  const auto& x = grid_->log_probs;

  std::vector<CtcExtension> out;
  out.reserve(candidates.size());
  for (TokenId c : candidates) {
    if (c == blank) throw std::invalid_argument("blank is not a valid hypothesis token");
    if (c != vocab_->eos_id() && !vocab_->IsLabel(c)) {
      throw std::invalid_argument("candidate token " + std::to_string(c) + " is invalid");
    }
    CtcExtension ext;
    ext.token = c;
    if (c == vocab_->eos_id()) {
      ext.prefix_logp = LogAdd(state.r_nonblank[frames - 1], state.r_blank[frames - 1]);
      ext.score = ext.prefix_logp - state.prefix_logp;
      out.push_back(std::move(ext));
      continue;
    }
    const bool repeat = state.length > 0 && c == state.last_token;
    CtcPrefixState& next = ext.state;
    next.r_nonblank.resize(frames);
    next.r_blank.resize(frames);
    next.r_nonblank[0] = state.length == 0 ? x(0, c) : kLogZero;
    next.r_blank[0] = kLogZero;
    double psi = next.r_nonblank[0];
    for (int t = 1; t < frames; ++t) {
      // Mass of g over t frames from which c may start at frame t.
      const double phi = repeat ? state.r_blank[t - 1]
                                : LogAdd(state.r_nonblank[t - 1], state.r_blank[t - 1]);
      next.r_nonblank[t] = ClampLog(LogAdd(next.r_nonblank[t - 1], phi) + x(t, c));
      next.r_blank[t] =
          ClampLog(LogAdd(next.r_nonblank[t - 1], next.r_blank[t - 1]) + x(t, blank));
      psi = LogAdd(psi, ClampLog(phi + x(t, c)));
    }
    next.prefix_logp = psi;
    next.last_token = c;
    next.length = state.length + 1;
    ext.prefix_logp = psi;
    ext.score = psi - state.prefix_logp;
    out.push_back(std::move(ext));
  }
  return out;
}

CtcPrefixState CtcPrefixScorer::StateFor(std::span<const TokenId> prefix) const {
  if (prefix.empty() || prefix.front() != vocab_->sos_id()) {
    throw std::invalid_argument("prefix must start with sos");
  }
  CtcPrefixState state = InitialState();
  for (std::size_t i = 1; i < prefix.size(); ++i) {
    const TokenId c = prefix[i];
    auto ext = Extend(prefix.first(i), state, std::span<const TokenId>(&c, 1));
    state = std::move(ext[0].state);
  }
  return state;
}

double CtcSequenceLogProb(const CtcPosteriorGrid& grid,
                          std::span<const TokenId> labels, TokenId blank_id) {
  const int frames = grid.num_frames();
  const int num_labels = static_cast<int>(labels.size());
  for (TokenId id : labels) {
    if (id < 0 || id >= grid.vocab_size() || id == blank_id) {
      throw std::invalid_argument("invalid label in CTC sequence");
    }
  }
  int repeats = 0;
  for (int i = 1; i < num_labels; ++i) repeats += labels[i] == labels[i - 1];
  if (num_labels + repeats > frames) return kLogZero;

  // Extended sequence: blank, l1, blank, l2, ..., blank.
  const int states = 2 * num_labels + 1;
  auto symbol = [&](int s) { return s % 2 == 0 ? blank_id : labels[s / 2]; };
  std::vector<double> alpha(states, kLogZero), next(states);
  alpha[0] = grid.log_probs(0, blank_id);
  if (states > 1) alpha[1] = grid.log_probs(0, symbol(1));
  for (int t = 1; t < frames; ++t) {
    for (int s = 0; s < states; ++s) {
      double acc = alpha[s];
      if (s >= 1) acc = LogAdd(acc, alpha[s - 1]);
      if (s >= 2 && symbol(s) != blank_id && symbol(s) != symbol(s - 2)) {
        acc = LogAdd(acc, alpha[s - 2]);
      }
      next[s] = ClampLog(acc + grid.log_probs(t, symbol(s)));
    }
    alpha.swap(next);
  }
  double total = alpha[states - 1];
  if (states >= 2) total = LogAdd(total, alpha[states - 2]);
  return total;
}

}  // namespace fusebeam
