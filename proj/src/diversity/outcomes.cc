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

#include "fusebeam/diversity/outcomes.h"

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "fusebeam/error.h"
#include "fusebeam/parallel.h"

namespace fusebeam {

namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cols;
  std::stringstream ss(line);
  for (std::string col; std::getline(ss, col, ',');) cols.push_back(col);
  if (!line.empty() && line.back() == ',') cols.emplace_back();
  return cols;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void RequireRows(const TokenOutcomeMatrix& m) {
  if (m.num_rows() == 0 || m.num_models() == 0) {
    throw std::invalid_argument("outcome matrix is empty");
  }
}

}  // namespace

TokenOutcomeMatrix::TokenOutcomeMatrix(std::vector<std::string> model_names)
    : model_names_(std::move(model_names)) {
  if (model_names_.empty()) throw std::invalid_argument("outcome matrix needs models");
}

bool TokenOutcomeMatrix::correct(int row, int model) const {
  if (model < 0 || model >= num_models()) throw std::out_of_range("model index");
  return cells_.at(static_cast<std::size_t>(row) * num_models() + model) != 0;
}

int TokenOutcomeMatrix::CorrectCount(int row) const {
  int count = 0;
  for (int j = 0; j < num_models(); ++j) count += correct(row, j) ? 1 : 0;
  return count;
}

void TokenOutcomeMatrix::AddRow(std::string utterance_id, int position,
                                const std::vector<bool>& outcomes) {
  if (static_cast<int>(outcomes.size()) != num_models() || num_models() == 0) {
    throw std::invalid_argument("outcome row width does not match the model count");
  }
  utterance_ids_.push_back(std::move(utterance_id));
  positions_.push_back(position);
  for (bool b : outcomes) cells_.push_back(b ? 1 : 0);
}

void TokenOutcomeMatrix::WriteCsv(std::ostream& os) const {
  os << "utterance_id,position";
  for (const std::string& n : model_names_) os << ',' << n;
  os << '\n';
  for (int r = 0; r < num_rows(); ++r) {
    os << utterance_ids_[r] << ',' << positions_[r];
    for (int j = 0; j < num_models(); ++j) os << ',' << (correct(r, j) ? 1 : 0);
    os << '\n';
  }
}

TokenOutcomeMatrix TokenOutcomeMatrix::ReadCsv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("outcome CSV: missing header");
  std::vector<std::string> header = SplitCsv(line);
  if (header.size() < 3 || header[0] != "utterance_id" || header[1] != "position") {
    throw FormatError("outcome CSV: bad header");
  }
  TokenOutcomeMatrix m(std::vector<std::string>(header.begin() + 2, header.end()));
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cols = SplitCsv(line);
    if (cols.size() != header.size()) {
      throw FormatError("outcome CSV line " + std::to_string(line_no) + ": wrong width");
    }
    std::vector<bool> row;
    for (std::size_t j = 2; j < cols.size(); ++j) {
      if (cols[j] != "0" && cols[j] != "1") {
        throw FormatError("outcome CSV line " + std::to_string(line_no) + ": expected 0/1");
      }
      row.push_back(cols[j] == "1");
    }
    try {
      m.AddRow(cols[0], std::stoi(cols[1]), row);
    } catch (const std::logic_error&) {
      throw FormatError("outcome CSV line " + std::to_string(line_no) + ": bad position");
    }
  }
  return m;
}

DifficultyHistogram DifficultyMeasure(const TokenOutcomeMatrix& m) {
  RequireRows(m);
  std::vector<long> counts(m.num_models() + 1, 0);
  for (int r = 0; r < m.num_rows(); ++r) ++counts[m.CorrectCount(r)];
  DifficultyHistogram h;
  for (long c : counts) h.buckets.push_back(static_cast<double>(c) / m.num_rows());
  return h;
}

std::vector<double> IncrementalGain(const TokenOutcomeMatrix& m, std::span<const int> order) {
  RequireRows(m);
  std::vector<bool> used(m.num_models(), false);
  if (static_cast<int>(order.size()) != m.num_models()) {
    throw std::invalid_argument("order must list every model exactly once");
  }
  for (int j : order) {
    if (j < 0 || j >= m.num_models() || used[j]) {
      throw std::invalid_argument("order must be a permutation of the model columns");
    }
    used[j] = true;
  }
  std::vector<long> counts(order.size(), 0);
  for (int r = 0; r < m.num_rows(); ++r) {
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (m.correct(r, order[k])) {
        ++counts[k];
        break;
      }
    }
  }
  std::vector<double> gains;
  for (long c : counts) gains.push_back(static_cast<double>(c) / m.num_rows());
  return gains;
}

double OracleErrorFloor(const TokenOutcomeMatrix& m) {
  RequireRows(m);
  long missed = 0;
  for (int r = 0; r < m.num_rows(); ++r) missed += m.CorrectCount(r) == 0 ? 1 : 0;
  return static_cast<double>(missed) / m.num_rows();
}

OutcomeBuild BuildOutcomeMatrix(std::span<const PreparedUtterance> corpus,
                                std::vector<std::string> model_names,
                                const Vocabulary& vocab, ScorerMix mix, int jobs) {
  for (const PreparedUtterance& p : corpus) {
    if (!p.reference) throw ConfigError("diversity: utterance " + p.id + " has no reference");
  }
  struct Slot {
    std::vector<std::vector<bool>> rows;
    std::string error;
  };
  const std::size_t num_models = model_names.size();
  std::vector<Slot> slots(corpus.size());
  ParallelFor(corpus.size(), jobs, [&](std::size_t u) {
    const PreparedUtterance& p = corpus[u];
    Slot& slot = slots[u];
    if (!p.ok()) {
      slot.error = p.error;
      return;
    }
    try {
      if (p.models.size() != num_models) throw std::invalid_argument("model count mismatch");
      const std::vector<TokenId> ref = vocab.Encode(*p.reference);
      slot.rows.assign(ref.size(), std::vector<bool>(num_models, false));
      for (std::size_t j = 0; j < num_models; ++j) {
        const std::vector<TokenId> pred = TeacherForcedPredict(p.models[j], vocab, ref, mix);
        for (std::size_t n = 0; n < ref.size(); ++n) slot.rows[n][j] = pred[n] == ref[n];
      }
    } catch (const std::exception& e) {
      slot.rows.clear();
      slot.error = e.what();
    }
  });
  OutcomeBuild out{TokenOutcomeMatrix(std::move(model_names)), {}};
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    if (!slots[u].error.empty()) {
      out.failures.emplace_back(corpus[u].id, slots[u].error);
      continue;
    }
    for (std::size_t n = 0; n < slots[u].rows.size(); ++n) {
      out.matrix.AddRow(corpus[u].id, static_cast<int>(n), slots[u].rows[n]);
    }
  }
  return out;
}

void WriteDifficultyCsv(std::ostream& os, const DifficultyHistogram& h) {
  os << "num_correct,fraction,percent\n";
  for (std::size_t k = 0; k < h.buckets.size(); ++k) {
    os << k << ',' << Fixed(h.buckets[k], 9) << ',' << Fixed(100.0 * h.buckets[k], 1) << '\n';
  }
}

void WriteGainCsv(std::ostream& os, const TokenOutcomeMatrix& m, std::span<const int> order,
                  std::span<const double> gains) {
  os << "rank,model,gain_percent,cumulative_percent\n";
  double cumulative = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    cumulative += gains[k];
    os << k << ',' << m.model_names().at(order[k]) << ',' << Fixed(100.0 * gains[k], 1)
       << ',' << Fixed(100.0 * cumulative, 1) << '\n';
  }
}

}  // namespace fusebeam
