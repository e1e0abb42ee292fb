// Copyright 2026 The corebench Authors.
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

#include "corebench/stats/dataset.hpp"

#include <set>
#include <stdexcept>

#include "corebench/csv.hpp"

namespace corebench::stats {

std::vector<std::vector<double>> LabeledDataset::values_by_nf() const {
  std::vector<std::vector<double>> groups(kNfCount);
  for (const auto& r : rows) {
    groups[nf_index(r.nf)].push_back(r.latency_ms);
  }
  return groups;
}

std::map<std::string, std::vector<double>> LabeledDataset::values_by_stress()
    const {
  std::map<std::string, std::vector<double>> out;
  for (const auto& r : rows) {
    const std::string key =
        r.stress ? std::string(to_string(*r.stress)) : std::string("None");
    out[key].push_back(r.latency_ms);
  }
  return out;
}

std::size_t LabeledDataset::distinct_nf_count() const {
  std::set<NfKind> s;
  for (const auto& r : rows) s.insert(r.nf);
  return s.size();
}

std::size_t LabeledDataset::distinct_stress_level_count() const {
  std::set<int> s;
  for (const auto& r : rows) {
    s.insert(r.stress ? static_cast<int>(*r.stress) : -1);
  }
  return s.size();
}

LabeledDataset load_labeled_csv(const std::string& path,
                                const std::string& latency_column,
                                bool include_failures,
                                std::size_t* dropped_failures) {
  const CsvTable t = read_csv(path);
  const std::size_t c_lat = t.col(latency_column);
  const std::size_t c_outcome = t.col("outcome");
  const std::size_t c_nf = t.col("nf");
  const std::size_t c_kind = t.col("kind");

  LabeledDataset ds;
  std::size_t dropped = 0;
  for (const auto& row : t.rows) {
    if (!include_failures && row[c_outcome] != "success") {
      ++dropped;
      continue;
    }
    if (row[c_lat].empty()) {
      ++dropped;
      continue;
    }
    LabeledRow lr;
    lr.latency_ms = std::stod(row[c_lat]);
    auto nf = parse_nf_kind(row[c_nf]);
    if (!nf) throw std::runtime_error("labeled csv: bad nf field " + row[c_nf]);
    lr.nf = *nf;
    if (!row[c_kind].empty()) {
      auto k = parse_stress_kind(row[c_kind]);
      if (!k) {
        throw std::runtime_error("labeled csv: bad kind field " + row[c_kind]);
      }
      lr.stress = *k;
    }
    ds.rows.push_back(lr);
  }
  if (dropped_failures) *dropped_failures = dropped;
  return ds;
}

}  // namespace corebench::stats
