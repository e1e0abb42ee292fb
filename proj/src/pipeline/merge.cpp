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

#include "corebench/pipeline/merge.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace corebench {

stats::LabeledDataset MergeResult::dataset(bool include_failures) const {
  stats::LabeledDataset ds;
  for (const auto& ls : labeled) {
    if (!ls.nf) continue;
    if (!include_failures && ls.sample.outcome != SampleOutcome::Success) {
      continue;
    }
    ds.rows.push_back({ls.sample.total_ms, *ls.nf, ls.kind});
  }
  return ds;
}

std::string MergeResult::summary_json() const {
  std::map<std::string, std::size_t> reasons;
  for (const auto& d : discarded) reasons[d.reason]++;
  std::size_t stressed = 0, baseline = 0, failures = 0;
  for (const auto& ls : labeled) {
    (ls.stressed ? stressed : baseline)++;
    if (ls.sample.outcome != SampleOutcome::Success) ++failures;
  }
  return nlohmann::json{
      {"labeled", labeled.size()},
      {"stressed", stressed},
      {"baseline", baseline},
      {"discarded", discarded.size()},
      {"discard_reasons", reasons},
      {"failed_samples", failures},
  }
      .dump(2);
}

MergeResult merge_samples(const std::vector<RegistrationSample>& samples,
                          const std::vector<WorkloadWindow>& windows,
                          double guard_s) {
  // Clock-domain sanity: the sample log must be monotone in seq.
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].seq <= samples[i - 1].seq ||
        samples[i].mono_ts_ns < samples[i - 1].mono_ts_ns) {
      throw std::invalid_argument(
          "merge: sample log is not monotone (clock-domain mismatch?)");
    }
  }
  std::vector<WorkloadWindow> sorted = windows;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) {
              return a.start_mono_ns < b.start_mono_ns;
            });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].start_mono_ns < sorted[i - 1].end_mono_ns) {
      throw std::invalid_argument("merge: overlapping windows " +
                                  sorted[i - 1].id + " and " + sorted[i].id);
    }
  }

  const auto guard_ns = static_cast<std::int64_t>(guard_s * 1e9);
  MergeResult out;
  for (const auto& s : samples) {
    const std::int64_t t = s.mono_ts_ns;

    const WorkloadWindow* inside = nullptr;
    bool in_guard = false;
    const WorkloadWindow* preceding = nullptr;  // realized, latest start <= t
    const WorkloadWindow* following = nullptr;  // realized, earliest start > t
    for (const auto& w : sorted) {
      if (t >= w.start_mono_ns && t < w.end_mono_ns) inside = &w;
      if (t >= w.end_mono_ns && t < w.end_mono_ns + guard_ns) in_guard = true;
      if (w.realized) {
        if (w.start_mono_ns <= t) {
          preceding = &w;
        } else if (following == nullptr) {
          following = &w;
        }
      }
    }

    if (inside != nullptr) {
      if (!inside->realized) {
        out.discarded.push_back({s.seq, "unrealized_window"});
        continue;
      }
      LabeledSample ls;
      ls.sample = s;
      ls.stressed = true;
      ls.nf = inside->scenario.target;
      ls.kind = inside->scenario.kind;
      ls.window_id = inside->id;
      out.labeled.push_back(std::move(ls));
      continue;
    }
    if (in_guard) {
      out.discarded.push_back({s.seq, "cooldown_guard"});
      continue;
    }
    LabeledSample ls;
    ls.sample = s;
    ls.stressed = false;
    const WorkloadWindow* block = preceding ? preceding : following;
    if (block != nullptr) ls.nf = block->scenario.target;
    out.labeled.push_back(std::move(ls));
  }
  return out;
}

void write_labeled_csv(const std::string& path,
                       const std::vector<LabeledSample>& labeled) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "seq,total_ms,reg_ms,pdu_ms,outcome,label,nf,kind,window_id\n";
  char buf[32];
  const auto ms = [&buf](double v) -> std::string {
    if (v < 0.0) return "";
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
  };
  for (const auto& ls : labeled) {
    const auto& s = ls.sample;
    out << s.seq << ',' << ms(s.total_ms) << ',' << ms(s.reg_ms) << ','
        << ms(s.pdu_ms) << ',' << to_string(s.outcome) << ','
        << (ls.stressed ? "Stressed" : "Baseline") << ','
        << (ls.nf ? std::string(to_string(*ls.nf)) : "") << ','
        << (ls.kind ? std::string(to_string(*ls.kind)) : "") << ','
        << ls.window_id << "\n";
  }
}

}  // namespace corebench
