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

#include "corebench/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace corebench {

namespace {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  m.n = v.size();
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  if (v.size() >= 2) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

std::string f3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

ReportSummary emit_report(const ReportArtifacts& art,
                          const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  ReportSummary summary;

  stats::LabeledDataset ds;
  if (art.merged != nullptr) ds = art.merged->dataset();

  // Values keyed by attributed NF and by (nf, kind) cell.
  std::map<NfKind, std::vector<double>> by_nf;
  std::map<std::string, std::vector<double>> by_kind;
  std::map<NfKind, std::map<StressKind, std::vector<double>>> cells;
  std::vector<double> baseline;
  for (const auto& r : ds.rows) {
    by_nf[r.nf].push_back(r.latency_ms);
    if (r.stress) {
      by_kind[std::string(to_string(*r.stress))].push_back(r.latency_ms);
      cells[r.nf][*r.stress].push_back(r.latency_ms);
    } else {
      by_kind["Baseline"].push_back(r.latency_ms);
      baseline.push_back(r.latency_ms);
    }
  }

  {
    std::ofstream out(fs::path(out_dir) / "nf_summary.csv");
    out << "nf,n,mean_ms,std_ms,median_ms,p95_ms\n";
    for (const auto& [nf, values] : by_nf) {
      const DescriptiveStats s = summarize_values(values);
      out << to_string(nf) << ',' << s.n << ',' << f3(s.mean_ms) << ','
          << f3(s.std_ms) << ',' << f3(s.median_ms) << ',' << f3(s.p95_ms)
          << "\n";
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "kind_summary.csv");
    out << "kind,n,mean_ms,std_ms,median_ms,p95_ms\n";
    for (const auto& [kind, values] : by_kind) {
      const DescriptiveStats s = summarize_values(values);
      out << kind << ',' << s.n << ',' << f3(s.mean_ms) << ',' << f3(s.std_ms)
          << ',' << f3(s.median_ms) << ',' << f3(s.p95_ms) << "\n";
    }
  }
  {
    // Exactly (#NFs present) x (#stress kinds) rows, empty cells included.
    std::ofstream out(fs::path(out_dir) / "interaction.csv");
    out << "nf,kind,mean_ms,std_ms,n\n";
    for (const auto& [nf, _] : by_nf) {
      for (StressKind k : kAllStressKinds) {
        const auto it = cells.find(nf);
        const std::vector<double>* v = nullptr;
        if (it != cells.end()) {
          const auto jt = it->second.find(k);
          if (jt != it->second.end()) v = &jt->second;
        }
        const Moments m = moments(v ? *v : std::vector<double>{});
        out << to_string(nf) << ',' << to_string(k) << ','
            << (m.n ? f3(m.mean) : "") << ',' << (m.n ? f3(m.stddev) : "")
            << ',' << m.n << "\n";
      }
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "capture_overhead.csv");
    out << "backend,median_cpu_pct,mean_mem_bytes,frames_captured,frames_"
           "dropped\n";
    for (const auto& cs : art.capture) {
      double mem = 0.0;
      for (auto b : cs.mem_bytes_samples) mem += static_cast<double>(b);
      if (!cs.mem_bytes_samples.empty()) {
        mem /= static_cast<double>(cs.mem_bytes_samples.size());
      }
      out << to_string(cs.backend) << ',' << f3(cs.median_cpu_pct()) << ','
          << f3(mem) << ',' << cs.frames_captured << ',' << cs.frames_dropped
          << "\n";
    }
  }

  // Human-readable summary.
  std::ofstream txt(fs::path(out_dir) / "summary.txt");
  txt << "corebench experiment summary\n";
  txt << "============================\n\n";
  if (art.merged != nullptr) {
    txt << "merge: " << art.merged->labeled.size() << " labeled, "
        << art.merged->discarded.size() << " discarded\n";
  }
  if (ds.rows.empty()) {
    txt << "dataset: empty (no analyzable samples)\n";
    return summary;
  }

  const Moments base = moments(baseline);
  summary.baseline_mean_ms = base.mean;
  summary.baseline_n = base.n;
  if (base.n > 0) {
    DescriptiveStats bs = summarize_values(baseline);
    txt << "baseline latency: " << format_descriptive(bs) << " over " << bs.n
        << " samples\n";
  } else {
    txt << "baseline latency: no baseline samples\n";
  }

  if (base.n > 0) {
    txt << "\nmean latency inflation over baseline by stress kind:\n";
    for (StressKind k : kAllStressKinds) {
      const auto it = by_kind.find(std::string(to_string(k)));
      if (it == by_kind.end()) continue;
      const Moments m = moments(it->second);
      summary.kind_inflation.emplace_back(k, m.mean - base.mean);
    }
    std::sort(summary.kind_inflation.begin(), summary.kind_inflation.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [k, infl] : summary.kind_inflation) {
      txt << "  " << to_string(k) << ": +" << f3(infl) << " ms\n";
    }

    double best = -1e300;
    for (const auto& [nf, kinds] : cells) {
      const auto it = kinds.find(StressKind::CpuMemory);
      if (it == kinds.end() || it->second.empty()) continue;
      const double infl = moments(it->second).mean - base.mean;
      if (infl > best) {
        best = infl;
        summary.most_affected_nf = nf;
      }
    }
    if (summary.most_affected_nf) {
      txt << "\nmost affected NF (largest CpuMemory mean inflation): "
          << to_string(*summary.most_affected_nf) << " (+" << f3(best)
          << " ms)\n";
    }
  }

  txt << "\nANOVA (latency by NF):\n";
  if (art.anova) {
    txt << format_anova(*art.anova, "nf");
  } else {
    txt << "  skipped: " << art.anova_note << "\n";
  }
  txt << "\nLMM (stress fixed effects, NF random intercept):\n";
  if (art.lmm) {
    txt << format_lmm(*art.lmm);
  } else {
    txt << "  skipped: " << art.lmm_note << "\n";
  }
  if (!art.capture.empty()) {
    txt << "\ncapture overhead (see capture_overhead.csv):\n";
    for (const auto& cs : art.capture) {
      txt << "  " << to_string(cs.backend)
          << ": median cpu " << f3(cs.median_cpu_pct()) << "%, frames "
          << cs.frames_captured << ", dropped " << cs.frames_dropped << "\n";
    }
  }
  return summary;
}

}  // namespace corebench
