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

#include "corebench/stats/anova.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "corebench/stats/distributions.hpp"

namespace corebench::stats {

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  std::vector<const std::vector<double>*> gs;
  for (const auto& g : groups) {
    if (!g.empty()) gs.push_back(&g);
  }
  const std::size_t k = gs.size();
  if (k < 2) {
    throw std::invalid_argument("anova_oneway: need at least 2 non-empty groups");
  }

  std::size_t n_total = 0;
  double grand_sum = 0.0;
  for (const auto* g : gs) {
    n_total += g->size();
    for (double v : *g) grand_sum += v;
  }
  if (n_total <= k) {
    throw std::invalid_argument("anova_oneway: N must exceed group count");
  }
  const double grand_mean = grand_sum / static_cast<double>(n_total);

  AnovaResult r;
  for (const auto* g : gs) {
    double sum = 0.0;
    for (double v : *g) sum += v;
    const double mean = sum / static_cast<double>(g->size());
    r.ss_between += static_cast<double>(g->size()) * (mean - grand_mean) *
                    (mean - grand_mean);
    for (double v : *g) r.ss_within += (v - mean) * (v - mean);
  }
  r.df_between = k - 1;
  r.df_within = n_total - k;

  const double ms_between = r.ss_between / static_cast<double>(r.df_between);
  const double ms_within = r.ss_within / static_cast<double>(r.df_within);
  if (ms_within == 0.0) {
    if (r.ss_between > 0.0) {
      r.exact_fit = true;
      r.f_stat = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    } else {
      r.f_stat = 0.0;
      r.p_value = 1.0;
    }
    return r;
  }
  r.f_stat = ms_between / ms_within;
  r.p_value = 1.0 - f_cdf(r.f_stat, static_cast<double>(r.df_between),
                          static_cast<double>(r.df_within));
  return r;
}

std::string format_anova(const AnovaResult& r, const std::string& factor_name) {
  char buf[256];
  std::string out;
  out += "Source          Sum of Squares  df    F-Statistic   p-Value\n";
  std::snprintf(buf, sizeof(buf), "C(%s)%*s  %14.6e  %-4zu  %-12.6f  %.6e\n",
                factor_name.c_str(),
                static_cast<int>(factor_name.size() < 11 ? 11 - factor_name.size() : 0),
                "", r.ss_between, r.df_between, r.f_stat, r.p_value);
  out += buf;
  std::snprintf(buf, sizeof(buf), "Residual        %14.6e  %-4zu  %-12s  %s\n",
                r.ss_within, r.df_within, "-", "-");
  out += buf;
  if (r.exact_fit) out += "(exact fit: zero within-group variance)\n";
  return out;
}

}  // namespace corebench::stats
