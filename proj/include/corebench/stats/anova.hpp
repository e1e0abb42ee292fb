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

#ifndef COREBENCH_STATS_ANOVA_HPP_
#define COREBENCH_STATS_ANOVA_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace corebench::stats {

struct AnovaResult {
  double ss_between = 0.0;
  double ss_within = 0.0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  double f_stat = 0.0;
  double p_value = 1.0;
  // Set when the within-group variance is exactly zero while group means
  // differ; F is infinite and p is reported as 0.
  bool exact_fit = false;
};

/// One-way fixed-effects ANOVA over `groups`. Empty groups are excluded.
/// Throws std::invalid_argument when fewer than two non-empty groups remain
/// or when N <= k.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

/// Two-row table in the usual Source / SS / df / F / p layout.
std::string format_anova(const AnovaResult& r,
                         const std::string& factor_name);

}  // namespace corebench::stats

#endif  // COREBENCH_STATS_ANOVA_HPP_
