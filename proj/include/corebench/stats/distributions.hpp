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

#ifndef COREBENCH_STATS_DISTRIBUTIONS_HPP_
#define COREBENCH_STATS_DISTRIBUTIONS_HPP_

namespace corebench::stats {

/// Regularized incomplete beta function I_x(a, b), a,b > 0, x in [0,1].
/// Continued-fraction evaluation (modified Lentz), absolute error well
/// below 1e-12 over the parameter ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of the F distribution with d1, d2 degrees of freedom:
/// I_x(d1/2, d2/2) with x = d1 f / (d1 f + d2).
/// Throws std::domain_error on non-finite or invalid arguments.
double f_cdf(double f, double d1, double d2);

/// Standard normal CDF via erfc. Throws std::domain_error on non-finite z.
double normal_cdf(double z);

/// Two-sided normal p-value, 2 (1 - Phi(|z|)).
double two_sided_normal_p(double z);

/// 97.5% standard normal quantile used for the 95% Wald intervals.
inline constexpr double kZ975 = 1.959964;

}  // namespace corebench::stats

#endif  // COREBENCH_STATS_DISTRIBUTIONS_HPP_
