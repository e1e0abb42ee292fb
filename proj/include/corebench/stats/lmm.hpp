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

#ifndef COREBENCH_STATS_LMM_HPP_
#define COREBENCH_STATS_LMM_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "corebench/stats/dataset.hpp"

namespace corebench::stats {

// Random-intercept linear mixed model
//
//   y = X beta + Z u + eps,   u ~ N(0, sigma2_u I_K),  eps ~ N(0, sigma2_e I_N)
//
// fitted by REML. The restricted log-likelihood is profiled over the single
// variance ratio lambda = sigma2_u / sigma2_e; for V(lambda) = I + lambda Z Z'
// the grouped structure makes V block diagonal, so every evaluation runs in
// O(N) via rank-one (Sherman-Morrison) block inverses.

struct LmmTerm {
  std::string name;
  double beta = 0.0;
  double se = 0.0;
  double z = 0.0;
  double p = 1.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct LmmFit {
  std::vector<LmmTerm> terms;
  double sigma2_u = 0.0;   // group (random-intercept) variance
  double sigma2_e = 0.0;   // residual variance
  double lambda = 0.0;     // sigma2_u / sigma2_e
  double reml_loglik = 0.0;
  bool lambda_at_boundary = false;  // optimum clamped at lambda = 0
  std::size_t n_rows = 0;
  std::size_t n_groups = 0;
};

/// Generic design: y (N), p design columns, group index per row (0..K-1).
struct LmmDesign {
  std::vector<double> y;
  std::vector<std::vector<double>> x_cols;
  std::vector<int> group;
  std::vector<std::string> term_names;
};

/// Full REML fit: 1-D golden-section maximization of the restricted
/// log-likelihood over log10(lambda) in [-8, 8] with a boundary check at
/// lambda = 0. Throws std::invalid_argument for a single group, fewer than
/// two rows in a represented group, or rank-deficient X (the message names
/// the collinear terms).
LmmFit lmm_fit_design(const LmmDesign& d);

/// Fit with lambda held fixed (lambda = 0 reduces to ordinary least squares).
LmmFit lmm_fit_design_at_lambda(const LmmDesign& d, double lambda);

/// Restricted profile log-likelihood at a given lambda, for optimality probes.
double reml_profile_loglik(const LmmDesign& d, double lambda);

/// Treatment-coded fit on a labeled dataset: fixed effects Intercept plus one
/// dummy per stress kind present (baseline "None" is the reference level),
/// grouping factor NF. Throws if fewer than two treatment levels are present.
LmmFit lmm_fit(const LabeledDataset& ds);

/// Builds the treatment design without fitting (exposed for tests).
LmmDesign stress_treatment_design(const LabeledDataset& ds);

/// Six-column table in the shape of a mixed-model regression summary, plus
/// the Group Var row (which carries no z/p/CI entries) and a short footer.
std::string format_lmm(const LmmFit& fit);

/// JSON rendering, field-for-field equal to the text table.
std::string lmm_to_json(const LmmFit& fit);

}  // namespace corebench::stats

#endif  // COREBENCH_STATS_LMM_HPP_
