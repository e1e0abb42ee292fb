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

#include "corebench/stats/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "corebench/stats/distributions.hpp"
#include "json.hpp"

namespace corebench::stats {

namespace {

struct GroupStats {
  Eigen::MatrixXd xtx;  // X_j' X_j
  Eigen::VectorXd xty;  // X_j' y_j
  Eigen::VectorXd s;    // X_j' 1
  double t = 0.0;       // 1' y_j
  double yty = 0.0;
  double n = 0.0;
};

struct Profiler {
  std::vector<GroupStats> groups;
  std::size_t n_rows = 0;
  std::size_t p = 0;
  std::vector<std::string> names;

  struct Eval {
    double loglik;
    Eigen::VectorXd beta;
    double sigma2_e;
    Eigen::MatrixXd xtvix;  // X' V^-1 X at this lambda
  };

  Eval eval(double lambda) const {
    const auto pp = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(pp, pp);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(pp);
    double q = 0.0;
    double logdet_v = 0.0;
    for (const auto& g : groups) {
      const double c = lambda / (1.0 + lambda * g.n);
      a.noalias() += g.xtx - c * (g.s * g.s.transpose());
      b.noalias() += g.xty - c * g.t * g.s;
      q += g.yty - c * g.t * g.t;
      logdet_v += std::log1p(lambda * g.n);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("lmm: X'V^-1X not positive definite");
    }
    Eigen::VectorXd beta = llt.solve(b);
    double rvr = q - beta.dot(b);
    if (rvr < 0.0) rvr = 0.0;  // roundoff guard near exact fits
    const double df = static_cast<double>(n_rows - p);
    const double sigma2_e = rvr / df;
    if (!(sigma2_e > 0.0)) {
      throw std::runtime_error("lmm: residual variance is zero (exact fit)");
    }
    double logdet_a = 0.0;
    for (Eigen::Index i = 0; i < pp; ++i) {
      logdet_a += 2.0 * std::log(llt.matrixL()(i, i));
    }
    const double ll =
        -0.5 * (logdet_v + logdet_a + df * (1.0 + std::log(sigma2_e)));
    return Eval{ll, std::move(beta), sigma2_e, std::move(a)};
  }
};

Profiler build_profiler(const LmmDesign& d) {
  const std::size_t n = d.y.size();
  const std::size_t p = d.x_cols.size();
  if (p == 0 || n == 0) {
    throw std::invalid_argument("lmm: empty design");
  }
  if (d.group.size() != n) {
    throw std::invalid_argument("lmm: group index length mismatch");
  }
  for (const auto& col : d.x_cols) {
    if (col.size() != n) {
      throw std::invalid_argument("lmm: design column length mismatch");
    }
  }
  if (n <= p) {
    throw std::invalid_argument("lmm: need more rows than fixed effects");
  }

  int k = 0;
  for (int g : d.group) {
    if (g < 0) throw std::invalid_argument("lmm: negative group index");
    k = std::max(k, g + 1);
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (int g : d.group) counts[static_cast<std::size_t>(g)]++;
  std::size_t represented = 0;
  for (std::size_t c : counts) {
    if (c > 0) ++represented;
    if (c == 1) {
      throw std::invalid_argument(
          "lmm: a represented group has fewer than 2 rows");
    }
  }
  if (represented < 2) {
    throw std::invalid_argument(
        "lmm: random intercept unidentifiable with a single group");
  }

  // Rank check on X, naming the collinear terms.
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          d.x_cols[j][i];
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    std::string msg = "lmm: rank-deficient design; collinear terms:";
    const auto perm = qr.colsPermutation().indices();
    for (Eigen::Index i = qr.rank(); i < static_cast<Eigen::Index>(p); ++i) {
      msg += " ";
      msg += d.term_names.empty() ? ("col" + std::to_string(perm[i]))
                                  : d.term_names[static_cast<std::size_t>(perm[i])];
    }
    throw std::invalid_argument(msg);
  }

  Profiler prof;
  prof.n_rows = n;
  prof.p = p;
  prof.names = d.term_names;
  if (prof.names.size() != p) {
    prof.names.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      if (prof.names[j].empty()) prof.names[j] = "x" + std::to_string(j);
    }
  }
  prof.groups.resize(static_cast<std::size_t>(k));
  for (auto& g : prof.groups) {
    g.xtx = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                  static_cast<Eigen::Index>(p));
    g.xty = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    g.s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  }
  Eigen::VectorXd row(static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    auto& g = prof.groups[static_cast<std::size_t>(d.group[i])];
    for (std::size_t j = 0; j < p; ++j) {
      row(static_cast<Eigen::Index>(j)) = d.x_cols[j][i];
    }
    g.xtx.noalias() += row * row.transpose();
    g.xty.noalias() += row * d.y[i];
    g.s += row;
    g.t += d.y[i];
    g.yty += d.y[i] * d.y[i];
    g.n += 1.0;
  }
  // Drop unrepresented groups; they contribute nothing.
  std::erase_if(prof.groups, [](const GroupStats& g) { return g.n == 0.0; });
  return prof;
}

LmmFit assemble(const Profiler& prof, const Profiler::Eval& ev, double lambda,
                bool at_boundary) {
  LmmFit fit;
  fit.n_rows = prof.n_rows;
  fit.n_groups = prof.groups.size();
  fit.lambda = lambda;
  fit.lambda_at_boundary = at_boundary;
  fit.sigma2_e = ev.sigma2_e;
  fit.sigma2_u = lambda * ev.sigma2_e;
  fit.reml_loglik = ev.loglik;

  Eigen::MatrixXd cov = ev.xtvix.llt().solve(
      Eigen::MatrixXd::Identity(ev.xtvix.rows(), ev.xtvix.cols()));
  cov *= ev.sigma2_e;
  for (std::size_t j = 0; j < prof.p; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    LmmTerm term;
    term.name = prof.names[j];
    term.beta = ev.beta(jj);
    term.se = std::sqrt(cov(jj, jj));
    term.z = term.se > 0.0 ? term.beta / term.se : 0.0;
    term.p = two_sided_normal_p(term.z);
    term.ci_lo = term.beta - kZ975 * term.se;
    term.ci_hi = term.beta + kZ975 * term.se;
    fit.terms.push_back(std::move(term));
  }
  return fit;
}

}  // namespace

double reml_profile_loglik(const LmmDesign& d, double lambda) {
  return build_profiler(d).eval(lambda).loglik;
}

LmmFit lmm_fit_design_at_lambda(const LmmDesign& d, double lambda) {
  Profiler prof = build_profiler(d);
  return assemble(prof, prof.eval(lambda), lambda, lambda == 0.0);
}

LmmFit lmm_fit_design(const LmmDesign& d) {
  Profiler prof = build_profiler(d);

  // Golden-section maximization of the profile log-likelihood on
  // u = log10(lambda) in [-8, 8], followed by two parabolic refinements.
  // Bracketing alone locates a flat optimum only to ~sqrt(eps); the
  // quadratic vertex steps recover full double precision in lambda, which
  // the scale-equivariance and closed-form tolerances need.
  constexpr double kLo = -8.0;
  constexpr double kHi = 8.0;
  const auto g = [&prof](double u) {
    return prof.eval(std::pow(10.0, u)).loglik;
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = kLo, b = kHi;
  double c1 = b - gr * (b - a);
  double c2 = a + gr * (b - a);
  double f1 = g(c1);
  double f2 = g(c2);
  while (b - a > 1e-6) {
    if (f1 < f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = g(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = g(c1);
    }
  }
  double u_hat = (a + b) / 2.0;
  if (u_hat > kLo + 1e-3 && u_hat < kHi - 1e-3) {
    for (double h : {1e-3, 1e-5}) {
      const double fm = g(u_hat - h);
      const double f0 = g(u_hat);
      const double fp = g(u_hat + h);
      const double denom = fm - 2.0 * f0 + fp;
      if (denom >= 0.0) break;  // lost concavity at noise level
      const double step = 0.5 * h * (fm - fp) / denom;
      if (std::fabs(step) > h) break;
      u_hat += step;
    }
  }
  double lambda_hat = std::pow(10.0, u_hat);
  auto best = prof.eval(lambda_hat);

  // Boundary check: clamp to lambda = 0 when the unconstrained optimum does
  // not beat the no-group-variance model.
  auto at_zero = prof.eval(0.0);
  bool boundary = false;
  if (at_zero.loglik >= best.loglik) {
    lambda_hat = 0.0;
    best = std::move(at_zero);
    boundary = true;
  }
  return assemble(prof, best, lambda_hat, boundary);
}

LmmDesign stress_treatment_design(const LabeledDataset& ds) {
  if (ds.rows.empty()) throw std::invalid_argument("lmm: empty dataset");
  if (ds.distinct_stress_level_count() < 2) {
    throw std::invalid_argument("lmm: single treatment level");
  }
  bool present[3] = {false, false, false};
  for (const auto& r : ds.rows) {
    if (r.stress) present[static_cast<std::size_t>(*r.stress)] = true;
  }
  LmmDesign d;
  const std::size_t n = ds.rows.size();
  d.y.reserve(n);
  d.group.reserve(n);
  d.term_names.push_back("Intercept");
  d.x_cols.emplace_back(n, 1.0);
  for (StressKind k : kAllStressKinds) {
    if (!present[static_cast<std::size_t>(k)]) continue;
    d.term_names.emplace_back(to_string(k));
    auto& col = d.x_cols.emplace_back(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (ds.rows[i].stress == k) col[i] = 1.0;
    }
  }
  for (const auto& r : ds.rows) {
    d.y.push_back(r.latency_ms);
    d.group.push_back(static_cast<int>(nf_index(r.nf)));
  }
  return d;
}

LmmFit lmm_fit(const LabeledDataset& ds) {
  return lmm_fit_design(stress_treatment_design(ds));
}

namespace {

std::string fmt_p(double p) {
  if (p < 0.001) return "<0.001";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", p);
  return buf;
}

std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string format_lmm(const LmmFit& fit) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-12s %15s %12s %9s %9s %s\n", "Source",
                "Coefficient", "Std. Error", "z-value", "p-value", "95% CI");
  os << buf;
  for (const auto& t : fit.terms) {
    std::snprintf(buf, sizeof(buf), "%-12s %15s %12s %9s %9s [%s, %s]\n",
                  t.name.c_str(), fmt3(t.beta).c_str(), fmt3(t.se).c_str(),
                  fmt3(t.z).c_str(), fmt_p(t.p).c_str(), fmt3(t.ci_lo).c_str(),
                  fmt3(t.ci_hi).c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-12s %15s %12s %9s %9s %s\n", "Group Var",
                fmt3(fit.sigma2_u).c_str(), "-", "-", "-", "-");
  os << buf;
  os << "Residual Var: " << fmt3(fit.sigma2_e)
     << "  lambda: " << fmt3(fit.lambda)
     << (fit.lambda_at_boundary ? " (boundary)" : "")
     << "  REML loglik: " << fmt3(fit.reml_loglik) << "  N: " << fit.n_rows
     << "  groups: " << fit.n_groups << "\n";
  return os.str();
}

std::string lmm_to_json(const LmmFit& fit) {
  nlohmann::json j;
  j["terms"] = nlohmann::json::array();
  for (const auto& t : fit.terms) {
    j["terms"].push_back({
        {"name", t.name},
        {"beta", t.beta},
        {"se", t.se},
        {"z", t.z},
        {"p", t.p},
        {"ci95", {t.ci_lo, t.ci_hi}},
    });
  }
  j["group_var"] = fit.sigma2_u;
  j["residual_var"] = fit.sigma2_e;
  j["lambda"] = fit.lambda;
  j["lambda_at_boundary"] = fit.lambda_at_boundary;
  j["reml_loglik"] = fit.reml_loglik;
  j["n_rows"] = fit.n_rows;
  j["n_groups"] = fit.n_groups;
  return j.dump(2);
}

}  // namespace corebench::stats
