#include "sepscope/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "sepscope/errors.hpp"
#include "sepscope/factorize.hpp"

namespace sepscope {

namespace {

constexpr double kDecisionTol = 1e-10;

struct SpectralData {
  std::vector<double> p;
  std::vector<std::vector<double>> lambda;
  bool degenerate = false;
};

std::vector<double> reduction_spectrum(const CMatrix& c) {
  Spectrum s = hermitian_eig(c * c.adjoint());
  for (double& value : s.eigenvalues) {
    value = std::max(0.0, value);
  }
  return s.eigenvalues;
}

SpectralData spectral_data(const DensityMatrix& rho) {
  const Ensemble e = spectral_ensemble(rho);
  SpectralData data;
  data.p.reserve(e.terms.size());
  data.lambda.reserve(e.terms.size());
  for (const EnsembleTerm& term : e.terms) {
    data.p.push_back(term.p);
    data.lambda.push_back(reduction_spectrum(term.c));
  }
  for (std::size_t a = 0; a + 1 < data.p.size(); ++a) {
    if (data.p[a] - data.p[a + 1] < kDecisionTol) {
      data.degenerate = true;
    }
  }
  return data;
}

void flag_degenerate(Verdict& v, const SpectralData& data) {
  if (data.degenerate) {
    v.witness["degenerate_spectrum"] = 1.0;
  }
}

}  // namespace

const char* to_string(VerdictResult r) {
  return r == VerdictResult::Entangled ? "Entangled" : "Inconclusive";
}

Verdict spectral_criterion_1(const DensityMatrix& rho) {
  const SpectralData data = spectral_data(rho);
  Verdict v;
  v.criterion = "spectral-leading-weight";
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t a = 0; a < data.p.size(); ++a) {
    const double margin = data.lambda[a][0] - data.p[a];
    if (margin < min_margin) {
      min_margin = margin;
      worst = a;
    }
  }
  v.witness["term"] = static_cast<double>(worst);
  v.witness["largest_eigenvalue"] = data.lambda[worst][0];
  v.witness["probability"] = data.p[worst];
  v.witness["margin"] = min_margin;
  if (min_margin < -kDecisionTol) {
    v.result = VerdictResult::Entangled;
  }
  flag_degenerate(v, data);
  return v;
}

Verdict spectral_criterion_2(const DensityMatrix& rho) {
  const SpectralData data = spectral_data(rho);
  Verdict v;
  v.criterion = "spectral-second-weight";
  double total_leading = 0.0;
  for (const std::vector<double>& lam : data.lambda) {
    total_leading += lam[0];
  }
  bool applicable = false;
  double best_margin = -std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  double best_left = 0.0;
  double best_right = 0.0;
  for (std::size_t k = 0; k < data.p.size(); ++k) {
    const double lambda2 = data.lambda[k].size() > 1 ? data.lambda[k][1] : 0.0;
    if (lambda2 <= kDecisionTol) {
      continue;
    }
    const double tail = total_leading - data.lambda[k][0];
    if (tail >= 1.0) {
      continue;
    }
    applicable = true;
    const double left = tail * tail;
    const double right = data.p[k] * lambda2;
    const double margin = right - left;
    if (margin > best_margin) {
      best_margin = margin;
      best = k;
      best_left = left;
      best_right = right;
    }
  }
  if (!applicable) {
    v.witness["applicable"] = 0.0;
    return v;
  }
  v.witness["term"] = static_cast<double>(best);
  v.witness["left"] = best_left;
  v.witness["right"] = best_right;
  v.witness["margin"] = best_margin;
  if (best_margin > kDecisionTol) {
    v.result = VerdictResult::Entangled;
  }
  flag_degenerate(v, data);
  return v;
}

Verdict eigenvalue_sum_check(const DensityMatrix& rho) {
  const SpectralData data = spectral_data(rho);
  Verdict v;
  v.criterion = "leading-weight-sum";
  double sum = 0.0;
  for (const std::vector<double>& lam : data.lambda) {
    sum += lam[0];
  }
  v.witness["sum"] = sum;
  if (sum < 1.0 - kDecisionTol) {
    v.result = VerdictResult::Entangled;
  }
  return v;
}

Verdict majorization_check(const DensityMatrix& rho) {
  validate_state(rho);
  Verdict v;
  v.criterion = "majorization";
  const std::size_t mn = rho.dim_a * rho.dim_b;
  const std::vector<double> full = hermitian_eig(rho.matrix).eigenvalues;
  const std::vector<double> spec_a =
      hermitian_eig(partial_trace_b(rho.matrix, rho.dim_a, rho.dim_b))
          .eigenvalues;
  const std::vector<double> spec_b =
      hermitian_eig(partial_trace_a(rho.matrix, rho.dim_a, rho.dim_b))
          .eigenvalues;
  double sum_ab = 0.0;
  double sum_a = 0.0;
  double sum_b = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t worst_prefix = 0;
  double worst_side = 0.0;
  double worst_state_sum = 0.0;
  double worst_reduction_sum = 0.0;
  for (std::size_t k = 0; k < mn; ++k) {
    sum_ab += full[k];
    if (k < spec_a.size()) sum_a += spec_a[k];
    if (k < spec_b.size()) sum_b += spec_b[k];
    const double excess_a = sum_ab - sum_a;
    const double excess_b = sum_ab - sum_b;
    const double side = excess_a >= excess_b ? 0.0 : 1.0;
    const double excess = std::max(excess_a, excess_b);
    if (excess > worst) {
      worst = excess;
      worst_prefix = k + 1;
      worst_side = side;
      worst_state_sum = sum_ab;
      worst_reduction_sum = side == 0.0 ? sum_a : sum_b;
    }
  }
  v.witness["prefix"] = static_cast<double>(worst_prefix);
  v.witness["side"] = worst_side;
  v.witness["state_sum"] = worst_state_sum;
  v.witness["reduction_sum"] = worst_reduction_sum;
  v.witness["margin"] = worst;
  if (worst > kDecisionTol) {
    v.result = VerdictResult::Entangled;
  }
  return v;
}

Verdict ppt_check(const DensityMatrix& rho) {
  validate_state(rho);
  Verdict v;
  v.criterion = "ppt";
  const CMatrix pt = partial_transpose_b(rho.matrix, rho.dim_a, rho.dim_b);
  const std::vector<double> spec = hermitian_eig(pt).eigenvalues;
  const double min_eig = spec.back();
  v.witness["min_eigenvalue"] = min_eig;
  if (min_eig < -kDecisionTol) {
    v.result = VerdictResult::Entangled;
  }
  return v;
}

Verdict rank_inequality_check(const DensityMatrix& rho) {
  const RankData data = rank_theorem_data(rho);
  Verdict v;
  v.criterion = "rank-comparison";
  v.witness["rank_state"] = static_cast<double>(data.rank_ab);
  v.witness["rank_a"] = static_cast<double>(data.rank_a);
  v.witness["rank_b"] = static_cast<double>(data.rank_b);
  if (!data.inequality_holds) {
    v.result = VerdictResult::Entangled;
  }
  return v;
}

Verdict isotropic_analytic_verdict(std::size_t d, double fidelity) {
  if (d < 2) {
    throw DomainError("isotropic verdict: dimension must be at least 2");
  }
  const double fmin = 1.0 / static_cast<double>(d * d);
  if (fidelity < fmin - 1e-12 || fidelity > 1.0 + 1e-12) {
    throw DomainError("isotropic verdict: fidelity out of range");
  }
  Verdict v;
  v.criterion = "isotropic-closed-form";
  const double threshold = 1.0 / static_cast<double>(d);
  v.witness["fidelity"] = fidelity;
  v.witness["threshold"] = threshold;
  if (fidelity > threshold + kDecisionTol) {
    v.result = VerdictResult::Entangled;
  } else if (d == 2) {
    v.note = "separable at or below the threshold; a product decomposition exists";
  }
  return v;
}

std::vector<Verdict> necessary_criteria(const DensityMatrix& rho) {
  return {
      spectral_criterion_1(rho), spectral_criterion_2(rho),
      eigenvalue_sum_check(rho), majorization_check(rho),
      ppt_check(rho),           rank_inequality_check(rho),
  };
}

MixingBoundsReport verify_mixing_bounds(const Ensemble& source,
                                        const Ensemble& target,
                                        const MixingMatrix& v) {
  const KrausSet ks = kraus_from_ensemble(source);
  const KrausSet kt = kraus_from_ensemble(target);
  if (v.v.rows() != kt.ops.size() || v.v.cols() != ks.ops.size()) {
    throw ShapeMismatch("verify_mixing_bounds: mixing shape mismatch");
  }
  for (std::size_t a = 0; a < ks.ops.size(); ++a) {
    for (std::size_t b = a + 1; b < ks.ops.size(); ++b) {
      if (std::abs(hs_inner(ks.ops[a], ks.ops[b])) > 1e-8) {
        throw DomainError("verify_mixing_bounds: source is not spectral");
      }
    }
  }
  const KrausSet mixed = transform(ks, v);
  for (std::size_t mu = 0; mu < kt.ops.size(); ++mu) {
    if (max_abs_diff(mixed.ops[mu], kt.ops[mu]) > 1e-8) {
      throw NotSameState("verify_mixing_bounds: mixing does not map source to target");
    }
  }

  const std::size_t d = source.terms.size();
  const std::size_t dp = target.terms.size();
  const std::size_t dim = source.dim_a;
  std::vector<double> p(d), q(dp);
  std::vector<std::vector<double>> lam(d), lamt(dp);
  for (std::size_t a = 0; a < d; ++a) {
    p[a] = source.terms[a].p;
    lam[a] = reduction_spectrum(source.terms[a].c);
  }
  MixingBoundsReport report;
  report.rank_one_target = true;
  for (std::size_t mu = 0; mu < dp; ++mu) {
    q[mu] = target.terms[mu].p;
    lamt[mu] = reduction_spectrum(target.terms[mu].c);
    if (lamt[mu].size() > 1 && lamt[mu][1] > 1e-8) {
      report.rank_one_target = false;
    }
  }

  report.min_slack = std::numeric_limits<double>::infinity();
  auto push = [&report](const char* name, int k, int mu, int i, double lhs,
                        double rhs, double slack) {
    report.checks.push_back(BoundCheck{name, k, mu, i, lhs, rhs, slack});
    if (slack < report.min_slack) {
      report.min_slack = slack;
    }
  };

  for (std::size_t mu = 0; mu < dp; ++mu) {
    for (std::size_t a = 0; a < d; ++a) {
      double bound = 0.0;
      double overlap = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        bound += std::sqrt(q[mu] * lamt[mu][i] * lam[a][i] / p[a]);
        overlap += std::sqrt(q[mu] * p[a] * lam[a][i] * lamt[mu][i]);
      }
      const double mag = std::abs(v.v(mu, a));
      push("coefficient-bound", static_cast<int>(a), static_cast<int>(mu), -1,
           mag, bound, bound - mag);
      push("perturbation-bound", static_cast<int>(a), static_cast<int>(mu), -1,
           mag * mag * p[a], mag * overlap, mag * overlap - mag * mag * p[a]);
    }
  }

  for (std::size_t k = 0; k < d; ++k) {
    double total = 0.0;
    for (std::size_t mu = 0; mu < dp; ++mu) {
      double inner = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        inner += std::sqrt(lam[k][i] * lamt[mu][i]);
      }
      total += q[mu] * inner * inner;
    }
    push("source-weight-bound", static_cast<int>(k), -1, -1, p[k], total,
         total - p[k]);
  }

  for (std::size_t mu = 0; mu < dp; ++mu) {
    double total = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double inner = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        inner += std::sqrt(lam[k][i] * lamt[mu][i]);
      }
      total += inner * inner;
    }
    push("unit-sum-bound", -1, static_cast<int>(mu), -1, 1.0, total,
         total - 1.0);
  }

  for (std::size_t mu = 0; mu < dp; ++mu) {
    for (std::size_t k = 0; k < d; ++k) {
      double tail = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        if (a == k) continue;
        double inner = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
          inner += std::sqrt(lam[a][j] * lamt[mu][j]);
        }
        tail += std::sqrt(lam[a][0]) * inner;
      }
      for (std::size_t i = 0; i < dim; ++i) {
        const double lhs = std::sqrt(lamt[mu][i]);
        const double rhs =
            std::abs(v.v(mu, k)) * std::sqrt(lam[k][i] * p[k] / q[mu]) - tail;
        push("eigenvalue-floor", static_cast<int>(k), static_cast<int>(mu),
             static_cast<int>(i), lhs, rhs, lhs - rhs);
      }
    }
  }

  if (report.rank_one_target) {
    for (std::size_t k = 0; k < d; ++k) {
      double row = 0.0;
      for (std::size_t mu = 0; mu < dp; ++mu) {
        row += std::abs(v.v(mu, k)) * std::sqrt(q[mu]);
      }
      if (row * row > 0.0) {
        const double rhs = p[k] / (row * row);
        push("leading-weight-floor", static_cast<int>(k), -1, -1, lam[k][0],
             rhs, lam[k][0] - rhs);
      }
    }
  }

  if (report.min_slack < -1e-8) {
    std::string worst;
    for (const BoundCheck& c : report.checks) {
      if (c.slack == report.min_slack) {
        worst = c.inequality;
        break;
      }
    }
    throw InternalInconsistency("verify_mixing_bounds: '" + worst +
                                "' violated beyond tolerance");
  }
  return report;
}

std::vector<RegimeEntry> criterion2_regime_check(const DensityMatrix& rho) {
  const SpectralData data = spectral_data(rho);
  double total_leading = 0.0;
  for (const std::vector<double>& lam : data.lambda) {
    total_leading += lam[0];
  }
  std::vector<RegimeEntry> out;
  out.reserve(data.p.size());
  for (std::size_t k = 0; k < data.p.size(); ++k) {
    RegimeEntry entry;
    entry.k = k;
    entry.p = data.p[k];
    entry.lambda2 = data.lambda[k].size() > 1 ? data.lambda[k][1] : 0.0;
    const double tail = total_leading - data.lambda[k][0];
    entry.scaled_tail_sq = tail * tail / entry.p;
    entry.floor = (1.0 - entry.p) * (1.0 - entry.p) / entry.p;
    entry.chain_holds = (1.0 - entry.p >= entry.lambda2 - kDecisionTol) &&
                        (entry.lambda2 > entry.scaled_tail_sq + kDecisionTol) &&
                        (entry.scaled_tail_sq >= entry.floor - kDecisionTol);
    entry.dominant = entry.p > 0.5;
    out.push_back(entry);
  }
  return out;
}

}  // namespace sepscope
