#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sepscope/duality.hpp"
#include "sepscope/linalg.hpp"
#include "sepscope/states.hpp"

namespace sepscope {

enum class VerdictResult { Entangled, Inconclusive };

const char* to_string(VerdictResult r);

// Outcome of a necessary separability test.  Witness entries hold the scalar
// facts (indices, both sides of the decisive inequality, margins) needed to
// re-derive the verdict from the state.
struct Verdict {
  std::string criterion;
  VerdictResult result = VerdictResult::Inconclusive;
  std::map<std::string, double> witness;
  std::string note;
};

// Largest Schmidt weight of every spectral term must reach the term weight.
Verdict spectral_criterion_1(const DensityMatrix& rho);

// Second Schmidt weights are capped by the remaining leading weights.
Verdict spectral_criterion_2(const DensityMatrix& rho);

// Leading Schmidt weights of the spectral terms must sum to at least one.
Verdict eigenvalue_sum_check(const DensityMatrix& rho);

// The state spectrum must be majorized by both reduction spectra.
Verdict majorization_check(const DensityMatrix& rho);

// Partial transposition on B must stay positive semidefinite.
Verdict ppt_check(const DensityMatrix& rho);

// rank(rho) >= max(rank(rho_A), rank(rho_B)).
Verdict rank_inequality_check(const DensityMatrix& rho);

// Closed-form verdict for isotropic states of fidelity f.
Verdict isotropic_analytic_verdict(std::size_t d, double fidelity);

// All necessary criteria in a fixed order.
std::vector<Verdict> necessary_criteria(const DensityMatrix& rho);

// One evaluated inequality: lhs and rhs in the inequality's own orientation,
// slack >= 0 when it is satisfied.  Indices are -1 where not applicable.
struct BoundCheck {
  std::string inequality;
  int k = -1;
  int mu = -1;
  int i = -1;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct MixingBoundsReport {
  std::vector<BoundCheck> checks;
  double min_slack = 0.0;
  bool rank_one_target = false;
};

// Evaluates the coefficient and eigenvalue bounds tying a spectral ensemble
// to a mixed one through v.  Every bound is a theorem, so a violation beyond
// 1e-8 raises InternalInconsistency instead of being reported.
MixingBoundsReport verify_mixing_bounds(const Ensemble& source,
                                        const Ensemble& target,
                                        const MixingMatrix& v);

// Advisory regime data for the second spectral criterion.
struct RegimeEntry {
  std::size_t k = 0;
  double p = 0.0;
  double lambda2 = 0.0;
  double scaled_tail_sq = 0.0;  // (1/p_k)(sum_{a != k} lambda_1^(a))^2
  double floor = 0.0;           // (1-p_k)^2 / p_k
  bool chain_holds = false;
  bool dominant = false;  // p_k > 1/2
};

std::vector<RegimeEntry> criterion2_regime_check(const DensityMatrix& rho);

}  // namespace sepscope
