#include "sepscope/duality.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

#include "sepscope/errors.hpp"

namespace sepscope {

void validate_kraus(const KrausSet& k) {
  if (k.dim_a == 0 || k.dim_b == 0) {
    throw DomainError("kraus: dimensions must be positive");
  }
  if (k.ops.empty()) {
    throw DomainError("kraus: no operators");
  }
  double total = 0.0;
  for (const CMatrix& op : k.ops) {
    if (op.rows() != k.dim_b || op.cols() != k.dim_a) {
      throw ShapeMismatch("kraus: operator is not dim_b x dim_a");
    }
    total += std::real(hs_inner(op, op));
  }
  if (std::abs(total - static_cast<double>(k.dim_a)) > 1e-9) {
    throw DomainError("kraus: weights do not sum to one");
  }
}

double isometry_error(const MixingMatrix& v) {
  const CMatrix gram = v.v.adjoint() * v.v;
  return (gram - CMatrix::identity(v.v.cols())).frobenius_norm();
}

void validate_mixing(const MixingMatrix& v, double tol) {
  if (v.v.rows() < v.v.cols()) {
    throw NotIsometry("mixing: fewer rows than columns");
  }
  if (isometry_error(v) > tol) {
    throw NotIsometry("mixing: columns are not orthonormal");
  }
}

KrausSet kraus_from_ensemble(const Ensemble& e) {
  validate_ensemble(e);
  const double m = static_cast<double>(e.dim_a);
  KrausSet k{e.dim_a, e.dim_b, {}};
  k.ops.reserve(e.terms.size());
  for (const EnsembleTerm& term : e.terms) {
    const double scale = std::sqrt(m * term.p);
    CMatrix op(e.dim_b, e.dim_a);
    for (std::size_t i = 0; i < e.dim_a; ++i) {
      for (std::size_t j = 0; j < e.dim_b; ++j) {
        op(j, i) = scale * term.c(i, j);
      }
    }
    k.ops.push_back(std::move(op));
  }
  return k;
}

CMatrix apply_channel(const KrausSet& k, const CMatrix& sigma) {
  validate_kraus(k);
  if (sigma.rows() != k.dim_a || sigma.cols() != k.dim_a) {
    throw ShapeMismatch("apply_channel: input is not dim_a x dim_a");
  }
  CMatrix out = CMatrix::zero(k.dim_b, k.dim_b);
  for (const CMatrix& op : k.ops) {
    out += op * sigma * op.adjoint();
  }
  return out;
}

CMatrix apply_channel_from_state(const DensityMatrix& rho,
                                 const CMatrix& sigma) {
  if (sigma.rows() != rho.dim_a || sigma.cols() != rho.dim_a) {
    throw ShapeMismatch("apply_channel_from_state: input is not dim_a x dim_a");
  }
  const CMatrix lifted =
      kron(sigma.transpose(), CMatrix::identity(rho.dim_b)) * rho.matrix;
  const CMatrix traced = partial_trace_a(lifted, rho.dim_a, rho.dim_b);
  return static_cast<double>(rho.dim_a) * traced;
}

DensityMatrix choi_reconstruct(const KrausSet& k) {
  validate_kraus(k);
  const std::size_t d = k.dim_a * k.dim_b;
  const double inv_m = 1.0 / static_cast<double>(k.dim_a);
  CMatrix rho = CMatrix::zero(d, d);
  for (const CMatrix& op : k.ops) {
    const std::vector<Complex> vec = vectorize(op.transpose());
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        rho(r, c) += inv_m * vec[r] * std::conj(vec[c]);
      }
    }
  }
  return DensityMatrix{k.dim_a, k.dim_b, rho};
}

KrausSet transform(const KrausSet& k, const MixingMatrix& v) {
  validate_kraus(k);
  if (v.v.cols() != k.ops.size()) {
    throw ShapeMismatch("transform: column count differs from operator count");
  }
  validate_mixing(v);
  KrausSet out{k.dim_a, k.dim_b, {}};
  out.ops.reserve(v.v.rows());
  for (std::size_t mu = 0; mu < v.v.rows(); ++mu) {
    CMatrix acc = CMatrix::zero(k.dim_b, k.dim_a);
    for (std::size_t a = 0; a < k.ops.size(); ++a) {
      acc += v.v(mu, a) * k.ops[a];
    }
    out.ops.push_back(std::move(acc));
  }
  return out;
}

std::vector<TermReduction> term_reductions(const KrausSet& k) {
  validate_kraus(k);
  const double m = static_cast<double>(k.dim_a);
  std::vector<TermReduction> out;
  out.reserve(k.ops.size());
  for (const CMatrix& op : k.ops) {
    const CMatrix gram = op.adjoint() * op;
    TermReduction t;
    t.p = std::real(gram.trace()) / m;
    if (t.p > 0.0) {
      const double scale = 1.0 / (m * t.p);
      t.rho_a = scale * gram.transpose();
      t.rho_b = scale * (op * op.adjoint());
    } else {
      t.rho_a = CMatrix::zero(k.dim_a, k.dim_a);
      t.rho_b = CMatrix::zero(k.dim_b, k.dim_b);
    }
    out.push_back(std::move(t));
  }
  return out;
}

ChannelFlags channel_properties(const KrausSet& k) {
  validate_kraus(k);
  const double m = static_cast<double>(k.dim_a);
  const double n = static_cast<double>(k.dim_b);
  CMatrix sum_in = CMatrix::zero(k.dim_a, k.dim_a);
  CMatrix sum_out = CMatrix::zero(k.dim_b, k.dim_b);
  for (const CMatrix& op : k.ops) {
    sum_in += op.adjoint() * op;
    sum_out += op * op.adjoint();
  }
  const double r_in_op = (sum_in - CMatrix::identity(k.dim_a)).frobenius_norm();
  const double r_in_red =
      ((1.0 / m) * sum_in.transpose() - (1.0 / m) * CMatrix::identity(k.dim_a))
          .frobenius_norm();
  const double r_out_op =
      (sum_out - (m / n) * CMatrix::identity(k.dim_b)).frobenius_norm();
  const double r_out_red =
      ((1.0 / m) * sum_out - (1.0 / n) * CMatrix::identity(k.dim_b))
          .frobenius_norm();
  if (std::abs(r_in_op - m * r_in_red) > 1e-10 * (1.0 + r_in_op) ||
      std::abs(r_out_op - m * r_out_red) > 1e-10 * (1.0 + r_out_op)) {
    throw InternalInconsistency(
        "channel_properties: operator-sum and reduced-state residuals differ");
  }
  ChannelFlags flags;
  flags.trace_preserving = r_in_op <= 1e-9 && r_in_red <= 1e-9;
  flags.unital = r_out_op <= 1e-9 && r_out_red <= 1e-9;
  return flags;
}

MixingMatrix recover_mixing(const KrausSet& source, const KrausSet& target) {
  validate_kraus(source);
  validate_kraus(target);
  if (source.dim_a != target.dim_a || source.dim_b != target.dim_b) {
    throw ShapeMismatch("recover_mixing: dimension mismatch");
  }
  const double m = static_cast<double>(source.dim_a);
  const std::size_t d = source.ops.size();
  std::vector<double> p(d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      const Complex g = hs_inner(source.ops[a], source.ops[b]);
      if (a == b) {
        p[a] = std::real(g) / m;
      } else if (std::abs(g) > 1e-8) {
        throw DomainError("recover_mixing: source operators are not orthogonal");
      }
    }
    if (p[a] <= 1e-12) {
      throw DomainError("recover_mixing: source operator with zero weight");
    }
  }
  const DensityMatrix rho_s = choi_reconstruct(source);
  const DensityMatrix rho_t = choi_reconstruct(target);
  if (max_abs_diff(rho_s.matrix, rho_t.matrix) > 1e-8) {
    throw NotSameState("recover_mixing: operator sets describe different states");
  }
  CMatrix v(target.ops.size(), d);
  for (std::size_t mu = 0; mu < target.ops.size(); ++mu) {
    for (std::size_t a = 0; a < d; ++a) {
      v(mu, a) = hs_inner(source.ops[a], target.ops[mu]) / (m * p[a]);
    }
  }
  return MixingMatrix{v};
}

}  // namespace sepscope
