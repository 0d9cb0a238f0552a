#include "sepscope/factorize.hpp"

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "sepscope/errors.hpp"

namespace sepscope {

namespace {

CMatrix column_outer(const std::vector<Complex>& x) {
  CMatrix out(x.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      out(i, j) = x[i] * std::conj(x[j]);
    }
  }
  return out;
}

}  // namespace

GramFactor gram_from_ensemble(const Ensemble& e) {
  validate_ensemble(e);
  const std::size_t mn = e.dim_a * e.dim_b;
  CMatrix g(mn, e.terms.size());
  for (std::size_t a = 0; a < e.terms.size(); ++a) {
    const double scale = std::sqrt(e.terms[a].p);
    const std::vector<Complex> col = vectorize(e.terms[a].c);
    for (std::size_t r = 0; r < mn; ++r) {
      g(r, a) = scale * col[r];
    }
  }
  return GramFactor{e.dim_a, e.dim_b, std::move(g)};
}

Ensemble gram_to_ensemble(const GramFactor& g) {
  Ensemble e{g.dim_a, g.dim_b, {}};
  const std::size_t mn = g.dim_a * g.dim_b;
  if (g.matrix.rows() != mn) {
    throw ShapeMismatch("gram_to_ensemble: row count is not dim_a*dim_b");
  }
  for (std::size_t a = 0; a < g.matrix.cols(); ++a) {
    double weight = 0.0;
    for (std::size_t r = 0; r < mn; ++r) {
      weight += std::norm(g.matrix(r, a));
    }
    if (weight <= 1e-15) {
      continue;
    }
    const double inv = 1.0 / std::sqrt(weight);
    std::vector<Complex> col(mn);
    for (std::size_t r = 0; r < mn; ++r) {
      col[r] = inv * g.matrix(r, a);
    }
    e.terms.push_back(EnsembleTerm{weight, matricize(col, g.dim_a, g.dim_b)});
  }
  return e;
}

GramFactor apply_mixing_to_gram(const GramFactor& g, const MixingMatrix& v,
                                bool zero_pad) {
  validate_mixing(v);
  const std::size_t d = g.matrix.cols();
  const std::size_t sources = v.v.cols();
  if (sources != d && !(zero_pad && sources > d)) {
    throw ShapeMismatch("apply_mixing_to_gram: incompatible mixing width");
  }
  const std::size_t mn = g.matrix.rows();
  CMatrix mixed(mn, v.v.rows());
  for (std::size_t mu = 0; mu < v.v.rows(); ++mu) {
    for (std::size_t r = 0; r < mn; ++r) {
      Complex acc = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        acc += v.v(mu, a) * g.matrix(r, a);
      }
      mixed(r, mu) = acc;
    }
  }
  return GramFactor{g.dim_a, g.dim_b, std::move(mixed)};
}

std::optional<SeparableDecomposition> separability_certificate_from_gram(
    const GramFactor& g) {
  const Ensemble e = gram_to_ensemble(g);
  SeparableDecomposition dec;
  dec.terms.reserve(e.terms.size());
  for (const EnsembleTerm& term : e.terms) {
    if (numeric_rank(term.c) != 1) {
      return std::nullopt;
    }
    const Svd s = svd(term.c);
    std::vector<Complex> xi(g.dim_a), eta_conj(g.dim_b);
    for (std::size_t i = 0; i < g.dim_a; ++i) {
      xi[i] = s.left(i, 0);
    }
    for (std::size_t j = 0; j < g.dim_b; ++j) {
      eta_conj[j] = std::conj(s.right(j, 0));
    }
    dec.terms.push_back(
        SeparableTerm{term.p, column_outer(xi), column_outer(eta_conj)});
  }
  return dec;
}

RankData rank_theorem_data(const DensityMatrix& rho) {
  validate_state(rho);
  RankData data;
  data.rank_ab = numeric_rank(rho.matrix);
  data.rank_a = numeric_rank(partial_trace_b(rho.matrix, rho.dim_a, rho.dim_b));
  data.rank_b = numeric_rank(partial_trace_a(rho.matrix, rho.dim_a, rho.dim_b));
  data.inequality_holds =
      data.rank_ab >= data.rank_a && data.rank_ab >= data.rank_b;
  return data;
}

}  // namespace sepscope
