#pragma once

#include <cstddef>
#include <optional>

#include "sepscope/decomposition.hpp"
#include "sepscope/duality.hpp"
#include "sepscope/linalg.hpp"
#include "sepscope/states.hpp"

namespace sepscope {

// Factorization rho = G G^dag with one column per ensemble term: column a is
// sqrt(p_a) times the vectorized coefficient matrix of term a.
struct GramFactor {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  CMatrix matrix;
};

struct RankData {
  std::size_t rank_ab = 0;
  std::size_t rank_a = 0;
  std::size_t rank_b = 0;
  bool inequality_holds = false;
};

GramFactor gram_from_ensemble(const Ensemble& e);

// Columns with weight below 1e-15 (for example padding) are dropped.
Ensemble gram_to_ensemble(const GramFactor& g);

// Right-multiplies the factor by v^T so that new column mu combines source
// columns with the weights V_{mu a}.  When v has more columns than the factor
// and zero_pad is set, the factor is treated as padded with zero columns.
GramFactor apply_mixing_to_gram(const GramFactor& g, const MixingMatrix& v,
                                bool zero_pad = true);

// Certifies separability when every column vectorizes a rank-one matrix; the
// returned terms are the projector pairs of the induced product ensemble.
std::optional<SeparableDecomposition> separability_certificate_from_gram(
    const GramFactor& g);

// rank(rho) >= max(rank(rho_A), rank(rho_B)) holds for every separable state,
// so a violation witnesses entanglement.
RankData rank_theorem_data(const DensityMatrix& rho);

}  // namespace sepscope
