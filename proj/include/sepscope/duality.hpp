#pragma once

#include <cstddef>
#include <vector>

#include "sepscope/linalg.hpp"
#include "sepscope/states.hpp"

namespace sepscope {

// Operator-sum representation of the completely positive map attached to a
// bipartite state.  Each op maps H_A (dimension dim_a) into H_B (dimension
// dim_b), so the matrices are dim_b x dim_a.  The set is normalized so that
// sum_a Tr{M_a^dag M_a} = dim_a.
struct KrausSet {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<CMatrix> ops;
};

// Column-orthonormal matrix connecting two operator sets for the same state:
// rows index target operators, columns index source operators.
struct MixingMatrix {
  CMatrix v;
};

// Per-operator data recovered from a Kraus set: ensemble weight and the two
// reduced states of the corresponding pure term.
struct TermReduction {
  double p = 0.0;
  CMatrix rho_a;
  CMatrix rho_b;
};

struct ChannelFlags {
  bool trace_preserving = false;
  bool unital = false;
};

void validate_kraus(const KrausSet& k);

// Frobenius deviation of V^dag V from the identity.
double isometry_error(const MixingMatrix& v);
void validate_mixing(const MixingMatrix& v, double tol = 1e-8);

// (M_a)_{ji} = sqrt(dim_a * p_a) c^(a)_{ij}.
KrausSet kraus_from_ensemble(const Ensemble& e);

// sum_a M_a sigma M_a^dag.
CMatrix apply_channel(const KrausSet& k, const CMatrix& sigma);

// Same map evaluated straight from the state: dim_a * Tr_A{(sigma^T x I) rho}.
CMatrix apply_channel_from_state(const DensityMatrix& rho, const CMatrix& sigma);

// Source state of the map: rho_{(i,j),(k,l)} = 1/m sum_a (M_a)_{ji}(M_a)*_{lk}.
DensityMatrix choi_reconstruct(const KrausSet& k);

// N_mu = sum_a V_{mu a} M_a; preserves the reconstructed state.
KrausSet transform(const KrausSet& k, const MixingMatrix& v);

// p_a = Tr{M_a^dag M_a}/m, rho_A^(a) = (M_a^dag M_a)^T/(m p_a),
// rho_B^(a) = M_a M_a^dag/(m p_a).  Zero-weight operators yield zero blocks.
std::vector<TermReduction> term_reductions(const KrausSet& k);

ChannelFlags channel_properties(const KrausSet& k);

// V_{mu a} = Tr{M_a^dag N_mu}/(m p_a); requires a source whose operators are
// pairwise orthogonal under the Hilbert-Schmidt inner product.
MixingMatrix recover_mixing(const KrausSet& source, const KrausSet& target);

}  // namespace sepscope
