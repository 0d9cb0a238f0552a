#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sepscope/decomposition.hpp"
#include "sepscope/linalg.hpp"

namespace sepscope {

// Bipartite density matrix on C^m (x) C^n with the product basis ordered as
// |i>_A |j>_B  <->  index i*n + j.
struct DensityMatrix {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  CMatrix matrix;
};

// Pure-state ensemble term: weight p and unit-Frobenius coefficient matrix c,
// c(i, j) = <ij|psi>.
struct EnsembleTerm {
  double p = 0.0;
  CMatrix c;
};

struct Ensemble {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<EnsembleTerm> terms;
};

// Throws NotAState naming the violated property (hermiticity, trace, positivity).
void validate_state(const DensityMatrix& rho);

// Throws DomainError when weights, normalization, or shapes are inconsistent.
void validate_ensemble(const Ensemble& ensemble);

DensityMatrix to_density(const Ensemble& ensemble);

CMatrix partial_trace_a(const CMatrix& rho, std::size_t m, std::size_t n);
CMatrix partial_trace_b(const CMatrix& rho, std::size_t m, std::size_t n);
CMatrix partial_transpose_b(const CMatrix& rho, std::size_t m, std::size_t n);

// Eigendecomposition restricted to eigenvalues above eig_tol, ordered by
// non-increasing weight with a lexicographic eigenvector tie-break.
Ensemble spectral_ensemble(const DensityMatrix& rho, double eig_tol = 1e-10);

struct IsotropicState {
  DensityMatrix state;
  Ensemble ensemble;  // maximally entangled basis terms
  double alpha = 0.0;
  double fidelity = 0.0;
};

IsotropicState isotropic(std::size_t d, double alpha);
IsotropicState isotropic_from_fidelity(std::size_t d, double fidelity);

struct NamedState {
  std::string name;
  DensityMatrix state;
  Ensemble ensemble;
  std::string description;
};

// Known example states: "bell-mixture", "psi-plus-zero", "psi-minus-zero",
// "five-by-five", "upb-tiles". The parameter p applies to the first three.
NamedState named_state(const std::string& name, double p = 0.5);

struct NamedStateInfo {
  std::string name;
  bool takes_p = false;
  std::string description;
};

std::vector<NamedStateInfo> list_named_states();

DensityMatrix random_density(std::size_t m, std::size_t n, std::size_t rank,
                             std::uint64_t seed);

struct RandomSeparable {
  DensityMatrix state;
  SeparableDecomposition decomposition;
};

RandomSeparable random_separable(std::size_t m, std::size_t n,
                                 std::size_t term_count, std::uint64_t seed);

// Pure-product ensemble matching a decomposition whose factors are (close to)
// rank one; term mu contributes c = xi w^T built from the leading eigenvectors.
Ensemble ensemble_from_decomposition(const SeparableDecomposition& dec,
                                     std::size_t m, std::size_t n);

}  // namespace sepscope
