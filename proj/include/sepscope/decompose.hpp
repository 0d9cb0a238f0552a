#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sepscope/decomposition.hpp"
#include "sepscope/duality.hpp"
#include "sepscope/linalg.hpp"
#include "sepscope/states.hpp"

namespace sepscope {

// Unitary 4x4 mixing matrix that sends the spectral ensemble of the two-qubit
// isotropic state to four rank-one operators. Defined for fidelity in
// [1/4, 1/2]; throws DomainError outside.
MixingMatrix isotropic_mixing_matrix(double fidelity);

// Closed-form four-term product decomposition of the two-qubit isotropic
// state, valid on the same fidelity window. Every term carries weight 1/4.
SeparableDecomposition isotropic_decomposition(double fidelity);

// Fixed two-term product decomposition of the equal-weight Bell mixture
// ("bell-mixture" at p = 1/2).
SeparableDecomposition bell_mixture_decomposition();

struct VerificationReport {
  bool pass = false;
  double tol = 0.0;
  double reconstruction_error = 0.0;   // max-abs entry deviation
  double weight_sum_error = 0.0;       // |sum q - 1|
  double max_second_eigenvalue = 0.0;  // worst rank-one violation over factors
  double max_trace_error = 0.0;        // worst |Tr factor - 1|
  double min_factor_eigenvalue = 0.0;  // most negative factor eigenvalue
  double min_weight = 0.0;
};

// Independent checker for any product decomposition: reconstruction within
// tol, unit-rank unit-trace PSD factors, normalized weights.
VerificationReport verify_decomposition(const DensityMatrix& rho,
                                        const SeparableDecomposition& dec,
                                        double tol = 1e-8);

struct SearchOptions {
  std::size_t target_terms = 0;  // 0: max(ensemble size, dim_a * dim_b)
  std::size_t restarts = 64;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::size_t max_iterations = 1500;
  std::size_t threads = 0;  // 0: SEPSCOPE_THREADS, else hardware default
};

struct SearchResult {
  bool found = false;
  double residual = 0.0;  // best objective value over all restarts
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
  MixingMatrix v;  // isometry reaching the best objective
  SeparableDecomposition decomposition;  // populated only when found
  VerificationReport verification;       // populated only when found
};

// Minimizes the summed squared trailing singular values of the mixed operator
// set over column isometries with target_terms rows. An objective below tol
// certifies separability; the assembled decomposition is verified before it
// is returned. A miss reports the best residual and carries no conclusion.
SearchResult rank_one_search(const DensityMatrix& rho,
                             const SearchOptions& options = {});

// Determinant of one 2x2 minor of sum_a v_a M_a as a homogeneous quadratic in
// the row variables v_1..v_d: coeff(a, b) with a <= b multiplies v_a v_b.
struct MinorPolynomial {
  std::size_t row_a = 0;
  std::size_t row_b = 0;
  std::size_t col_a = 0;
  std::size_t col_b = 0;
  CMatrix coeff;
};

Complex evaluate(const MinorPolynomial& poly, const std::vector<Complex>& v);

struct MinorSystem {
  std::size_t variable_count = 0;
  std::vector<MinorPolynomial> polynomials;
  std::string row_note;
  std::string scale_note;
};

// Emits every 2x2 minor determinant of the symbolic combination sum_a v_a M_a.
// A mixing row kills the whole system exactly when its combination has unit
// rank.
MinorSystem minor_system(const KrausSet& kraus);

struct CertificateStep {
  std::string claim;        // polynomial derived by this step
  std::string combination;  // how the step combines earlier equations
  bool zero_residual = false;
  std::string residual;
};

struct EntanglementCertificate {
  std::vector<CertificateStep> steps;
  std::size_t cross_check_points = 0;
  double cross_check_deviation = 0.0;
  bool passed = false;
  std::string conclusion;
};

// Exact-arithmetic elimination over the minor system of the tiles state: the
// system forces every mixing row to vanish, which contradicts column
// normalization, so the state has no product decomposition. Throws
// CertificateFailure if any recorded identity fails to cancel.
EntanglementCertificate upb_entanglement_certificate();

}  // namespace sepscope
