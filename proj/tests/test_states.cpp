#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "sepscope/errors.hpp"
#include "sepscope/random.hpp"
#include "sepscope/states.hpp"

using namespace sepscope;

namespace {

CMatrix projector(const std::vector<Complex>& v) {
  CMatrix p(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      p(i, j) = v[i] * std::conj(v[j]);
  return p;
}

// independent construction of the two-Bell mixture used across the suite
CMatrix bell_mixture_oracle(double p) {
  const double inv = 1.0 / std::sqrt(2.0);
  CMatrix rho = projector({0.0, inv, inv, 0.0});
  rho *= p;
  CMatrix second = projector({inv, 0.0, 0.0, -inv});
  second *= (1.0 - p);
  return rho + second;
}

double min_eigenvalue(const CMatrix& h) {
  return hermitian_eig(h).eigenvalues.back();
}

}  // namespace

TEST_CASE("validate_state accepts states and names violations") {
  const double inv = 1.0 / std::sqrt(2.0);
  DensityMatrix bell{2, 2, projector({inv, 0.0, 0.0, inv})};
  CHECK_NOTHROW(validate_state(bell));

  DensityMatrix bad_trace = bell;
  bad_trace.matrix *= 2.0;
  CHECK_THROWS_WITH_AS(validate_state(bad_trace), doctest::Contains("TraceNotOne"),
                       NotAState);

  DensityMatrix bad_herm = bell;
  bad_herm.matrix(0, 1) = 0.5;
  CHECK_THROWS_WITH_AS(validate_state(bad_herm), doctest::Contains("NotHermitian"),
                       NotAState);

  DensityMatrix bad_psd{2, 2, CMatrix::identity(4)};
  bad_psd.matrix(0, 0) = -0.5;
  bad_psd.matrix(1, 1) = 1.5;
  bad_psd.matrix(2, 2) = 1.5;
  bad_psd.matrix(3, 3) = 1.5;
  bad_psd.matrix *= 0.25;
  CHECK_THROWS_WITH_AS(validate_state(bad_psd), doctest::Contains("NotPSD"),
                       NotAState);

  DensityMatrix bad_shape{2, 3, CMatrix::identity(4)};
  CHECK_THROWS_AS(validate_state(bad_shape), NotAState);
}

TEST_CASE("to_density matches the explicit mixture") {
  for (double p : {0.0, 0.3, 0.5, 1.0}) {
    const NamedState s = named_state("bell-mixture", p);
    CHECK(max_abs_diff(s.state.matrix, bell_mixture_oracle(p)) < 1e-15);
  }
}

TEST_CASE("partial traces and transpose") {
  const NamedState s = named_state("psi-plus-zero", 0.5);
  const CMatrix red_a = partial_trace_b(s.state.matrix, 2, 2);
  CHECK(std::real(red_a(0, 0)) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(std::real(red_a(1, 1)) == doctest::Approx(0.25).epsilon(1e-14));
  const CMatrix red_b = partial_trace_a(s.state.matrix, 2, 2);
  CHECK(std::real(red_b.trace()) == doctest::Approx(1.0).epsilon(1e-14));

  const CMatrix pt = partial_transpose_b(s.state.matrix, 2, 2);
  CHECK(pt.is_hermitian(1e-14));
  CHECK(max_abs_diff(partial_transpose_b(pt, 2, 2), s.state.matrix) == 0.0);
}

TEST_CASE("spectral_ensemble basics") {
  SUBCASE("maximally mixed state splits into four equal terms") {
    DensityMatrix mm{2, 2, CMatrix::identity(4)};
    mm.matrix *= 0.25;
    const Ensemble e = spectral_ensemble(mm);
    REQUIRE(e.terms.size() == 4);
    for (const auto& t : e.terms) CHECK(t.p == doctest::Approx(0.25).epsilon(1e-14));
    // orthonormality of the spectral coefficient matrices
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        const double expect = a == b ? 1.0 : 0.0;
        CHECK(std::abs(hs_inner(e.terms[a].c, e.terms[b].c) - Complex(expect)) <
              1e-9);
      }
  }
  SUBCASE("pure product state gives one term") {
    DensityMatrix pure{2, 2, projector({1.0, 0.0, 0.0, 0.0})};
    const Ensemble e = spectral_ensemble(pure);
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms[0].p == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(e.terms[0].c(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("isotropic spectrum") {
    const IsotropicState iso = isotropic_from_fidelity(2, 0.7);
    const Ensemble e = spectral_ensemble(iso.state);
    REQUIRE(e.terms.size() == 4);
    CHECK(e.terms[0].p == doctest::Approx(0.7).epsilon(1e-12));
    for (int k = 1; k < 4; ++k)
      CHECK(e.terms[k].p == doctest::Approx(0.1).epsilon(1e-10));
    // leading eigvector is the maximally entangled one
    const double inv = 1.0 / std::sqrt(2.0);
    Complex overlap = 0.0;
    const CMatrix& c = e.terms[0].c;
    overlap = inv * (c(0, 0) + c(1, 1));
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("round trip") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const DensityMatrix rho = random_density(2, 3, 4, seed);
      const Ensemble e = spectral_ensemble(rho);
      CHECK(max_abs_diff(to_density(e).matrix, rho.matrix) < 1e-11);
      double total = 0.0;
      for (const auto& t : e.terms) total += t.p;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-11));
    }
  }
  SUBCASE("rejects invalid input") {
    DensityMatrix bad{2, 2, CMatrix::identity(4)};
    CHECK_THROWS_AS(spectral_ensemble(bad), NotAState);
  }
}

TEST_CASE("isotropic family") {
  SUBCASE("alpha = 1 is the maximally entangled projector") {
    const IsotropicState iso = isotropic(2, 1.0);
    CHECK(iso.fidelity == doctest::Approx(1.0));
    const double inv = 1.0 / std::sqrt(2.0);
    CHECK(max_abs_diff(iso.state.matrix, projector({inv, 0.0, 0.0, inv})) <
          1e-15);
    CHECK(iso.ensemble.terms.size() == 1);
  }
  SUBCASE("alpha = 0 is maximally mixed and the basis resolves identity") {
    for (std::size_t d : {2, 3, 4}) {
      const IsotropicState iso = isotropic(d, 0.0);
      CMatrix expected = CMatrix::identity(d * d);
      expected *= 1.0 / static_cast<double>(d * d);
      CHECK(max_abs_diff(iso.state.matrix, expected) < 1e-15);
      CHECK(iso.ensemble.terms.size() == d * d);
      // sum of the d^2 basis projectors equals the identity
      CHECK(max_abs_diff(to_density(iso.ensemble).matrix, expected) < 1e-12);
    }
  }
  SUBCASE("fidelity relation and threshold point") {
    const IsotropicState iso = isotropic(3, 0.25);
    CHECK(iso.fidelity == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const IsotropicState back = isotropic_from_fidelity(3, iso.fidelity);
    CHECK(back.alpha == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("ensemble matches the matrix for generic parameters") {
    for (double f : {0.25, 0.4, 0.62, 0.97}) {
      const IsotropicState iso = isotropic_from_fidelity(2, f);
      CHECK(max_abs_diff(to_density(iso.ensemble).matrix, iso.state.matrix) <
            1e-12);
      CHECK_NOTHROW(validate_ensemble(iso.ensemble));
      CHECK_NOTHROW(validate_state(iso.state));
    }
    const IsotropicState iso3 = isotropic_from_fidelity(3, 0.5);
    CHECK(max_abs_diff(to_density(iso3.ensemble).matrix, iso3.state.matrix) <
          1e-12);
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(isotropic(1, 0.5), DomainError);
    CHECK_THROWS_AS(isotropic(2, -0.1), DomainError);
    CHECK_THROWS_AS(isotropic(2, 1.1), DomainError);
    CHECK_THROWS_AS(isotropic_from_fidelity(2, 0.1), DomainError);
  }
}

TEST_CASE("named states") {
  SUBCASE("every named ensemble reproduces its matrix") {
    for (const auto& info : list_named_states()) {
      const NamedState s = named_state(info.name, 0.37);
      CHECK_NOTHROW(validate_state(s.state));
      CHECK_NOTHROW(validate_ensemble(s.ensemble));
      CHECK(max_abs_diff(to_density(s.ensemble).matrix, s.state.matrix) < 1e-12);
    }
  }
  SUBCASE("five-by-five dimensions and spectrum") {
    const NamedState s = named_state("five-by-five");
    CHECK(s.state.matrix.rows() == 25);
    const Ensemble e = spectral_ensemble(s.state);
    REQUIRE(e.terms.size() == 2);
    CHECK(e.terms[0].p == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(e.terms[1].p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("tiles state equals its rank-space ensemble") {
    const NamedState s = named_state("upb-tiles");
    CHECK(std::real(s.state.matrix.trace()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(numeric_rank(s.state.matrix) == 4);
    CHECK(min_eigenvalue(s.state.matrix) > -1e-12);
    // the two independent constructions agree entry by entry
    CHECK(max_abs_diff(to_density(s.ensemble).matrix, s.state.matrix) < 1e-12);
  }
  SUBCASE("unknown name and bad parameters") {
    CHECK_THROWS_AS(named_state("no-such-state"), UnknownState);
    CHECK_THROWS_AS(named_state("bell-mixture", 1.5), DomainError);
  }
}

TEST_CASE("random generators") {
  SUBCASE("random_density is a valid state of requested rank") {
    const DensityMatrix rho = random_density(2, 3, 3, 99);
    CHECK_NOTHROW(validate_state(rho));
    CHECK(numeric_rank(rho.matrix) == 3);
  }
  SUBCASE("random_separable reconstructs from its decomposition") {
    const RandomSeparable rs = random_separable(2, 3, 4, 7);
    CHECK_NOTHROW(validate_state(rs.state));
    CHECK(rs.decomposition.terms.size() == 4);
    CMatrix sum(6, 6);
    for (const auto& t : rs.decomposition.terms)
      sum += t.q * kron(t.a_factor, t.b_factor);
    CHECK(max_abs_diff(sum, rs.state.matrix) < 1e-14);
  }
  SUBCASE("same seed gives identical output") {
    const RandomSeparable a = random_separable(3, 3, 5, 4321);
    const RandomSeparable b = random_separable(3, 3, 5, 4321);
    CHECK(max_abs_diff(a.state.matrix, b.state.matrix) == 0.0);
  }
  SUBCASE("ensemble_from_decomposition rebuilds the state") {
    const RandomSeparable rs = random_separable(2, 2, 3, 31);
    const Ensemble e = ensemble_from_decomposition(rs.decomposition, 2, 2);
    CHECK(e.terms.size() == 3);
    CHECK(max_abs_diff(to_density(e).matrix, rs.state.matrix) < 1e-12);
  }
}
