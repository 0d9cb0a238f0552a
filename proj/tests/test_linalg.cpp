#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "sepscope/errors.hpp"
#include "sepscope/linalg.hpp"
#include "sepscope/random.hpp"

using namespace sepscope;

namespace {

CMatrix from_rows(std::size_t rows, std::size_t cols,
                  std::initializer_list<Complex> entries) {
  CMatrix m(rows, cols);
  std::copy(entries.begin(), entries.end(), m.data().begin());
  return m;
}

CMatrix reconstruct_from_spectrum(const Spectrum& s) {
  const std::size_t n = s.eigenvalues.size();
  CMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = s.eigenvalues[i];
  return s.eigenvectors * d * s.eigenvectors.adjoint();
}

CMatrix reconstruct_from_svd(const Svd& s, std::size_t rows, std::size_t cols) {
  CMatrix d(rows, cols);
  for (std::size_t i = 0; i < s.singular_values.size(); ++i)
    d(i, i) = s.singular_values[i];
  return s.left * d * s.right.adjoint();
}

double orthonormality_error(const CMatrix& u) {
  return max_abs_diff(u.adjoint() * u, CMatrix::identity(u.cols()));
}

// Reference singular values through the normal-equation route; accurate to
// about 1e-8 in absolute terms, used only as an independent cross-check.
std::vector<double> singular_values_via_gram(const CMatrix& a) {
  const Spectrum s = hermitian_eig(a.adjoint() * a);
  std::vector<double> out;
  for (double ev : s.eigenvalues) out.push_back(std::sqrt(std::max(0.0, ev)));
  return out;
}

}  // namespace

TEST_CASE("matrix basics") {
  CMatrix a = from_rows(2, 2, {1.0, 2.0, 3.0, 4.0});
  CHECK(a.trace() == Complex(5.0));
  CHECK(a.transpose()(0, 1) == Complex(3.0));
  CMatrix b = from_rows(2, 2, {Complex(0, 1), 0.0, 0.0, Complex(0, -1)});
  CHECK(b.adjoint()(0, 0) == Complex(0, -1));
  CHECK(max_abs_diff(a * CMatrix::identity(2), a) == 0.0);
  CHECK_THROWS_AS(a + CMatrix::identity(3), ShapeMismatch);
  CHECK_THROWS_AS(from_rows(1, 2, {1.0, 2.0}).trace(), ShapeMismatch);
}

TEST_CASE("kron ordering") {
  CMatrix a = from_rows(2, 2, {1.0, 0.0, 0.0, 2.0});
  CMatrix b = from_rows(2, 2, {0.0, 1.0, 1.0, 0.0});
  CMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == Complex(1.0));
  CHECK(k(2, 3) == Complex(2.0));
  CHECK(k(0, 3) == Complex(0.0));
}

TEST_CASE("hermitian_eig on known spectra") {
  SUBCASE("identity") {
    const Spectrum s = hermitian_eig(CMatrix::identity(2));
    CHECK(s.eigenvalues == std::vector<double>{1.0, 1.0});
  }
  SUBCASE("diagonal is sorted") {
    CMatrix d = from_rows(2, 2, {0.25, 0.0, 0.0, 0.75});
    const Spectrum s = hermitian_eig(d);
    CHECK(s.eigenvalues[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("schmidt weights of a two-term superposition") {
    // reduction of sqrt(2/3)|00> + sqrt(1/3)|11>
    CMatrix r = from_rows(2, 2, {2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0});
    const Spectrum s = hermitian_eig(r);
    CHECK(s.eigenvalues[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("complex off-diagonal") {
    CMatrix h = from_rows(2, 2, {1.0, Complex(0, -0.5), Complex(0, 0.5), 1.0});
    const Spectrum s = hermitian_eig(h);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(max_abs_diff(reconstruct_from_spectrum(s), h) < 1e-12);
  }
  SUBCASE("rejects non-hermitian input") {
    CHECK_THROWS_AS(hermitian_eig(from_rows(2, 2, {0.0, 1.0, 0.0, 0.0})),
                    NotHermitian);
  }
}

TEST_CASE("hermitian_eig reconstruction and orthonormality on random input") {
  Rng rng(12345);
  for (std::size_t n : {2, 3, 5, 9, 16, 25}) {
    for (int rep = 0; rep < 5; ++rep) {
      const CMatrix h = random_hermitian(n, rng);
      const Spectrum s = hermitian_eig(h);
      CHECK(max_abs_diff(reconstruct_from_spectrum(s), h) < 1e-10);
      CHECK(orthonormality_error(s.eigenvectors) < 1e-12);
      CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    }
  }
}

TEST_CASE("eigenvector phase convention is canonical") {
  Rng rng(77);
  const CMatrix h = random_hermitian(4, rng);
  const Spectrum s = hermitian_eig(h);
  for (std::size_t j = 0; j < 4; ++j) {
    double best = -1.0;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (std::abs(s.eigenvectors(i, j)) > best) {
        best = std::abs(s.eigenvectors(i, j));
        imax = i;
      }
    }
    CHECK(std::imag(s.eigenvectors(imax, j)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::real(s.eigenvectors(imax, j)) > 0.0);
  }
}

TEST_CASE("svd on known inputs") {
  SUBCASE("zero matrix") {
    const Svd s = svd(CMatrix::zero(2, 3));
    CHECK(s.singular_values == std::vector<double>{0.0, 0.0});
    CHECK(orthonormality_error(s.left) < 1e-14);
    CHECK(orthonormality_error(s.right) < 1e-14);
  }
  SUBCASE("unitary input has unit singular values") {
    const double inv = 1.0 / std::sqrt(2.0);
    CMatrix u = from_rows(2, 2, {inv, inv, inv, -inv});
    const Svd s = svd(u);
    CHECK(s.singular_values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.singular_values[1] == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("scaled flip matrix") {
    // expected values frozen from the normal-equation oracle: both sqrt(1/2)
    const double v = std::sqrt(0.5);
    CMatrix m = from_rows(2, 2, {0.0, v, v, 0.0});
    const Svd s = svd(m);
    const std::vector<double> oracle = singular_values_via_gram(m);
    CHECK(s.singular_values[0] == doctest::Approx(v).epsilon(1e-13));
    CHECK(s.singular_values[1] == doctest::Approx(v).epsilon(1e-13));
    CHECK(s.singular_values[0] == doctest::Approx(oracle[0]).epsilon(1e-10));
  }
  SUBCASE("rank-one column scale") {
    CMatrix m = from_rows(2, 2, {3.0, 6.0, 4.0, 8.0});
    const Svd s = svd(m);
    CHECK(s.singular_values[0] == doctest::Approx(std::sqrt(125.0)).epsilon(1e-13));
    CHECK(s.singular_values[1] < 1e-12);
    CHECK(max_abs_diff(reconstruct_from_svd(s, 2, 2), m) < 1e-12);
  }
}

TEST_CASE("svd on random rectangular input") {
  Rng rng(999);
  const std::size_t shapes[][2] = {{2, 2}, {3, 2}, {2, 3}, {5, 4}, {4, 9}, {9, 9}};
  for (const auto& sh : shapes) {
    for (int rep = 0; rep < 5; ++rep) {
      const CMatrix a = random_matrix(sh[0], sh[1], rng);
      const Svd s = svd(a);
      CHECK(s.singular_values.size() == std::min(sh[0], sh[1]));
      CHECK(std::is_sorted(s.singular_values.rbegin(), s.singular_values.rend()));
      CHECK(max_abs_diff(reconstruct_from_svd(s, sh[0], sh[1]), a) < 1e-10);
      CHECK(orthonormality_error(s.left) < 1e-10);
      CHECK(orthonormality_error(s.right) < 1e-10);
      const std::vector<double> oracle = singular_values_via_gram(a);
      for (std::size_t i = 0; i < s.singular_values.size(); ++i)
        CHECK(s.singular_values[i] == doctest::Approx(oracle[i]).epsilon(1e-7));
    }
  }
}

TEST_CASE("svd keeps tiny singular values of near-rank-one input accurate") {
  Rng rng(5150);
  for (int rep = 0; rep < 20; ++rep) {
    CMatrix u = random_matrix(3, 1, rng);
    CMatrix v = random_matrix(3, 1, rng);
    CMatrix m = u * v.adjoint();
    const Svd s = svd(m);
    CHECK(s.singular_values[1] < 1e-12 * s.singular_values[0]);
  }
}

TEST_CASE("singular value inequalities on random pairs") {
  Rng rng(31337);
  int trace_cases = 0;
  for (int rep = 0; rep < 120; ++rep) {
    const std::size_t rows = 2 + rep % 3;
    const std::size_t cols = 2 + (rep / 3) % 3;
    const CMatrix a = random_matrix(rows, cols, rng);
    const CMatrix b = random_matrix(rows, cols, rng);
    const std::vector<double> sa = svd(a).singular_values;
    const std::vector<double> sb = svd(b).singular_values;
    const std::vector<double> sab = svd(a + b).singular_values;
    const std::size_t q = sa.size();

    // |Tr{A^dagger B}| bounded by the singular value overlap
    double overlap = 0.0;
    for (std::size_t i = 0; i < q; ++i) overlap += sa[i] * sb[i];
    CHECK(std::abs(hs_inner(a, b)) <= overlap + 1e-8);
    ++trace_cases;

    // perturbation bound: l2 distance of spectra vs Frobenius distance
    double dist = 0.0;
    for (std::size_t i = 0; i < q; ++i)
      dist += (sa[i] - sb[i]) * (sa[i] - sb[i]);
    CHECK(std::sqrt(dist) <= (a - b).frobenius_norm() + 1e-8);

    // additive bounds
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = 0; j < q; ++j) {
        if (i + j >= q) continue;
        CHECK(sab[i + j] <= sa[i] + sb[j] + 1e-8);
      }
      CHECK(sab[i] >= sa[i] - sb[0] - 1e-8);
    }
  }
  CHECK(trace_cases >= 100);
}

TEST_CASE("hs_inner") {
  CHECK(hs_inner(CMatrix::identity(2), CMatrix::identity(2)) == Complex(2.0));
  CMatrix flip = from_rows(2, 2, {0.0, 1.0, 1.0, 0.0});
  CMatrix zdiag = from_rows(2, 2, {1.0, 0.0, 0.0, -1.0});
  CHECK(std::abs(hs_inner(flip, zdiag)) == 0.0);
  CHECK_THROWS_AS(hs_inner(flip, CMatrix::identity(3)), ShapeMismatch);
}

TEST_CASE("vectorize and matricize") {
  CMatrix a = from_rows(2, 2, {1.0, 2.0, 3.0, 4.0});
  const std::vector<Complex> v = vectorize(a);
  CHECK(v == std::vector<Complex>{1.0, 2.0, 3.0, 4.0});
  CHECK(max_abs_diff(matricize(v, 2, 2), a) == 0.0);
  Rng rng(4242);
  const CMatrix b = random_matrix(3, 4, rng);
  CHECK(max_abs_diff(matricize(vectorize(b), 3, 4), b) == 0.0);
  CHECK_THROWS_AS(matricize(v, 3, 2), LengthMismatch);
}

TEST_CASE("numeric_rank") {
  CMatrix e00 = from_rows(2, 2, {1.0, 0.0, 0.0, 0.0});
  CHECK(numeric_rank(e00) == 1);
  CHECK(numeric_rank(CMatrix::identity(3)) == 3);
  CHECK(numeric_rank(CMatrix::zero(3, 3)) == 0);
  CHECK_THROWS_AS(numeric_rank(e00, 0.0), DomainError);
  CHECK_THROWS_AS(numeric_rank(e00, 1.5), DomainError);

  // isotropic-style 4x4 with eigenvalues {0.4, 0.2, 0.2, 0.2}: full rank
  Rng rng(31);
  const CMatrix u = random_isometry(4, 4, rng);
  CMatrix d(4, 4);
  d(0, 0) = 0.4;
  d(1, 1) = 0.2;
  d(2, 2) = 0.2;
  d(3, 3) = 0.2;
  CHECK(numeric_rank(u * d * u.adjoint()) == 4);
}

TEST_CASE("rng determinism") {
  Rng a(2024), b(2024);
  for (int i = 0; i < 100; ++i) CHECK(a.gaussian() == b.gaussian());
  Rng c(1), d(2);
  bool differ = false;
  for (int i = 0; i < 10; ++i)
    if (c.gaussian() != d.gaussian()) differ = true;
  CHECK(differ);
}
