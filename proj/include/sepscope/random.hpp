#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "sepscope/linalg.hpp"

namespace sepscope {

// Seeded random source. Gaussian draws go through an explicit Box-Muller step
// so that a fixed seed reproduces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    // 53 uniformly distributed mantissa bits in [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  Complex complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
  }

  std::uint64_t integer() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
  return m;
}

inline CMatrix random_hermitian(std::size_t n, Rng& rng) {
  CMatrix g = random_matrix(n, n, rng);
  CMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = Complex(std::real(g(i, i)), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (g(i, j) + std::conj(g(j, i)));
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

// Column isometry from Gram-Schmidt on a Gaussian draw; rows >= cols.
inline CMatrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix q(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<Complex> v(rows);
    double nrm = 0.0;
    while (true) {
      for (std::size_t i = 0; i < rows; ++i) v[i] = rng.complex_gaussian();
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < j; ++k) {
          Complex ip = 0.0;
          for (std::size_t i = 0; i < rows; ++i) ip += std::conj(q(i, k)) * v[i];
          for (std::size_t i = 0; i < rows; ++i) v[i] -= ip * q(i, k);
        }
      }
      nrm = 0.0;
      for (const Complex& z : v) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > 1e-6) break;
    }
    for (std::size_t i = 0; i < rows; ++i) q(i, j) = v[i] / nrm;
  }
  return q;
}

}  // namespace sepscope
