#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>

#include "sepscope/errors.hpp"

namespace sepscope {

// Exact fraction of 64-bit integers. Intermediates widen to 128 bits; results
// that do not fit back into 64 bits throw instead of wrapping.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d);
};

namespace detail {

inline Rational reduce128(__int128 n, __int128 d) {
  if (d == 0) throw DomainError("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n;
  __int128 b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a != 0) {
    n /= a;
    d /= a;
  } else {
    d = 1;
  }
  constexpr __int128 lo = static_cast<__int128>(INT64_MIN);
  constexpr __int128 hi = static_cast<__int128>(INT64_MAX);
  if (n < lo || n > hi || d > hi) throw Error("rational: 64-bit overflow");
  Rational out;
  out.num = static_cast<long long>(n);
  out.den = static_cast<long long>(d);
  return out;
}

}  // namespace detail

inline Rational::Rational(long long n, long long d) {
  *this = detail::reduce128(n, d);
}

inline Rational operator+(const Rational& a, const Rational& b) {
  return detail::reduce128(
      static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
      static_cast<__int128>(a.den) * b.den);
}

inline Rational operator-(const Rational& a, const Rational& b) {
  return detail::reduce128(
      static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
      static_cast<__int128>(a.den) * b.den);
}

inline Rational operator-(const Rational& a) { return Rational(-a.num, a.den); }

inline Rational operator*(const Rational& a, const Rational& b) {
  return detail::reduce128(static_cast<__int128>(a.num) * b.num,
                           static_cast<__int128>(a.den) * b.den);
}

inline Rational operator/(const Rational& a, const Rational& b) {
  if (b.num == 0) throw DomainError("rational: division by zero");
  return detail::reduce128(static_cast<__int128>(a.num) * b.den,
                           static_cast<__int128>(a.den) * b.num);
}

inline bool operator==(const Rational& a, const Rational& b) {
  return a.num == b.num && a.den == b.den;
}

inline bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

inline bool is_zero(const Rational& a) { return a.num == 0; }

inline double to_double(const Rational& a) {
  return static_cast<double>(a.num) / static_cast<double>(a.den);
}

inline std::string to_string(const Rational& a) {
  if (a.den == 1) return std::to_string(a.num);
  return std::to_string(a.num) + "/" + std::to_string(a.den);
}

// Sparse polynomial in four variables V1..V4 with rational coefficients,
// keyed by the per-variable exponents. Enough for the degree-4 identities of
// the tiles-state elimination.
class RationalPolynomial {
 public:
  using Monomial = std::array<int, 4>;

  RationalPolynomial() = default;

  static RationalPolynomial term(const Rational& coeff, const Monomial& exps) {
    RationalPolynomial out;
    if (!sepscope::is_zero(coeff)) out.terms_[exps] = coeff;
    return out;
  }

  static RationalPolynomial variable(int index) {
    Monomial m = {0, 0, 0, 0};
    m[static_cast<std::size_t>(index)] = 1;
    return term(Rational(1), m);
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  RationalPolynomial& operator+=(const RationalPolynomial& other) {
    for (const auto& [mono, coeff] : other.terms_) {
      auto it = terms_.find(mono);
      if (it == terms_.end()) {
        terms_[mono] = coeff;
      } else {
        it->second = it->second + coeff;
        if (sepscope::is_zero(it->second)) terms_.erase(it);
      }
    }
    return *this;
  }

  RationalPolynomial& operator-=(const RationalPolynomial& other) {
    return *this += -other;
  }

  RationalPolynomial operator-() const {
    RationalPolynomial out = *this;
    for (auto& [mono, coeff] : out.terms_) coeff = -coeff;
    return out;
  }

  double evaluate(const std::array<double, 4>& point) const {
    double total = 0.0;
    for (const auto& [mono, coeff] : terms_) {
      double value = to_double(coeff);
      for (std::size_t k = 0; k < 4; ++k)
        for (int e = 0; e < mono[k]; ++e) value *= point[k];
      total += value;
    }
    return total;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [mono, coeff] : terms_) {
      std::string piece;
      Rational mag = coeff.num < 0 ? -coeff : coeff;
      bool unit = mag == Rational(1);
      if (!unit || (mono[0] == 0 && mono[1] == 0 && mono[2] == 0 && mono[3] == 0))
        piece += sepscope::to_string(mag);
      for (std::size_t k = 0; k < 4; ++k) {
        if (mono[k] == 0) continue;
        if (!piece.empty() && piece.back() != ' ') piece += "*";
        piece += "V" + std::to_string(k + 1);
        if (mono[k] > 1) piece += "^" + std::to_string(mono[k]);
      }
      if (out.empty()) {
        if (coeff.num < 0) out += "-";
      } else {
        out += coeff.num < 0 ? " - " : " + ";
      }
      out += piece;
    }
    return out;
  }

 private:
  std::map<Monomial, Rational> terms_;
};

inline RationalPolynomial operator+(RationalPolynomial a,
                                    const RationalPolynomial& b) {
  a += b;
  return a;
}

inline RationalPolynomial operator-(RationalPolynomial a,
                                    const RationalPolynomial& b) {
  a -= b;
  return a;
}

inline RationalPolynomial operator*(const Rational& scale,
                                    const RationalPolynomial& p) {
  RationalPolynomial out;
  for (const auto& [mono, coeff] : p.terms())
    out += RationalPolynomial::term(scale * coeff, mono);
  return out;
}

inline RationalPolynomial operator*(const RationalPolynomial& a,
                                    const RationalPolynomial& b) {
  RationalPolynomial out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      RationalPolynomial::Monomial mono;
      for (std::size_t k = 0; k < 4; ++k) mono[k] = ma[k] + mb[k];
      out += RationalPolynomial::term(ca * cb, mono);
    }
  }
  return out;
}

}  // namespace sepscope
