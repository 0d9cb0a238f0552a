#include "sepscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sepscope/errors.hpp"

namespace sepscope {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeMismatch(std::string(what) + ": operand shapes differ");
  }
}

}  // namespace

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::conj() const {
  CMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k)
    out.data_[k] = std::conj(data_[k]);
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex CMatrix::trace() const {
  if (rows_ != cols_) throw ShapeMismatch("trace: matrix not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool CMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex scale) {
  for (Complex& z : data_) z *= scale;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("operator*: inner dimensions differ");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

CMatrix operator*(Complex scale, CMatrix a) { return a *= scale; }
CMatrix operator*(CMatrix a, Complex scale) { return a *= scale; }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

namespace {

// Unitary pair rotation used by both Jacobi drivers. For a Hermitian 2x2 block
// [[app, g],[conj(g), aqq]] it returns (c, s, ph) such that the block becomes
// diagonal under the column update
//   col_p' =  c col_p + s conj(ph) col_q
//   col_q' = -s col_p + c conj(ph) col_q
struct PairRotation {
  double c;
  double s;
  Complex ph;  // g / |g|
};

PairRotation make_rotation(double app, double aqq, Complex g) {
  const double r = std::abs(g);
  const Complex ph = g / r;
  const double tau = (aqq - app) / (2.0 * r);
  // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
  const double sign = tau >= 0.0 ? 1.0 : -1.0;
  const double t = -sign / (std::abs(tau) + std::hypot(1.0, tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, ph};
}

void rotate_columns(CMatrix& m, std::size_t p, std::size_t q,
                    const PairRotation& rot) {
  const Complex phc = std::conj(rot.ph);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Complex mp = m(i, p);
    const Complex mq = m(i, q);
    m(i, p) = rot.c * mp + rot.s * phc * mq;
    m(i, q) = -rot.s * mp + rot.c * phc * mq;
  }
}

void rotate_rows(CMatrix& m, std::size_t p, std::size_t q,
                 const PairRotation& rot) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Complex mp = m(p, j);
    const Complex mq = m(q, j);
    m(p, j) = rot.c * mp + rot.s * rot.ph * mq;
    m(q, j) = -rot.s * mp + rot.c * rot.ph * mq;
  }
}

double off_diagonal_norm(const CMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

void canonical_column_phases(CMatrix& v) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
      const double a = std::abs(v(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    const Complex phase = std::conj(v(imax, j)) / best;
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) *= phase;
  }
}

// Fill columns [filled, total) of u with unit vectors orthogonal to the ones
// already present, drawn from the standard basis via Gram-Schmidt.
void complete_orthonormal(CMatrix& u, std::size_t filled) {
  const std::size_t n = u.rows();
  std::size_t next = filled;
  for (std::size_t cand = 0; cand < n && next < u.cols(); ++cand) {
    std::vector<Complex> v(n, 0.0);
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < next; ++j) {
        Complex ip = 0.0;
        for (std::size_t i = 0; i < n; ++i) ip += std::conj(u(i, j)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= ip * u(i, j);
      }
    }
    double nrm = 0.0;
    for (const Complex& z : v) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-3) continue;
    for (std::size_t i = 0; i < n; ++i) u(i, next) = v[i] / nrm;
    ++next;
  }
  if (next < u.cols()) {
    throw InternalInconsistency("complete_orthonormal: basis exhausted");
  }
}

}  // namespace

Spectrum hermitian_eig(const CMatrix& a) {
  if (a.rows() != a.cols()) throw NotHermitian("hermitian_eig: matrix not square");
  const std::size_t n = a.rows();
  if (!a.is_hermitian(1e-8 * std::max(1.0, a.max_abs()))) {
    throw NotHermitian("hermitian_eig: input deviates from Hermitian symmetry");
  }

  // Work on the exactly Hermitian average of the input and its adjoint.
  CMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    w(i, i) = Complex(std::real(a(i, i)), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (a(i, j) + std::conj(a(j, i)));
      w(i, j) = z;
      w(j, i) = std::conj(z);
    }
  }

  CMatrix v = CMatrix::identity(n);
  const double scale = w.frobenius_norm();
  if (scale > 0.0) {
    const double target = 1e-14 * scale;
    const double skip = 1e-20 * scale;
    for (int sweep = 0; sweep < 100; ++sweep) {
      if (off_diagonal_norm(w) < target) break;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          if (std::abs(w(p, q)) <= skip) continue;
          const PairRotation rot =
              make_rotation(std::real(w(p, p)), std::real(w(q, q)), w(p, q));
          rotate_columns(w, p, q, rot);
          rotate_rows(w, p, q, rot);
          rotate_columns(v, p, q, rot);
          w(p, q) = 0.0;
          w(q, p) = 0.0;
          w(p, p) = Complex(std::real(w(p, p)), 0.0);
          w(q, q) = Complex(std::real(w(q, q)), 0.0);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::real(w(x, x)) > std::real(w(y, y));
  });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = std::real(w(order[k], order[k]));
    for (std::size_t i = 0; i < n; ++i)
      out.eigenvectors(i, k) = v(i, order[k]);
  }
  canonical_column_phases(out.eigenvectors);
  return out;
}

Svd svd(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ShapeMismatch("svd: empty matrix");
  }
  if (a.rows() < a.cols()) {
    Svd s = svd(a.adjoint());
    return {std::move(s.singular_values), std::move(s.right), std::move(s.left)};
  }

  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  CMatrix b = a;
  CMatrix w = CMatrix::identity(cols);

  const double scale = a.frobenius_norm();
  if (scale > 0.0) {
    for (int sweep = 0; sweep < 60; ++sweep) {
      bool rotated = false;
      for (std::size_t p = 0; p + 1 < cols; ++p) {
        for (std::size_t q = p + 1; q < cols; ++q) {
          double np = 0.0, nq = 0.0;
          Complex g = 0.0;
          for (std::size_t i = 0; i < rows; ++i) {
            np += std::norm(b(i, p));
            nq += std::norm(b(i, q));
            g += std::conj(b(i, p)) * b(i, q);
          }
          if (std::abs(g) <= 1e-15 * std::sqrt(np * nq)) continue;
          const PairRotation rot = make_rotation(np, nq, g);
          rotate_columns(b, p, q, rot);
          rotate_columns(w, p, q, rot);
          rotated = true;
        }
      }
      if (!rotated) break;
    }
  }

  std::vector<double> norms(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::norm(b(i, j));
    norms[j] = std::sqrt(s);
  }

  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  Svd out;
  out.singular_values.resize(cols);
  out.left = CMatrix(rows, rows);
  out.right = CMatrix(cols, cols);
  const double cutoff = scale * 1e-14;
  std::size_t filled = 0;
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = norms[j];
    for (std::size_t i = 0; i < cols; ++i) out.right(i, k) = w(i, j);
    if (norms[j] > cutoff && k == filled) {
      for (std::size_t i = 0; i < rows; ++i)
        out.left(i, k) = b(i, j) / norms[j];
      ++filled;
    }
  }
  complete_orthonormal(out.left, filled);
  return out;
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    s += std::conj(a.data()[k]) * b.data()[k];
  return s;
}

std::vector<Complex> vectorize(const CMatrix& a) { return a.data(); }

CMatrix matricize(std::span<const Complex> v, std::size_t rows,
                  std::size_t cols) {
  if (v.size() != rows * cols) {
    throw LengthMismatch("matricize: vector length does not match rows*cols");
  }
  CMatrix out(rows, cols);
  std::copy(v.begin(), v.end(), out.data().begin());
  return out;
}

std::size_t numeric_rank(const CMatrix& a, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("numeric_rank: rel_tol must lie in (0, 1)");
  }
  const Svd s = svd(a);
  if (s.singular_values.empty() || s.singular_values.front() == 0.0) return 0;
  const double cut = rel_tol * s.singular_values.front();
  std::size_t r = 0;
  for (double sv : s.singular_values)
    if (sv > cut) ++r;
  return r;
}

}  // namespace sepscope
