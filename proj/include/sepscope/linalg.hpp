#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sepscope {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Dimensions stay small (at most a few dozen),
// so everything is plain loops over contiguous storage.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t rows, std::size_t cols) {
    return CMatrix(rows, cols);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  CMatrix transpose() const;
  CMatrix conj() const;
  CMatrix adjoint() const;

  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  bool is_hermitian(double tol) const;
  bool same_shape(const CMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Complex scale, CMatrix a);
CMatrix operator*(CMatrix a, Complex scale);

// Kronecker product with block convention C[(i*br+k),(j*bc+l)] = A(i,j)B(k,l).
CMatrix kron(const CMatrix& a, const CMatrix& b);

double max_abs_diff(const CMatrix& a, const CMatrix& b);

struct Spectrum {
  std::vector<double> eigenvalues;  // sorted non-increasing
  CMatrix eigenvectors;             // orthonormal columns, column k <-> eigenvalues[k]
};

// Cyclic Jacobi diagonalization for Hermitian input. Each eigenvector is
// rescaled so its largest-magnitude component is real and positive.
Spectrum hermitian_eig(const CMatrix& a);

struct Svd {
  std::vector<double> singular_values;  // length min(rows, cols), non-increasing
  CMatrix left;                         // rows x rows unitary
  CMatrix right;                        // cols x cols unitary, a = left diag right^dagger
};

// One-sided Jacobi orthogonalization; keeps small singular values accurate at
// the machine-noise level instead of the sqrt(eps) floor of the normal-equation
// route.
Svd svd(const CMatrix& a);

// Hilbert-Schmidt inner product Tr{A^dagger B}.
Complex hs_inner(const CMatrix& a, const CMatrix& b);

// Row-stacking vectorization and its inverse.
std::vector<Complex> vectorize(const CMatrix& a);
CMatrix matricize(std::span<const Complex> v, std::size_t rows, std::size_t cols);

// Number of singular values above rel_tol * sigma_max; the zero matrix has rank 0.
std::size_t numeric_rank(const CMatrix& a, double rel_tol = 1e-8);

}  // namespace sepscope
