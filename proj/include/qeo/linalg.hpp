#ifndef QEO_LINALG_HPP
#define QEO_LINALG_HPP

// Dense complex linear algebra: Kronecker products, partial traces and a
// cyclic Jacobi eigensolver for Hermitian matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qeo/errors.hpp"

namespace qeo {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw StructuralError("ComplexMatrix: entry count does not match shape");
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  // Column vector from its entries.
  static ComplexMatrix column(std::span<const Complex> v) {
    return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
  }

  // Builds a real matrix from nested rows.
  static ComplexMatrix from_real(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw StructuralError("ComplexMatrix: ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  Complex trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw StructuralError("matrix product: inner dimensions differ");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  // Largest entrywise modulus of (this - o).
  double max_abs_diff(const ComplexMatrix& o) const {
    require_same_shape(o);
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - o.data_[i]));
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
  }

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw StructuralError("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// A square matrix that equals its conjugate transpose. Construction
// symmetrizes the input and records how far it was from Hermitian.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const ComplexMatrix& m, double tol = kHermitianTol) {
    if (!m.is_square()) throw StructuralError("HermitianMatrix: matrix is not square");
    const std::size_t n = m.rows();
    matrix_ = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const Complex a = m(i, j);
        const Complex b = std::conj(m(j, i));
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
          throw NumericalError("HermitianMatrix: non-finite entry");
        }
        deviation_ = std::max(deviation_, std::abs(a - b));
        matrix_(i, j) = 0.5 * (a + b);
      }
    }
    if (deviation_ > tol) {
      throw StructuralError("HermitianMatrix: input deviates from its adjoint by " +
                            std::to_string(deviation_));
    }
  }

  static HermitianMatrix identity(std::size_t n) { return HermitianMatrix(ComplexMatrix::identity(n)); }

  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

  // max |A - A^dagger| of the matrix this was built from.
  double input_deviation() const { return deviation_; }

  double trace() const { return matrix_.trace().real(); }

 private:
  ComplexMatrix matrix_;
  double deviation_ = 0.0;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column i pairs with values[i]

  // V diag(values) V^dagger
  ComplexMatrix reconstruct() const {
    ComplexMatrix scaled = vectors;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
      for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= values[j];
    return scaled * vectors.adjoint();
  }

  std::vector<Complex> vector(std::size_t k) const {
    std::vector<Complex> v(vectors.rows());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
    return v;
  }
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  }
  return out;
}

inline HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic complex Jacobi. Each rotation J zeroes a[p][q] through A <- J^dagger A J.
inline EigenDecomposition hermitian_eigen(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.frobenius_norm(), 1e-300);
  if (!std::isfinite(scale)) throw NumericalError("hermitian_eigen: matrix norm overflows double range");
  const double threshold = 1e-12 * scale;
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  while (detail::off_diagonal_norm(a) > threshold) {
    if (++sweep > kMaxSweeps) throw NumericalError("hermitian_eigen: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = diag(1, conj(phase)) * R(c, s) on the (p, q) plane; the phase
        // factor makes the pivot real so the real rotation R can zero it.
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);
        // Columns: A <- A J
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        // Rows: A <- J^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    if (!std::isfinite(out.values[k])) throw NumericalError("hermitian_eigen: non-finite eigenvalue");
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

inline double min_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) throw StructuralError("min_eigenvalue: empty matrix");
  return hermitian_eigen(h).values.front();
}

inline double max_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) throw StructuralError("max_eigenvalue: empty matrix");
  return hermitian_eigen(h).values.back();
}

inline bool is_psd(const HermitianMatrix& h, double tol) {
  if (h.dim() == 0) return true;
  return min_eigenvalue(h) >= -tol;
}

// Re Tr(G M). Both factors Hermitian, so the imaginary part is roundoff.
inline double trace_product(const HermitianMatrix& g, const HermitianMatrix& m) {
  if (g.dim() != m.dim()) throw StructuralError("trace_product: dimension mismatch");
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j) t += g(i, j) * m(j, i);
  if (std::abs(t.imag()) > 1e-12 * std::max(1.0, std::abs(t.real()))) {
    throw NumericalError("trace_product: imaginary part " + std::to_string(t.imag()));
  }
  return t.real();
}

enum class Subsystem { A, B };

inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                   Subsystem keep) {
  if (!m.is_square() || m.rows() != dim_a * dim_b) {
    throw StructuralError("partial_trace: matrix dimension is not dim_a * dim_b");
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t i = 0; i < dim_b; ++i)
    for (std::size_t j = 0; j < dim_b; ++j)
      for (std::size_t k = 0; k < dim_a; ++k) out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return out;
}

inline HermitianMatrix partial_trace(const HermitianMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                     Subsystem keep) {
  return HermitianMatrix(partial_trace(m.matrix(), dim_a, dim_b, keep));
}

// x^dagger A x for a column given as a span.
inline Complex quadratic_form(const ComplexMatrix& a, std::span<const Complex> x) {
  if (!a.is_square() || a.rows() != x.size()) throw StructuralError("quadratic_form: dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    Complex row{0.0, 0.0};
    for (std::size_t j = 0; j < x.size(); ++j) row += a(i, j) * x[j];
    s += std::conj(x[i]) * row;
  }
  return s;
}

inline double vector_norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

inline std::vector<Complex> kron(std::span<const Complex> x, std::span<const Complex> y) {
  std::vector<Complex> out;
  out.reserve(x.size() * y.size());
  for (const auto& a : x)
    for (const auto& b : y) out.push_back(a * b);
  return out;
}

// x x^dagger
inline ComplexMatrix outer(std::span<const Complex> x) {
  ComplexMatrix out(x.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) out(i, j) = x[i] * std::conj(x[j]);
  return out;
}

}  // namespace qeo

#endif  // QEO_LINALG_HPP
