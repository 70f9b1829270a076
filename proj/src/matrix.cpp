#include "onshell/matrix.hpp"

#include <utility>

#include "onshell/error.hpp"

namespace onshell {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, const Vector& v) {
  if (v.size() != rows_) throw Error(ErrorCode::kDimensionMismatch, "column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::adjoint() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j).conj();
  return t;
}

Matrix Matrix::block(std::size_t rows, std::size_t cols) const {
  if (rows > rows_ || cols > cols_) throw Error(ErrorCode::kDimensionMismatch, "block larger than matrix");
  Matrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(i, j);
  return b;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::kDimensionMismatch, "matrix shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::kDimensionMismatch, "matrix shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

Matrix& Matrix::operator*=(const Scalar& s) {
  for (auto& x : a_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return parallel::matmul(a, b); }

Vector operator*(const Matrix& m, const Vector& v) {
  if (m.cols() != v.size()) throw Error(ErrorCode::kDimensionMismatch, "matrix-vector shape mismatch");
  Vector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero() && !v[j].is_zero()) out[i] += m(i, j) * v[j];
  return out;
}

namespace {

void check_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::kDimensionMismatch, "matrix product shape mismatch");
}

// Row i of a*b. Summation order is fixed (k ascending), so every caller gets
// the same exact value regardless of scheduling.
void product_row(const Matrix& a, const Matrix& b, std::size_t i, Matrix& c) {
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const Scalar& aik = a(i, k);
    if (aik.is_zero()) continue;
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
  }
}

}  // namespace

Matrix serial::matmul(const Matrix& a, const Matrix& b) {
  check_product(a, b);
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) product_row(a, b, i, c);
  return c;
}

Matrix parallel::matmul(const Matrix& a, const Matrix& b) {
  check_product(a, b);
  Matrix c(a.rows(), b.cols());
  const auto rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(dynamic) if (rows > 8)
  for (long i = 0; i < rows; ++i) product_row(a, b, static_cast<std::size_t>(i), c);
  return c;
}

Echelon rref(const Matrix& m) {
  Echelon e{m, {}};
  Matrix& a = e.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    Scalar inv = Scalar(1) / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col).is_zero()) continue;
      Scalar f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j)
        if (!a(row, j).is_zero()) a(i, j) -= f * a(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::vector<Vector> kernel(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = Scalar(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw Error(ErrorCode::kDimensionMismatch, "solve: right-hand side length mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Echelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  return x;
}

Scalar determinant(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::kDimensionMismatch, "determinant of a non-square matrix");
  Matrix a = m;
  Scalar det(1);
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    Scalar inv = Scalar(1) / a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      Scalar f = a(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

Matrix weighted_adjoint(const Matrix& m, const std::vector<Rational>& dom_weights,
                        const std::vector<Rational>& cod_weights) {
  if (dom_weights.size() != m.cols() || cod_weights.size() != m.rows())
    throw Error(ErrorCode::kDimensionMismatch, "weighted_adjoint: weight length mismatch");
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).is_zero()) continue;
      Rational w = cod_weights[i] / dom_weights[j];
      t(j, i) = m(i, j).conj() * Scalar(w);
    }
  return t;
}

}  // namespace onshell
