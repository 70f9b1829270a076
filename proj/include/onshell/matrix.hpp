#pragma once

// Dense exact matrices over Gaussian rationals. Sizes stay small (a few
// hundred rows at most), so everything is plain row-major storage.

#include <cstddef>
#include <optional>
#include <vector>

#include "onshell/scalar.hpp"

namespace onshell {

using Vector = std::vector<Scalar>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }
  Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  [[nodiscard]] Vector column(std::size_t j) const;
  void set_column(std::size_t j, const Vector& v);
  [[nodiscard]] bool is_zero() const;
  /// Conjugate transpose.
  [[nodiscard]] Matrix adjoint() const;
  /// Top-left block.
  [[nodiscard]] Matrix block(std::size_t rows, std::size_t cols) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Scalar& s);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Scalar& s, Matrix a) { return a *= s; }
  /// Parallel product; identical to serial::matmul.
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector a_;
};

Vector operator*(const Matrix& m, const Vector& v);

namespace serial {
Matrix matmul(const Matrix& a, const Matrix& b);
}  // namespace serial
namespace parallel {
Matrix matmul(const Matrix& a, const Matrix& b);
}  // namespace parallel

struct Echelon {
  Matrix reduced;
  /// Pivot column of each nonzero row.
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form; the pivot in each column is the first nonzero
/// entry at or below the current row.
Echelon rref(const Matrix& m);
std::size_t rank(const Matrix& m);
/// One basis vector per free column: 1 at that column, pivots solved.
std::vector<Vector> kernel(const Matrix& m);
/// Some x with m x = b, or nothing if b is not in the column space.
std::optional<Vector> solve(const Matrix& m, const Vector& b);
Scalar determinant(const Matrix& m);

/// Adjoint with respect to weighted inner products sum w_i conj(x_i) y_i:
/// D_dom^-1 M^H D_cod.
Matrix weighted_adjoint(const Matrix& m, const std::vector<Rational>& dom_weights,
                        const std::vector<Rational>& cod_weights);

}  // namespace onshell
