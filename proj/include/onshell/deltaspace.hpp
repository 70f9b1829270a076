#pragma once

// Finite-dimensional spaces of delta derivatives D'({0})_{<=r} and the
// polynomials they pair with.
//
// Sign convention: delta^(alpha) is d^alpha delta, so
//   <delta^(alpha), phi> = (-1)^|alpha| (d^alpha phi)(0),
// which gives <delta^(alpha), x^beta> = (-1)^|alpha| alpha! [alpha == beta].

#include <cstddef>
#include <map>
#include <vector>

#include "onshell/error.hpp"
#include "onshell/multi_index.hpp"
#include "onshell/scalar.hpp"

namespace onshell {

/// Sparse map MultiIndex -> Scalar in canonical form (no stored zeros).
/// Tag distinguishes delta vectors from polynomials at the type level.
template <class Tag>
class SparseForm {
 public:
  using Map = std::map<MultiIndex, Scalar, GradedLexLess>;

  SparseForm() = default;
  explicit SparseForm(std::size_t n) : n_(n) {}

  static SparseForm basis(const MultiIndex& alpha, const Scalar& c = Scalar(1)) {
    SparseForm f(alpha.dim());
    f.add(alpha, c);
    return f;
  }

  [[nodiscard]] std::size_t dim() const { return n_; }
  [[nodiscard]] const Map& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] Scalar coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Scalar() : it->second;
  }

  void add(const MultiIndex& alpha, const Scalar& c) {
    if (alpha.dim() != n_) throw Error(ErrorCode::kDimensionMismatch, "multi-index dimension mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// max |alpha| over stored terms; minus infinity for the zero form.
  [[nodiscard]] Degree degree() const {
    if (terms_.empty()) return Degree::minus_infinity();
    return Degree(terms_.rbegin()->first.order());
  }

  /// min |alpha| over stored terms (vanishing order at 0 for polynomials).
  /// Returns -1 for the zero form.
  [[nodiscard]] int low_order() const { return terms_.empty() ? -1 : terms_.begin()->first.order(); }

  [[nodiscard]] SparseForm conj() const {
    SparseForm r(n_);
    for (const auto& [a, c] : terms_) r.terms_.emplace(a, c.conj());
    return r;
  }

  SparseForm& operator+=(const SparseForm& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) add(a, c);
    return *this;
  }
  SparseForm& operator-=(const SparseForm& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) add(a, -c);
    return *this;
  }
  SparseForm& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
  }

  friend SparseForm operator+(SparseForm a, const SparseForm& b) { return a += b; }
  friend SparseForm operator-(SparseForm a, const SparseForm& b) { return a -= b; }
  friend SparseForm operator-(SparseForm a) { return a *= Scalar(-1); }
  friend SparseForm operator*(const Scalar& s, SparseForm a) { return a *= s; }
  friend SparseForm operator*(SparseForm a, const Scalar& s) { return a *= s; }

  friend bool operator==(const SparseForm& a, const SparseForm& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const SparseForm& a, const SparseForm& b) { return !(a == b); }

 private:
  void check_dim(const SparseForm& o) const {
    if (o.n_ != n_) throw Error(ErrorCode::kDimensionMismatch, "dimension mismatch");
  }

  std::size_t n_ = 0;
  Map terms_;
};

struct DeltaTag {};
struct MonomialTag {};

/// v = sum v_alpha delta^(alpha), an element of D'({0}).
using DeltaVector = SparseForm<DeltaTag>;
/// f = sum c_alpha x^alpha.
using Polynomial = SparseForm<MonomialTag>;

// Polynomial algebra.
Polynomial constant_polynomial(std::size_t n, const Scalar& c);
Polynomial coordinate(std::size_t n, std::size_t i);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial power(const Polynomial& p, int k);
/// d^gamma p
Polynomial derivative(const Polynomial& p, const MultiIndex& gamma);
/// Value at the origin.
Scalar value_at_zero(const Polynomial& p);

/// Bilinear pairing <v, f>.
Scalar pair(const DeltaVector& v, const Polynomial& f);

/// S_r v = sum_{|alpha|<=r} x^alpha / alpha! <v, x^alpha>. Throws kDegreeOverflow if deg v > r.
Polynomial smap(int r, const DeltaVector& v);

/// T_r f = sum_{|alpha|<=r} delta^(alpha) / alpha! <delta^(alpha), f>.
DeltaVector tmap(int r, const Polynomial& f);

/// (v|w)_r = sum alpha! conj(v_alpha) w_alpha.
Scalar inner(int r, const DeltaVector& v, const DeltaVector& w);

/// Coefficient vector in the basis order; throws kDegreeOverflow if v does not fit.
std::vector<Scalar> coordinates(const Basis& basis, const DeltaVector& v);
DeltaVector from_coordinates(const Basis& basis, const std::vector<Scalar>& c);

}  // namespace onshell
