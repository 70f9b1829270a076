#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "onshell/scalar.hpp"

namespace onshell {

/// Exponent vector alpha in N_0^n.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : e_(n, 0) {}
  MultiIndex(std::initializer_list<int> e) : e_(e) {}
  explicit MultiIndex(std::vector<int> e) : e_(std::move(e)) {}

  static MultiIndex unit(std::size_t n, std::size_t i) {
    MultiIndex m(n);
    m.e_[i] = 1;
    return m;
  }

  [[nodiscard]] std::size_t dim() const { return e_.size(); }
  [[nodiscard]] const std::vector<int>& exponents() const { return e_; }
  int operator[](std::size_t i) const { return e_[i]; }
  int& operator[](std::size_t i) { return e_[i]; }

  /// |alpha|
  [[nodiscard]] int order() const;
  /// alpha! = prod alpha_i!
  [[nodiscard]] mpz_class factorial() const;
  /// Componentwise alpha <= beta.
  [[nodiscard]] bool le(const MultiIndex& other) const;

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  /// Requires b.le(a).
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) = default;

  /// "(1,0,2)"
  [[nodiscard]] std::string str() const;

 private:
  std::vector<int> e_;
};

/// Graded lexicographic order: by |alpha|, then the first differing exponent,
/// larger first. In n = 2 this gives (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// C(n + r, n), the number of multi-indices of order <= r.
std::size_t basis_dimension(std::size_t n, int r);

/// All alpha with |alpha| <= r, in graded lexicographic order.
std::vector<MultiIndex> enumerate(std::size_t n, int r);

/// Ordered basis {delta^(alpha) : |alpha| <= r} with index lookup.
class Basis {
 public:
  Basis(std::size_t n, int r);

  [[nodiscard]] std::size_t dim() const { return n_; }
  [[nodiscard]] int max_order() const { return r_; }
  [[nodiscard]] std::size_t size() const { return elems_.size(); }
  [[nodiscard]] const MultiIndex& operator[](std::size_t i) const { return elems_[i]; }
  [[nodiscard]] const std::vector<MultiIndex>& elements() const { return elems_; }
  /// Position of alpha, or size() if |alpha| > r.
  [[nodiscard]] std::size_t index_of(const MultiIndex& alpha) const;

 private:
  std::size_t n_;
  int r_;
  std::vector<MultiIndex> elems_;
  std::map<MultiIndex, std::size_t, GradedLexLess> index_;
};

/// An integer degree or minus infinity (the degree of the zero vector).
class Degree {
 public:
  Degree(int value) : finite_(true), value_(value) {}  // NOLINT(google-explicit-constructor)
  static Degree minus_infinity() {
    Degree d(0);
    d.finite_ = false;
    return d;
  }

  [[nodiscard]] bool is_finite() const { return finite_; }
  /// Throws on minus infinity.
  [[nodiscard]] int value() const;

  friend bool operator==(const Degree& a, const Degree& b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Degree& a, const Degree& b);

  /// Shifting minus infinity leaves it unchanged.
  friend Degree operator+(const Degree& d, int k) { return d.finite_ ? Degree(d.value_ + k) : d; }

  [[nodiscard]] std::string str() const { return finite_ ? std::to_string(value_) : "-inf"; }

 private:
  bool finite_;
  int value_;
};

}  // namespace onshell
