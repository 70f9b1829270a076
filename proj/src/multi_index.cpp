#include "onshell/multi_index.hpp"

#include <numeric>

#include "onshell/error.hpp"

namespace onshell {

int MultiIndex::order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

mpz_class MultiIndex::factorial() const {
  mpz_class f = 1;
  for (int a : e_) {
    mpz_class t;
    mpz_fac_ui(t.get_mpz_t(), static_cast<unsigned long>(a));
    f *= t;
  }
  return f;
}

bool MultiIndex::le(const MultiIndex& other) const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] > other.e_[i]) return false;
  return true;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "multi-index dimension mismatch");
  MultiIndex c = a;
  for (std::size_t i = 0; i < a.dim(); ++i) c.e_[i] += b.e_[i];
  return c;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "multi-index dimension mismatch");
  MultiIndex c = a;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    c.e_[i] -= b.e_[i];
    if (c.e_[i] < 0) throw Error(ErrorCode::kInvalidArgument, "negative exponent in multi-index difference");
  }
  return c;
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(e_[i]);
  }
  return s + ")";
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  int oa = a.order();
  int ob = b.order();
  if (oa != ob) return oa < ob;
  std::size_t n = std::min(a.dim(), b.dim());
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return a.dim() < b.dim();
}

std::size_t basis_dimension(std::size_t n, int r) {
  if (r < 0) return 0;
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), n + static_cast<unsigned long>(r), n);
  return c.get_ui();
}

namespace {

// Exponent vectors of order exactly d, first exponent descending.
void fill_order(std::size_t n, int d, std::size_t pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos + 1 == n) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[pos] = k;
    fill_order(n, d - k, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<MultiIndex> enumerate(std::size_t n, int r) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 1");
  std::vector<MultiIndex> out;
  out.reserve(basis_dimension(n, r));
  MultiIndex cur(n);
  for (int d = 0; d <= r; ++d) fill_order(n, d, 0, cur, out);
  return out;
}

Basis::Basis(std::size_t n, int r) : n_(n), r_(r), elems_(enumerate(n, r)) {
  for (std::size_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i], i);
}

std::size_t Basis::index_of(const MultiIndex& alpha) const {
  auto it = index_.find(alpha);
  return it == index_.end() ? elems_.size() : it->second;
}

int Degree::value() const {
  if (!finite_) throw Error(ErrorCode::kInvalidArgument, "degree is minus infinity");
  return value_;
}

std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
  if (!a.finite_ || !b.finite_) {
    if (a.finite_ == b.finite_) return std::strong_ordering::equal;
    return a.finite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return a.value_ <=> b.value_;
}

}  // namespace onshell
