#include "onshell/deltaspace.hpp"

namespace onshell {

namespace {

// (-1)^|alpha| alpha!
Scalar signed_factorial(const MultiIndex& alpha) {
  Rational f(alpha.factorial());
  if (alpha.order() % 2) f = -f;
  return Scalar(f);
}

void require_fits(int r, const DeltaVector& v, const char* what) {
  if (v.degree() > Degree(r))
    throw Error(ErrorCode::kDegreeOverflow,
                std::string(what) + ": degree " + v.degree().str() + " exceeds " + std::to_string(r));
}

}  // namespace

Polynomial constant_polynomial(std::size_t n, const Scalar& c) {
  return Polynomial::basis(MultiIndex(n), c);
}

Polynomial coordinate(std::size_t n, std::size_t i) { return Polynomial::basis(MultiIndex::unit(n, i)); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kDimensionMismatch, "polynomial dimension mismatch");
  Polynomial out(a.dim());
  for (const auto& [x, cx] : a.terms())
    for (const auto& [y, cy] : b.terms()) out.add(x + y, cx * cy);
  return out;
}

Polynomial power(const Polynomial& p, int k) {
  Polynomial out = constant_polynomial(p.dim(), Scalar(1));
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

Polynomial derivative(const Polynomial& p, const MultiIndex& gamma) {
  Polynomial out(p.dim());
  for (const auto& [beta, c] : p.terms()) {
    if (!gamma.le(beta)) continue;
    // d^gamma x^beta = beta!/(beta-gamma)! x^(beta-gamma)
    MultiIndex rest = beta - gamma;
    Rational falling(beta.factorial(), rest.factorial());
    falling.canonicalize();
    out.add(rest, c * Scalar(falling));
  }
  return out;
}

Scalar value_at_zero(const Polynomial& p) { return p.coeff(MultiIndex(p.dim())); }

Scalar pair(const DeltaVector& v, const Polynomial& f) {
  if (v.dim() != f.dim()) throw Error(ErrorCode::kDimensionMismatch, "pair: dimension mismatch");
  Scalar s;
  for (const auto& [alpha, c] : v.terms()) {
    Scalar fa = f.coeff(alpha);
    if (!fa.is_zero()) s += c * fa * signed_factorial(alpha);
  }
  return s;
}

Polynomial smap(int r, const DeltaVector& v) {
  require_fits(r, v, "smap");
  // S_r delta^(alpha) = (-1)^|alpha| x^alpha
  Polynomial out(v.dim());
  for (const auto& [alpha, c] : v.terms()) out.add(alpha, alpha.order() % 2 ? -c : c);
  return out;
}

DeltaVector tmap(int r, const Polynomial& f) {
  // T_r x^beta = (-1)^|beta| delta^(beta) for |beta| <= r
  DeltaVector out(f.dim());
  for (const auto& [beta, c] : f.terms()) {
    if (beta.order() > r) break;
    out.add(beta, beta.order() % 2 ? -c : c);
  }
  return out;
}

Scalar inner(int r, const DeltaVector& v, const DeltaVector& w) {
  if (v.dim() != w.dim()) throw Error(ErrorCode::kDimensionMismatch, "inner: dimension mismatch");
  require_fits(r, v, "inner");
  require_fits(r, w, "inner");
  Scalar s;
  for (const auto& [alpha, c] : v.terms()) {
    Scalar wa = w.coeff(alpha);
    if (!wa.is_zero()) s += c.conj() * wa * Scalar(Rational(alpha.factorial()));
  }
  return s;
}

std::vector<Scalar> coordinates(const Basis& basis, const DeltaVector& v) {
  if (v.dim() != basis.dim()) throw Error(ErrorCode::kDimensionMismatch, "coordinates: dimension mismatch");
  std::vector<Scalar> out(basis.size());
  for (const auto& [alpha, c] : v.terms()) {
    std::size_t i = basis.index_of(alpha);
    if (i == basis.size())
      throw Error(ErrorCode::kDegreeOverflow, "coordinates: " + alpha.str() + " outside basis of order " +
                                                  std::to_string(basis.max_order()));
    out[i] = c;
  }
  return out;
}

DeltaVector from_coordinates(const Basis& basis, const std::vector<Scalar>& c) {
  DeltaVector v(basis.dim());
  for (std::size_t i = 0; i < c.size(); ++i) v.add(basis[i], c[i]);
  return v;
}

}  // namespace onshell
