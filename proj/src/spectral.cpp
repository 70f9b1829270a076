#include "onshell/spectral.hpp"

#include <utility>

#include "onshell/error.hpp"

namespace onshell {

DeltaVector RestrictionMatrix::apply(const DeltaVector& v) const {
  return from_coordinates(codomain_basis(), m * coordinates(domain_basis(), v));
}

std::vector<Rational> factorial_weights(const Basis& basis) {
  std::vector<Rational> w;
  w.reserve(basis.size());
  for (const auto& a : basis.elements()) w.emplace_back(a.factorial());
  return w;
}

namespace {

int codomain_order(const OperatorExpr& q, int r) { return r + essential_order(q, 0).q; }

Vector restriction_column(const OperatorExpr& q, const Basis& cod, const MultiIndex& alpha) {
  return coordinates(cod, apply_delta(q, DeltaVector::basis(alpha)));
}

// Column beta of T_r conj(Q)^t S_{r+q}.
Vector adjoint_column(const OperatorExpr& qt, int r, const Basis& dom, const MultiIndex& beta) {
  Polynomial s = smap(beta.order(), DeltaVector::basis(beta));
  return coordinates(dom, tmap(r, apply_poly(qt, s)));
}

void require_square(const Matrix& m, const char* what) {
  if (!m.is_square()) throw Error(ErrorCode::kDimensionMismatch, std::string(what) + ": matrix is not square");
}

}  // namespace

RestrictionMatrix serial::restriction(const OperatorExpr& q, int r) {
  RestrictionMatrix out{q.dim(), r, codomain_order(q, r), {}, "restrict"};
  Basis dom(q.dim(), r);
  Basis cod(q.dim(), out.r_codomain);
  out.m = Matrix(cod.size(), dom.size());
  for (std::size_t j = 0; j < dom.size(); ++j) out.m.set_column(j, restriction_column(q, cod, dom[j]));
  return out;
}

RestrictionMatrix restriction(const OperatorExpr& q, int r) {
  RestrictionMatrix out{q.dim(), r, codomain_order(q, r), {}, "restrict"};
  Basis dom(q.dim(), r);
  Basis cod(q.dim(), out.r_codomain);
  out.m = Matrix(cod.size(), dom.size());
  const auto cols = static_cast<long>(dom.size());
#pragma omp parallel for schedule(dynamic) if (cols > 4)
  for (long j = 0; j < cols; ++j) {
    auto col = static_cast<std::size_t>(j);
    out.m.set_column(col, restriction_column(q, cod, dom[col]));
  }
  return out;
}

RestrictionMatrix serial::adjoint_restriction(const OperatorExpr& q, int r) {
  RestrictionMatrix out{q.dim(), codomain_order(q, r), r, {}, "adjoint"};
  OperatorExpr qt = transpose(q.conj());
  Basis dom(q.dim(), r);
  Basis cod(q.dim(), out.r_domain);
  out.m = Matrix(dom.size(), cod.size());
  for (std::size_t j = 0; j < cod.size(); ++j) out.m.set_column(j, adjoint_column(qt, r, dom, cod[j]));
  return out;
}

RestrictionMatrix adjoint_restriction(const OperatorExpr& q, int r) {
  RestrictionMatrix out{q.dim(), codomain_order(q, r), r, {}, "adjoint"};
  OperatorExpr qt = transpose(q.conj());
  Basis dom(q.dim(), r);
  Basis cod(q.dim(), out.r_domain);
  out.m = Matrix(dom.size(), cod.size());
  const auto cols = static_cast<long>(cod.size());
#pragma omp parallel for schedule(dynamic) if (cols > 4)
  for (long j = 0; j < cols; ++j) {
    auto col = static_cast<std::size_t>(j);
    out.m.set_column(col, adjoint_column(qt, r, dom, cod[col]));
  }
  return out;
}

RestrictionMatrix adjoint(const RestrictionMatrix& m) {
  RestrictionMatrix out{m.n, m.r_codomain, m.r_domain, {}, "adjoint"};
  out.m = weighted_adjoint(m.m, factorial_weights(m.domain_basis()), factorial_weights(m.codomain_basis()));
  return out;
}

RestrictionMatrix compose(const RestrictionMatrix& a, const RestrictionMatrix& b) {
  if (a.n != b.n || a.r_domain != b.r_codomain)
    throw Error(ErrorCode::kDimensionMismatch, "compose: restriction shapes do not chain");
  return {a.n, b.r_domain, a.r_codomain, a.m * b.m, "product"};
}

// ---------------------------------------------------------------- ExactPolynomial

ExactPolynomial::ExactPolynomial(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }

void ExactPolynomial::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar ExactPolynomial::operator()(const Scalar& z) const {
  Scalar acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Matrix ExactPolynomial::operator()(const Matrix& m) const {
  require_square(m, "polynomial evaluation");
  Matrix acc(m.rows(), m.cols());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * m;
    for (std::size_t i = 0; i < m.rows(); ++i) acc(i, i) += *it;
  }
  return acc;
}

bool ExactPolynomial::is_real() const {
  for (const auto& c : c_)
    if (!c.is_real()) return false;
  return true;
}

ExactPolynomial ExactPolynomial::derivative() const {
  std::vector<Scalar> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Scalar(static_cast<long>(k)));
  return ExactPolynomial(std::move(d));
}

namespace {

std::pair<ExactPolynomial, ExactPolynomial> divmod(const ExactPolynomial& a, const ExactPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorCode::kInvalidArgument, "polynomial division by zero");
  std::vector<Scalar> rem = a.coeffs();
  const int db = b.degree();
  std::vector<Scalar> quo(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0);
  const Scalar lead_inv = Scalar(1) / b.coeffs().back();
  for (int k = a.degree(); k >= db; --k) {
    Scalar f = rem[static_cast<std::size_t>(k)] * lead_inv;
    if (f.is_zero()) continue;
    quo[static_cast<std::size_t>(k - db)] = f;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
  }
  return {ExactPolynomial(std::move(quo)), ExactPolynomial(std::move(rem))};
}

ExactPolynomial make_monic(const ExactPolynomial& p) {
  if (p.is_zero()) return p;
  return (Scalar(1) / p.coeffs().back()) * p;
}

}  // namespace

ExactPolynomial ExactPolynomial::divide_exact(const ExactPolynomial& d) const {
  auto [q, r] = divmod(*this, d);
  if (!r.is_zero()) throw Error(ErrorCode::kInternal, "polynomial division left a remainder");
  return q;
}

ExactPolynomial remainder(const ExactPolynomial& a, const ExactPolynomial& b) { return divmod(a, b).second; }

ExactPolynomial gcd(ExactPolynomial a, ExactPolynomial b) {
  while (!b.is_zero()) {
    ExactPolynomial r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

bool ExactPolynomial::is_squarefree() const {
  if (degree() <= 0) return true;
  return gcd(*this, derivative()).degree() == 0;
}

ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Scalar> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator+(const ExactPolynomial& a, const ExactPolynomial& b) {
  std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator*(const Scalar& s, const ExactPolynomial& p) {
  std::vector<Scalar> c = p.c_;
  for (auto& x : c) x *= s;
  return ExactPolynomial(std::move(c));
}

std::string ExactPolynomial::str() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    const Scalar& c = c_[k];
    if (c.is_zero()) continue;
    std::string mono = k == 0 ? "" : (k == 1 ? "z" : "z^" + std::to_string(k));
    bool negative = c.is_real() && sgn(c.re()) < 0;
    Scalar mag = negative ? -c : c;
    std::string num = mag.is_real() ? mag.str() : "(" + mag.str() + ")";
    std::string body;
    if (mono.empty()) {
      body = num;
    } else if (mag == Scalar(1)) {
      body = mono;
    } else {
      body = num + "*" + mono;
    }
    if (out.empty()) {
      out = negative ? "-" + body : body;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

// ---------------------------------------------------------------- minimal polynomial

namespace {

// Monic annihilator of w under m: the least k with m^k w in span{w, ..., m^(k-1) w}.
ExactPolynomial krylov_annihilator(const Matrix& m, const Vector& w) {
  struct Reduced {
    Vector v;
    std::size_t pivot;
    std::vector<Scalar> combo;  // v = sum combo[i] m^i w
  };
  std::vector<Reduced> basis;
  Vector cur = w;
  for (std::size_t k = 0;; ++k) {
    Vector v = cur;
    std::vector<Scalar> combo(k + 1);
    combo[k] = Scalar(1);
    for (const auto& b : basis) {
      if (v[b.pivot].is_zero()) continue;
      Scalar f = v[b.pivot] / b.v[b.pivot];
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!b.v[i].is_zero()) v[i] -= f * b.v[i];
      for (std::size_t i = 0; i < b.combo.size(); ++i) combo[i] -= f * b.combo[i];
    }
    std::size_t p = 0;
    while (p < v.size() && v[p].is_zero()) ++p;
    if (p == v.size()) return ExactPolynomial(std::move(combo));
    basis.push_back({std::move(v), p, std::move(combo)});
    cur = m * cur;
  }
}

}  // namespace

ExactPolynomial minimal_polynomial(const Matrix& m) {
  require_square(m, "minimal_polynomial");
  ExactPolynomial mp = ExactPolynomial::constant(Scalar(1));
  const std::size_t n = m.rows();
  Matrix mp_at_m = Matrix::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector w = mp_at_m.column(j);
    bool zero = true;
    for (const auto& x : w) zero = zero && x.is_zero();
    if (zero) continue;
    mp = mp * krylov_annihilator(m, w);
    mp_at_m = mp(m);
  }
  return mp;
}

ExactPolynomial minimal_polynomial(const RestrictionMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::kDimensionMismatch, "minimal_polynomial: restriction is not square");
  return minimal_polynomial(m.m);
}

RestrictionMatrix gram_operator(const OperatorExpr& q, int r) {
  RestrictionMatrix a = restriction(q, r);
  RestrictionMatrix b = compose(adjoint_restriction(q, r), a);
  b.tag = "gram";
  return b;
}

ExactPolynomial projection_polynomial_of(const Matrix& b) {
  ExactPolynomial g = minimal_polynomial(b);
  if (g.coeff(0).is_zero()) g = g.divide_exact(ExactPolynomial::variable());
  return (Scalar(1) / g.coeff(0)) * g;
}

ExactPolynomial projection_polynomial(const OperatorExpr& q, int r) {
  return projection_polynomial_of(gram_operator(q, r).m);
}

// ---------------------------------------------------------------- kernels and ranges

std::vector<DeltaVector> kernel_basis(const RestrictionMatrix& m) {
  Basis dom = m.domain_basis();
  std::vector<DeltaVector> out;
  for (const auto& v : kernel(m.m)) out.push_back(from_coordinates(dom, v));
  return out;
}

RangeMembership range_membership(const RestrictionMatrix& m, const DeltaVector& w) {
  if (w.dim() != m.n) throw Error(ErrorCode::kDimensionMismatch, "range_membership: dimension mismatch");
  Basis cod = m.codomain_basis();
  Vector wc = coordinates(cod, w);
  RangeMembership out;
  out.preimage = DeltaVector(m.n);
  out.witness = DeltaVector(m.n);
  if (auto x = solve(m.m, wc)) {
    out.member = true;
    out.preimage = from_coordinates(m.domain_basis(), *x);
    return out;
  }
  // Ran(m)^perp = ker(m*): some kernel vector of the adjoint sees w.
  RestrictionMatrix adj = adjoint(m);
  for (const auto& k : kernel(adj.m)) {
    DeltaVector cand = from_coordinates(cod, k);
    if (!inner(m.r_codomain, cand, w).is_zero()) {
      out.witness = cand;
      return out;
    }
  }
  throw Error(ErrorCode::kInternal, "range_membership: no witness found for a non-member");
}

RestrictionMatrix projector_onto_kernel(const OperatorExpr& q, int r) {
  RestrictionMatrix b = gram_operator(q, r);
  ExactPolynomial p = projection_polynomial_of(b.m);
  return {q.dim(), r, r, p(b.m), "projector"};
}

bool is_self_adjoint(const RestrictionMatrix& m) { return m.is_square() && adjoint(m).m == m.m; }

bool is_normal(const RestrictionMatrix& m) {
  if (!m.is_square()) return false;
  Matrix a = adjoint(m).m;
  return a * m.m == m.m * a;
}

Vector projection_counterterm(const Matrix& a, const Matrix& a_star, const ExactPolynomial& p, const Vector& w) {
  if (p.coeff(0) != Scalar(1)) throw Error(ErrorCode::kInternal, "projection polynomial must satisfy p(0) = 1");
  Vector u = a_star * w;  // B^{k-1} A* w, starting at k = 1
  Vector v(a.cols());
  for (int k = 1; k <= p.degree(); ++k) {
    const Scalar c = p.coeff(static_cast<std::size_t>(k));
    if (!c.is_zero())
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * u[i];
    if (k < p.degree()) u = a_star * (a * u);
  }
  return v;
}

DeltaVector pseudoinverse_correction(const RestrictionMatrix& m, const DeltaVector& w) {
  if (!is_normal(m)) throw Error(ErrorCode::kNonNormal, "pseudoinverse_correction: matrix is not normal");
  Matrix a_star = adjoint(m).m;
  ExactPolynomial p = projection_polynomial_of(a_star * m.m);
  Vector v = projection_counterterm(m.m, a_star, p, coordinates(m.codomain_basis(), w));
  // the projection counterterm cancels the range part; its negative solves it
  for (auto& x : v) x = -x;
  return from_coordinates(m.domain_basis(), v);
}

}  // namespace onshell
