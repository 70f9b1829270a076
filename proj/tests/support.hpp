#pragma once

// Seeded generators and independent oracles shared by the test binaries.
// The oracles use their own dense-map polynomial arithmetic and never call
// apply_delta / apply_poly / transpose from the library.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "onshell/deltaspace.hpp"
#include "onshell/multi_index.hpp"
#include "onshell/opalg.hpp"
#include "onshell/scalar.hpp"

namespace testing {

using onshell::DeltaVector;
using onshell::LinearMap;
using onshell::MultiIndex;
using onshell::OperatorExpr;
using onshell::OperatorTerm;
using onshell::Polynomial;
using onshell::Rational;
using onshell::Scalar;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(int percent = 50) { return uniform(1, 100) <= percent; }

  Rational rational(int num = 5, int den = 3) {
    Rational q(uniform(-num, num), uniform(1, den));
    q.canonicalize();
    return q;
  }
  Scalar scalar(bool complex = true) { return {rational(), complex && coin(40) ? rational() : Rational(0)}; }
  Scalar nonzero_scalar(bool complex = true) {
    for (;;) {
      Scalar s = scalar(complex);
      if (!s.is_zero()) return s;
    }
  }

  MultiIndex multi_index(std::size_t n, int max_order) {
    int total = uniform(0, max_order);
    MultiIndex a(n);
    for (int k = 0; k < total; ++k) a[static_cast<std::size_t>(uniform(0, static_cast<int>(n) - 1))] += 1;
    return a;
  }

  DeltaVector delta(std::size_t n, int r, int terms = 3, bool complex = true) {
    DeltaVector v(n);
    for (int t = 0; t < terms; ++t) v.add(multi_index(n, r), scalar(complex));
    return v;
  }

  Polynomial polynomial(std::size_t n, int deg, int terms = 3, bool complex = true) {
    Polynomial p(n);
    for (int t = 0; t < terms; ++t) p.add(multi_index(n, deg), scalar(complex));
    return p;
  }

  LinearMap invertible(std::size_t n) {
    for (;;) {
      std::vector<Rational> e;
      for (std::size_t i = 0; i < n * n; ++i) e.push_back(Rational(uniform(-2, 2)));
      LinearMap L(n, e);
      if (L.det() != 0) return L;
    }
  }

  /// Random a(x) d^gamma [P_L] sum, polynomial coefficients.
  OperatorExpr op(std::size_t n, int max_deriv, int max_coeff_deg, int terms, bool pullbacks = false,
                  bool complex = true) {
    std::vector<OperatorTerm> ts;
    for (int t = 0; t < terms; ++t) {
      OperatorTerm term{polynomial(n, max_coeff_deg, 2, complex), multi_index(n, max_deriv), std::nullopt};
      if (pullbacks && coin(30)) term.pullback = invertible(n);
      ts.push_back(term);
    }
    return OperatorExpr::from_terms(n, ts);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Test-local polynomial arithmetic for the oracles.

using Mono = std::vector<int>;
using Dense = std::map<Mono, Scalar>;

inline void dense_add(Dense& p, const Mono& m, const Scalar& c) {
  if (c.is_zero()) return;
  Scalar& s = p[m];
  s += c;
  if (s.is_zero()) p.erase(m);
}

inline Dense to_dense(const Polynomial& f) {
  Dense d;
  for (const auto& [a, c] : f.terms()) dense_add(d, a.exponents(), c);
  return d;
}

inline Dense dense_mul(const Dense& a, const Dense& b) {
  Dense out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      dense_add(out, m, ca * cb);
    }
  return out;
}

// d/dx_i applied k times
inline Dense dense_diff(const Dense& p, std::size_t i, int k) {
  Dense out;
  for (const auto& [m, c] : p) {
    if (m[i] < k) continue;
    Mono mm = m;
    long f = 1;
    for (int j = 0; j < k; ++j) f *= m[i] - j;
    mm[i] -= k;
    dense_add(out, mm, c * Scalar(f));
  }
  return out;
}

inline Dense dense_diff(const Dense& p, const Mono& gamma) {
  Dense out = p;
  for (std::size_t i = 0; i < gamma.size(); ++i) out = dense_diff(out, i, gamma[i]);
  return out;
}

// f(Mx) for a row-major n x n matrix M
inline Dense dense_compose(const Dense& f, const LinearMap& M) {
  std::size_t n = M.dim();
  std::vector<Dense> forms(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Mono e(n, 0);
      e[j] = 1;
      dense_add(forms[i], e, Scalar(M.at(i, j)));
    }
  Dense out;
  for (const auto& [m, c] : f) {
    Dense term;
    term[Mono(n, 0)] = c;
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < m[i]; ++k) term = dense_mul(term, forms[i]);
    for (const auto& [mm, cc] : term) dense_add(out, mm, cc);
  }
  return out;
}

inline Scalar dense_at_zero(const Dense& p) {
  auto it = p.find(Mono(p.empty() ? 0 : p.begin()->first.size(), 0));
  return it == p.end() ? Scalar() : it->second;
}

inline Polynomial from_dense(std::size_t n, const Dense& d) {
  Polynomial f(n);
  for (const auto& [m, c] : d) f.add(MultiIndex(m), c);
  return f;
}

inline Rational factorial_of(const Mono& a) {
  long f = 1;
  for (int x : a)
    for (int k = 2; k <= x; ++k) f *= k;
  return Rational(f);
}

inline int order_of(const Mono& a) {
  int s = 0;
  for (int x : a) s += x;
  return s;
}

/// <delta^(alpha), phi> = (-1)^|alpha| (d^alpha phi)(0), straight from the definition.
inline Scalar oracle_pair_basis(const Mono& alpha, const Dense& phi) {
  Scalar v = dense_at_zero(dense_diff(phi, alpha));
  return order_of(alpha) % 2 ? -v : v;
}

inline Scalar oracle_pair(const DeltaVector& v, const Polynomial& f) {
  Dense d = to_dense(f);
  Scalar s;
  for (const auto& [a, c] : v.terms()) s += c * oracle_pair_basis(a.exponents(), d);
  return s;
}

/// The polynomial Q^t phi from the definition of each summand
/// a d^g P_L : phi -> |det L|^-1 ((-1)^|g| d^g (a phi)) o L^-1.
inline Dense oracle_transpose_apply(const OperatorExpr& q, const Dense& phi) {
  Dense out;
  for (const auto& [key, a] : q.terms()) {
    Dense t = dense_diff(dense_mul(to_dense(a), phi), key.derivative.exponents());
    if (order_of(key.derivative.exponents()) % 2) {
      Dense neg;
      for (const auto& [m, c] : t) neg[m] = -c;
      t = neg;
    }
    Scalar scale(1);
    if (!key.pullback.is_identity()) {
      t = dense_compose(t, key.pullback.inverse());
      Rational d = key.pullback.det();
      scale = Scalar(Rational(1) / (d < 0 ? Rational(-d) : d));
    }
    for (const auto& [m, c] : t) dense_add(out, m, scale * c);
  }
  return out;
}

/// Q v in D'({0}), coefficient of delta^(kappa) read off from
/// <Q v, x^kappa> = <v, Q^t x^kappa> = (-1)^|kappa| kappa! c_kappa.
inline DeltaVector oracle_apply_delta(const OperatorExpr& q, const DeltaVector& v, int max_out) {
  std::size_t n = q.dim();
  DeltaVector out(n);
  for (const auto& kappa : onshell::enumerate(n, max_out)) {
    Dense x;
    x[kappa.exponents()] = Scalar(1);
    Dense img = oracle_transpose_apply(q, x);
    Scalar s;
    for (const auto& [a, c] : v.terms()) s += c * oracle_pair_basis(a.exponents(), img);
    Rational norm = factorial_of(kappa.exponents());
    if (kappa.order() % 2) norm = -norm;
    out.add(kappa, s / Scalar(norm));
  }
  return out;
}

/// Q f for a polynomial f: a d^g (f o L).
inline Polynomial oracle_apply_poly(const OperatorExpr& q, const Polynomial& f) {
  Dense out;
  Dense df = to_dense(f);
  for (const auto& [key, a] : q.terms()) {
    Dense t = key.pullback.is_identity() ? df : dense_compose(df, key.pullback);
    t = dense_mul(to_dense(a), dense_diff(t, key.derivative.exponents()));
    for (const auto& [m, c] : t) dense_add(out, m, c);
  }
  return from_dense(q.dim(), out);
}

/// (v|w) = sum alpha! conj(v_alpha) w_alpha, straight from the definition.
inline Scalar oracle_inner(const DeltaVector& v, const DeltaVector& w) {
  Scalar s;
  for (const auto& [a, c] : v.terms()) s += Scalar(factorial_of(a.exponents())) * c.conj() * w.coeff(a);
  return s;
}

struct CorpusEntry {
  OperatorExpr q;
  int r = 0;
};

/// Named operators first, then random polynomial-coefficient operators with
/// n <= 3, r <= 3.
inline std::vector<CorpusEntry> operator_corpus(Gen& g, std::size_t random_count) {
  using namespace onshell;
  std::vector<CorpusEntry> out = {
      {euler(1, Scalar(-2)), 1},
      {euler(1, Scalar(Rational(-1, 2))), 0},
      {euler(2, Scalar(-3)), 2},
      {euler(3, Scalar(Rational(1, 2), Rational(1))), 2},
      {dalembert(2, 0, Metric::minkowski(2)), 2},
      {dalembert(3, 1, Metric::minkowski(3)), 1},
      {lorentz_generator(2, 0, 1, Metric::minkowski(2)), 3},
      {casimir(3, Metric::minkowski(3)), 2},
      {OperatorExpr::identity(1) - parity(1), 3},
      {OperatorExpr::identity(2) + parity(2), 2},
  };
  for (std::size_t k = 0; k < random_count; ++k) {
    std::size_t n = static_cast<std::size_t>(g.uniform(1, 3));
    out.push_back({g.op(n, 2, 2, g.uniform(1, 3), g.coin(25)), g.uniform(0, n == 3 ? 2 : 3)});
  }
  return out;
}

}  // namespace testing
