#include "onshell/degree.hpp"

#include "onshell/error.hpp"

namespace onshell {

namespace {

DegreeBound shifted(const DegreeBound& d, int k) { return {d.value + k, false}; }

}  // namespace

DegreeBound deg_delta(const DeltaVector& v) { return {v.degree(), true}; }

DegreeBound bound_derivative(const DegreeBound& d, const MultiIndex& gamma) { return shifted(d, gamma.order()); }

DegreeBound bound_monomial(const DegreeBound& d, const MultiIndex& beta) { return shifted(d, -beta.order()); }

DegreeBound bound_vanishing_factor(const DegreeBound& d, int k) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "vanishing order must be >= 0");
  return shifted(d, -k);
}

DegreeBound bound_tensor(const DegreeBound& d1, std::size_t n1, const DegreeBound& d2, std::size_t n2) {
  if (!d1.value.is_finite() || !d2.value.is_finite()) return {Degree::minus_infinity(), false};
  // sd(u (x) v) <= sd u + sd v, and deg = sd - dimension
  int sd = (d1.value.value() + static_cast<int>(n1)) + (d2.value.value() + static_cast<int>(n2));
  return {Degree(sd - static_cast<int>(n1 + n2)), false};
}

DegreeBound bound_operator(const DegreeBound& d, const OperatorExpr& q) {
  return shifted(d, essential_order(q, 0).q);
}

}  // namespace onshell
