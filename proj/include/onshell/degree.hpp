#pragma once

// Bookkeeping for degrees of divergence. Exact on delta vectors; everything
// else only propagates upper bounds.

#include <cstddef>
#include <string>

#include "onshell/deltaspace.hpp"
#include "onshell/multi_index.hpp"
#include "onshell/opalg.hpp"

namespace onshell {

struct DegreeBound {
  Degree value = Degree::minus_infinity();
  bool exact = false;

  [[nodiscard]] std::string str() const { return value.str() + (exact ? " (exact)" : " (upper bound)"); }
  friend bool operator==(const DegreeBound&, const DegreeBound&) = default;
};

/// max |alpha| over the support; minus infinity for 0. Always exact.
DegreeBound deg_delta(const DeltaVector& v);

/// d + |gamma|
DegreeBound bound_derivative(const DegreeBound& d, const MultiIndex& gamma);
/// d - |beta|
DegreeBound bound_monomial(const DegreeBound& d, const MultiIndex& beta);
/// d - k for a smooth factor vanishing to order k at 0
DegreeBound bound_vanishing_factor(const DegreeBound& d, int k);
/// (d1 + n1) + (d2 + n2) - (n1 + n2), through scaling degrees
DegreeBound bound_tensor(const DegreeBound& d1, std::size_t n1, const DegreeBound& d2, std::size_t n2);
/// d + essential_order(Q)
DegreeBound bound_operator(const DegreeBound& d, const OperatorExpr& q);

}  // namespace onshell
