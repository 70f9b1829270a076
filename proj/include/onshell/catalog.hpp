#pragma once

// Names of the public library operations. The command line registry maps
// each of them to exactly one subcommand; the coverage test checks both sides.

#include <string_view>
#include <vector>

namespace onshell {

inline const std::vector<std::string_view>& library_operations() {
  static const std::vector<std::string_view> ops = {
      // deltaspace
      "enumerate", "pair", "smap", "tmap", "inner",
      // opalg
      "normal_form", "transpose", "essential_order", "apply_delta", "apply_poly", "operator_equal", "commutator",
      "euler", "dalembert", "lorentz_generator", "casimir", "reflection", "monomial_derivative",
      // spectral
      "restriction", "adjoint_restriction", "is_self_adjoint", "is_normal", "minimal_polynomial", "gram_operator",
      "projection_polynomial", "projector_onto_kernel", "kernel_basis", "range_membership",
      "pseudoinverse_correction",
      // extension
      "existence_check", "onshell_correction", "apply_counterterm", "order_raising_correction",
      "multi_commuting_correction", "casimir_correction", "verify_casimir_hypotheses", "casimir_residue",
      "renorm_map", "sector_operator", "homogeneous_extension_unique", "linearity_precondition",
      // chi
      "theta_counterterm", "chi_projection", "lambda_contraction", "alpha_coefficient", "chi_explicit",
      "chi_crosscheck",
      // degree
      "deg_delta", "bound_derivative", "bound_monomial", "bound_vanishing_factor", "bound_tensor",
      "bound_operator",
      // syntax
      "parse_operator",
  };
  return ops;
}

}  // namespace onshell
