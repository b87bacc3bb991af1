#pragma once

#include <optional>

#include "extconvex/form.hpp"

namespace extconvex {

/// Outcome of the 1-divisibility test: a k-form is 1-divisible when it can
/// be written as a (k-1)-form wedge a 1-form, equivalently when some
/// nonzero v in Lambda^1 satisfies v ^ x = 0.
template <class S>
struct BasicDivisibilityResult {
  bool divisible = false;
  std::optional<BasicForm<S>> factor_a;  // degree k-1
  std::optional<BasicForm<S>> factor_b;  // degree 1
  int kernel_dim = 0;                    // dim{ v : v ^ x = 0 }
};

using DivisibilityResult = BasicDivisibilityResult<double>;
using ExactDivisibilityResult = BasicDivisibilityResult<Rational>;

DivisibilityResult one_divisible(const Form& x, double rel_tol = 1e-10);
ExactDivisibilityResult one_divisible_exact(const ExactForm& x);

/// Dimension of the smallest subspace F with x in Lambda^k(F): the rank of
/// the C(n,k-1) x n matrix of interior products b -> b ~| x.
int form_rank(const Form& x, double rel_tol = 1e-10);
int form_rank_exact(const ExactForm& x);

}  // namespace extconvex
