#pragma once

#include <Eigen/Dense>
#include <optional>

#include "extconvex/form.hpp"

namespace extconvex {

/// Quadratic form f(xi) = <M xi; xi> on Lambda^k.  M is symmetrized at
/// construction.
struct QuadraticFormOnForms {
  int n = 0, k = 0;
  Eigen::MatrixXd M;

  QuadraticFormOnForms() = default;
  QuadraticFormOnForms(int n_, int k_, Eigen::MatrixXd M_);

  static QuadraticFormOnForms identity(int n, int k);

  int dim() const { return static_cast<int>(M.rows()); }
  double eval(const Form& x) const;
  double min_eigenvalue() const;
};

/// Matrix S(beta) with S_{IJ} = <beta; e^I ^ e^J>, so that
/// <beta; xi ^ xi> = xi^T S(beta) xi.
Eigen::MatrixXd wedge_pairing_matrix(int n, int k, const Form& beta);

/// The n=4, k=2 quadratic <e^{1234}; xi ^ xi> as a 6x6 matrix.
Eigen::MatrixXd pfaffian_matrix();

/// Hodge transform of a quadratic form: the quadratic on Lambda^{n-k}
/// with f_*(eta) = f(*eta).
QuadraticFormOnForms hodge_transform(const QuadraticFormOnForms& q);

enum class OptimizeSense { minimize, maximize };

/// Result of the extremum search over unit decomposables a ^ b
/// (a in Lambda^{k-1}, b in Lambda^1, |a ^ b| = 1).
struct GammaResult {
  double gamma = 0.0;
  Form argmin_a;
  Form argmin_b;
  int restarts = 0;
  bool converged = false;
};

/// Alternating minimization: fixing one factor, the other solves a
/// generalized symmetric eigenproblem restricted to the complement of the
/// wedge-map kernel.  Monotone in the objective; multistart over random
/// unit initializations.  The returned value is an upper bound on the true
/// infimum (lower bound for the maximize sense).
GammaResult gamma_extremum(const QuadraticFormOnForms& q, OptimizeSense sense,
                           int restarts, double tol, std::uint64_t seed);

inline GammaResult gamma_infimum(const QuadraticFormOnForms& q, int restarts = 64,
                                 double tol = 1e-10, std::uint64_t seed = 1) {
  return gamma_extremum(q, OptimizeSense::minimize, restarts, tol, seed);
}
inline GammaResult gamma_supremum(const QuadraticFormOnForms& q, int restarts = 64,
                                  double tol = 1e-10, std::uint64_t seed = 1) {
  return gamma_extremum(q, OptimizeSense::maximize, restarts, tol, seed);
}

struct OneConvexityResult {
  bool ext_one_convex = false;
  double gamma = 0.0;
  std::optional<Form> witness;  // violating decomposable when not convex
};

OneConvexityResult is_ext_one_convex(const QuadraticFormOnForms& q, double tol = 1e-8,
                                     int restarts = 64, std::uint64_t seed = 1);

enum class CertificateStatus { polyconvex, not_certified };

struct CertificateResult {
  CertificateStatus status = CertificateStatus::not_certified;
  std::optional<Form> beta;  // degree 2k, present when meaningful
  double achieved_min_eig = 0.0;
  int iterations = 0;
};

struct CertificateOptions {
  int max_iter = 5000;
  double tol = 1e-8;
  double step0 = 1.0;
  int polish_iter = 3000;            // target-level polish after the 1/sqrt(t) phase
  const Form* warm_start = nullptr;  // optional initial beta
};

/// Searches beta in Lambda^{2k} maximizing lambda_min(M - S(beta)) by
/// supergradient ascent.  `polyconvex` is certified a posteriori by the
/// eigenvalue check; `not_certified` is inconclusive.
CertificateResult polyconvexity_certificate(const QuadraticFormOnForms& q,
                                            const CertificateOptions& opt = {});

/// n=4, k=2 one-parameter certificate: lambda with M - lambda*G >= -tol,
/// found by ternary search on the concave lambda_min(M - lambda G).
std::optional<double> marcellini_lambda(const QuadraticFormOnForms& q, double tol = 1e-8);

/// The constant c with 1/c = sup{ <alpha; a^b>^2 : |a^b| = 1 } for a
/// non-1-divisible alpha.  Throws if alpha is 1-divisible.
double proposition_c_constant(const Form& alpha, int restarts = 200, std::uint64_t seed = 1);

/// Matrix of a in Lambda^p -> a ^ y (y fixed).
Eigen::MatrixXd wedge_right_matrix(const Form& y, int p);
/// Matrix of b in Lambda^q -> y ^ b (y fixed).
Eigen::MatrixXd wedge_left_matrix(const Form& y, int q);

}  // namespace extconvex
