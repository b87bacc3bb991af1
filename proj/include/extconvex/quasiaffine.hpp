#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "extconvex/fields.hpp"
#include "extconvex/form.hpp"

namespace extconvex {

/// f(xi) = c_0 + sum_{s>=1} <c_s; xi^s> with c_s in Lambda^{sk}, the
/// general ext. quasiaffine function.  The list always has floor(n/k)+1
/// entries (c_0 is a degree-0 scalar form).
struct PolyaffineRep {
  int n = 0, k = 1;
  std::vector<Form> c;

  PolyaffineRep() = default;
  PolyaffineRep(int n_, int k_);
  PolyaffineRep(int n_, int k_, std::vector<Form> coeffs);

  int max_power() const { return n / k; }
};

double eval_polyaffine(const PolyaffineRep& rep, const Form& x);

PolyaffineRep random_polyaffine(int n, int k, std::uint64_t seed, bool canonical_odd = true);

struct AffinityReport {
  int samples = 0;
  double max_rel_residual = 0.0;
  bool passed = false;
  double tol = 0.0;
};

/// Samples g(t) = f(xi + t a ^ b) along random decomposable directions and
/// checks |g(t) - g(0) - t (g(1) - g(0))| against tol * scale.
AffinityReport verify_ext_one_affine(const FormFunction& f, int n, int k, int samples,
                                     std::uint64_t seed, double tol = 1e-9);

struct ExtractionResult {
  PolyaffineRep rep;
  double max_residual = 0.0;  // reconstruction residual on random samples
  bool ok = false;
};

/// Recovers the coefficient forms of an ext. one affine polynomial:
/// homogeneous parts are separated through a Vandermonde solve at
/// t = 1..floor(n/k)+1, and the coefficient of c_s on e^J is
/// f_s(sum_m e^{I^m}) / s! over the consecutive k-blocks I^m of J.
ExtractionResult extract_representation(const FormFunction& f, int n, int k,
                                        double tol = 1e-8, std::uint64_t seed = 99);

/// Exact-rational extraction for exactly evaluable inputs.
std::vector<ExactForm> extract_representation_exact(
    const std::function<Rational(const ExactForm&)>& f, int n, int k);

struct NullLagrangianReport {
  double mean_delta = 0.0;              // mean f(xi + dw) - f(xi)
  std::vector<double> moment_norms;     // per s: |mean (xi+dw)^s - xi^s|_inf
  double h = 0.0;
};

/// Quadrature check of the null-Lagrangian identity on a periodic grid
/// with a random smooth test field.
NullLagrangianReport null_lagrangian_check(const PolyaffineRep& rep, const Form& xi,
                                           const GridSpec& spec, std::uint64_t seed,
                                           double amplitude = 0.3);

struct JensenWitness {
  std::vector<double> weights;       // nonnegative, sum 1
  std::vector<Form> points;          // degree k
  std::vector<double> moment_residuals;  // per s = 1..floor(n/k)
  double jensen_gap = 0.0;
};

struct JensenOutcome {
  bool violates = false;
  double gap = 0.0;
};

/// Validates the moment condition (residuals <= moment_tol, else throws)
/// and reports whether f(sum t_i xi_i) > sum t_i f(xi_i) + tol: a
/// certified proof of non-ext.-polyconvexity.
JensenOutcome jensen_violation(const FormFunction& f, const JensenWitness& witness,
                               double tol = 1e-9, double moment_tol = 1e-9);

std::vector<double> witness_moment_residuals(const JensenWitness& witness, int n, int k);

/// Randomized search for a violating witness among symmetric point sets
/// {+/- xi_j} whose squares cancel in a nonnegative combination.  The
/// caller may seed the candidate pool; remaining candidates are random.
std::optional<JensenWitness> find_jensen_witness(const FormFunction& f, int n, int k,
                                                 const std::vector<Form>& pool,
                                                 int batches, std::uint64_t seed,
                                                 double tol = 1e-9);

}  // namespace extconvex
