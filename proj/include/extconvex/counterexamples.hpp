#pragma once

#include <array>

#include "extconvex/fields.hpp"
#include "extconvex/form.hpp"
#include "extconvex/quadratic.hpp"
#include "extconvex/quasiaffine.hpp"

namespace extconvex {

/// The n=6, k=2 quadratic g: sum of eleven squares of linear forms in the
/// components xi^i_j.  g >= 0 and g vanishes on the xi(a,b,c,d) family.
QuadraticFormOnForms build_serre_form();

/// The eleven linear forms of g as integer coefficient rows over the
/// lexicographic basis of Lambda^2(R^6).
std::vector<std::array<long, 15>> serre_squares();

/// The explicit 7-term family on which g vanishes.
template <class S>
BasicForm<S> serre_xi_family(const S& a, const S& b, const S& c, const S& d) {
  BasicForm<S> xi(6, 2);
  xi.set_coeff({1, 4}, b + d);
  xi.set_coeff({1, 5}, c - a);
  xi.set_coeff({1, 6}, a);
  xi.set_coeff({2, 4}, c + a);
  xi.set_coeff({2, 6}, b);
  xi.set_coeff({3, 4}, c);
  xi.set_coeff({3, 5}, d);
  return xi;
}

/// The printed 9-term expansion of (1/2) xi ^ xi for the family above.
template <class S>
BasicForm<S> serre_half_wedge_printed(const S& a, const S& b, const S& c, const S& d) {
  BasicForm<S> w(6, 4);
  w.set_coeff({1, 2, 4, 5}, c * c - a * a);
  w.set_coeff({1, 2, 4, 6}, a * c + a * a - b * b - b * d);
  w.set_coeff({1, 2, 5, 6}, a * b - b * c);
  w.set_coeff({1, 3, 4, 5}, c * c - a * c - b * d - d * d);
  w.set_coeff({1, 3, 4, 6}, a * c);
  w.set_coeff({1, 3, 5, 6}, a * d);
  w.set_coeff({2, 3, 4, 5}, S(0) - c * d - a * d);
  w.set_coeff({2, 3, 4, 6}, b * c);
  w.set_coeff({2, 3, 5, 6}, b * d);
  return w;
}

struct SerreViolation {
  double a = 0, b = 0, c = 0, d = 0;
  double value = 0;  // f(xi) + (1/2)<alpha; xi ^ xi>, always negative
  int case_id = 0;
};

/// Three-case decision procedure showing no alpha in Lambda^4(R^6) can
/// support f = g - gamma |.|^2 from below; gamma must be positive.
SerreViolation serre_violation(const Form& alpha4, double gamma);

/// Explicit Jensen witness for f = g - gamma |.|^2: the four axis members
/// of the family and their negatives, equal weights.
JensenWitness serre_jensen_witness();

/// The L = span{e^1 ^ alpha, e^2 ^ beta, (e^1+e^2) ^ gamma} construction in
/// n = k+3.  The three spanning forms are mutually orthogonal; coordinates
/// (x, y, z) are taken against the unnormalized spanning set via the dual
/// basis, matching the -xyz normal form.
struct SverakConstruction {
  int k = 2, n = 5;
  Form alpha, beta, gamma;       // degree k-1, supported on indices >= 3
  std::array<Form, 3> L_basis;   // degree k
  std::array<double, 3> basis_norm_sq{};
  Eigen::MatrixXd P;             // orthogonal projector onto L

  std::array<double, 3> coords(const Form& xi) const;
  Form from_coords(double x, double y, double z) const;
  Form project(const Form& xi) const;
};

SverakConstruction build_sverak(int k);

struct LClaimReport {
  int trials = 0;
  int not_divisible = 0;            // over random two-nonzero coordinate triples
  bool all_pass = false;
  std::array<bool, 3> axis_divisible{};  // single-coordinate cases, recorded only
};

LClaimReport check_L_claim(const SverakConstruction& c, int trials, std::uint64_t seed);

/// f_eps(xi) = -xyz(P xi) + eps|xi|^2 + eps|xi|^4 + gamma_pen |xi - P xi|^2.
struct SverakFunction {
  SverakConstruction c;
  double eps = 0;
  double gamma_pen = 0;

  double operator()(const Form& xi) const;
  Form gradient(const Form& xi) const;
};

SverakFunction sverak_f_eps(const SverakConstruction& c, double eps, double gamma_pen);

/// Second derivative of t -> f_eps(xi + t eta) at 0.
double sverak_second_derivative(const SverakFunction& f, const Form& xi, const Form& eta);

/// Doubling search for a penalty weight that makes f_eps empirically ext.
/// one convex (sampled adversarial directions; heuristic, the existence is
/// guaranteed but no formula is).
struct CalibrationResult {
  double gamma_pen = 0;
  double worst_l = 0;     // most negative sampled second derivative at acceptance
  int doublings = 0;
  bool heuristic = true;  // always: sampled certificate, not a proof
};
CalibrationResult calibrate_gamma_pen(const SverakConstruction& c, double eps,
                                      std::uint64_t seed, double radius = 10.0,
                                      int trials = 200, int max_doublings = 48);

/// Mean of f_eps over the analytic oscillation d omega (in L pointwise),
/// tensor-product rectangle quadrature on (0, 2pi)^2.
double sverak_integral(const SverakConstruction& c, double eps, double gamma_pen,
                       int quad_points = 256);

/// The oscillation omega sampled on the unit torus for warm-starting the
/// envelope estimate (amplitude rescaled to period 1).
GridField sverak_warm_start(const SverakConstruction& c, int N);

}  // namespace extconvex
