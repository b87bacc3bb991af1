#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "extconvex/counterexamples.hpp"
#include "extconvex/divisibility.hpp"
#include "extconvex/rng.hpp"

using namespace extconvex;

namespace {

Rational exact_serre_g(const ExactForm& xi) {
  Rational acc(0);
  for (const auto& row : serre_squares()) {
    Rational term(0);
    for (int i = 0; i < 15; ++i) term += Rational(row[static_cast<std::size_t>(i)]) * xi[i];
    acc += term * term;
  }
  return acc;
}

}  // namespace

TEST_SUITE_BEGIN("counterexamples");

TEST_CASE("serre form: basic values and spectrum") {
  const QuadraticFormOnForms g = build_serre_form();
  CHECK(g.eval(Form::basis(6, {1, 2})) == doctest::Approx(1.0));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.M, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(0) >= -1e-12);
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-12);  // lambda_min = 0
  int kernel = 0;
  for (int i = 0; i < 15; ++i)
    if (std::abs(es.eigenvalues()(i)) < 1e-10) ++kernel;
  CHECK(kernel == 4);  // 15 coordinates, 11 independent squares

  // integer entries
  bool all_integer = true;
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) all_integer &= g.M(i, j) == std::round(g.M(i, j));
  CHECK(all_integer);
}

TEST_CASE("xi family: printed expansion holds exactly") {
  // push a spot value first: (a,b,c,d) = (0,1,0,0)
  const Form xi = serre_xi_family(0.0, 1.0, 0.0, 0.0);
  CHECK(norm_sq(xi - (Form::basis(6, {1, 4}) + Form::basis(6, {2, 6}))) == 0.0);
  const Form half = wedge(xi, xi) * 0.5;
  CHECK(half.coeff({1, 2, 4, 6}) == doctest::Approx(-1.0));
  CHECK(norm_sq(half) == doctest::Approx(1.0));

  CHECK(serre_xi_family(0.0, 0.0, 0.0, 0.0).is_zero());

  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const Rational a(rng.uniform_int(-9, 9), 2);
    const Rational b(rng.uniform_int(-9, 9), 3);
    const Rational c(rng.uniform_int(-9, 9), 5);
    const Rational d(rng.uniform_int(-9, 9), 7);
    const ExactForm xe = serre_xi_family(a, b, c, d);
    ExactForm half_sq = wedge(xe, xe);
    half_sq *= Rational(1, 2);
    CHECK(half_sq == serre_half_wedge_printed(a, b, c, d));
    CHECK(exact_serre_g(xe) == Rational(0));  // g vanishes on the family
  }
}

TEST_CASE("serre violation: paper cases and random alphas") {
  const double gamma = 0.1;  // any positive value; the real one is computed elsewhere

  Form a1(6, 4);
  a1.set_coeff({1, 2, 4, 6}, 1.0);
  const auto v1 = serre_violation(a1, gamma);
  CHECK(v1.case_id == 1);
  CHECK(v1.b == 1.0);
  CHECK(v1.value == doctest::Approx(-2.0 * gamma - 1.0));

  const auto v0 = serre_violation(Form(6, 4), gamma);
  CHECK(v0.case_id == 4);
  CHECK(v0.a == 1.0);
  CHECK(v0.value == doctest::Approx(-3.0 * gamma));

  const QuadraticFormOnForms g = build_serre_form();
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Form alpha(6, 4);
    for (int i = 0; i < alpha.dim(); ++i) alpha[i] = rng.normal();
    const auto v = serre_violation(alpha, gamma);
    CHECK(v.value < 0.0);
    // the reported value matches a direct evaluation of f + (1/2)<alpha; xi^xi>
    const Form xi = serre_xi_family(v.a, v.b, v.c, v.d);
    const double direct =
        g.eval(xi) - gamma * norm_sq(xi) + 0.5 * inner(alpha, wedge(xi, xi));
    CHECK(v.value == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("serre gamma is positive and f = g - gamma|.|^2 splits the notions") {
  const QuadraticFormOnForms g = build_serre_form();
  const GammaResult gamma = gamma_infimum(g, 60, 1e-11, 7);
  CHECK(gamma.gamma > 1e-4);

  // ext. one convex at 0.9 gamma
  QuadraticFormOnForms f09(6, 2,
                           g.M - 0.9 * gamma.gamma * Eigen::MatrixXd::Identity(15, 15));
  CHECK(is_ext_one_convex(f09, 1e-8, 40, 11).ext_one_convex);

  // at gamma itself the infimum sits at zero
  QuadraticFormOnForms f(6, 2, g.M - gamma.gamma * Eigen::MatrixXd::Identity(15, 15));
  const double resid = gamma_infimum(f, 40, 1e-11, 13).gamma;
  CHECK(std::abs(resid) < 1e-6);

  // Jensen witness built from the family certifies non-polyconvexity
  const JensenWitness w = serre_jensen_witness();
  for (std::size_t s = 1; s < w.moment_residuals.size(); ++s)
    CHECK(w.moment_residuals[s] < 1e-12);
  auto fv = [&](const Form& x) { return f.eval(x); };
  const auto out = jensen_violation(fv, w);
  CHECK(out.violates);
  CHECK(out.gap == doctest::Approx(2.5 * gamma.gamma).epsilon(1e-6));

  // the randomized family search also finds one
  std::vector<Form> pool;
  Rng rng(17);
  for (int i = 0; i < 24; ++i)
    pool.push_back(serre_xi_family(rng.normal(), rng.normal(), rng.normal(), rng.normal()));
  const auto found = find_jensen_witness(fv, 6, 2, pool, 10, 19);
  REQUIRE(found.has_value());
  CHECK(found->jensen_gap > 1e-8);
}

TEST_CASE("sverak construction: explicit low-k forms and invariants") {
  const SverakConstruction c2 = build_sverak(2);
  CHECK(norm_sq(c2.alpha - Form::basis(5, {3})) == 0.0);
  CHECK(norm_sq(c2.beta - Form::basis(5, {4})) == 0.0);
  CHECK(norm_sq(c2.gamma - Form::basis(5, {5})) == 0.0);

  const SverakConstruction c3 = build_sverak(3);
  CHECK(norm_sq(c3.beta - (Form::basis(6, {4, 6}) + Form::basis(6, {3, 5}))) == 0.0);

  for (int k = 2; k <= 6; ++k) {
    const SverakConstruction c = build_sverak(k);
    // alpha, beta, gamma linearly independent (they are 0/1 vectors here)
    Eigen::MatrixXd A(3, c.alpha.dim());
    A.row(0) = to_eigen(c.alpha).transpose();
    A.row(1) = to_eigen(c.beta).transpose();
    A.row(2) = to_eigen(c.gamma).transpose();
    CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(A).rank() == 3);
    // support on indices >= 3
    for (const auto& I : multi_indices(c.n, c.k - 1)) {
      if (I.empty() || I[0] >= 3) continue;
      CHECK(c.alpha.coeff(I) == 0.0);
      CHECK(c.beta.coeff(I) == 0.0);
      CHECK(c.gamma.coeff(I) == 0.0);
    }
    // mutually orthogonal spanning forms, projector identities
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        CHECK(inner(c.L_basis[static_cast<std::size_t>(i)],
                    c.L_basis[static_cast<std::size_t>(j)]) == 0.0);
    CHECK((c.P * c.P - c.P).norm() < 1e-12);
    CHECK((c.P - c.P.transpose()).norm() < 1e-12);
    // coords round trip on L
    const Form xi = c.from_coords(0.3, -1.2, 0.7);
    const auto xyz = c.coords(xi);
    CHECK(xyz[0] == doctest::Approx(0.3));
    CHECK(xyz[1] == doctest::Approx(-1.2));
    CHECK(xyz[2] == doctest::Approx(0.7));
    CHECK(norm(c.project(xi) - xi) < 1e-12);
  }
}

TEST_CASE("L claim: two nonzero coordinates exclude divisibility") {
  for (int k = 2; k <= 5; ++k) {
    const SverakConstruction c = build_sverak(k);
    const auto rep = check_L_claim(c, 100, 23);
    CHECK(rep.all_pass);
    CHECK(rep.not_divisible == 100);
  }
  // explicit sanity: (1,1,0) not divisible, (1,0,0) divisible for k=2
  const SverakConstruction c2 = build_sverak(2);
  CHECK_FALSE(one_divisible(c2.from_coords(1, 1, 0)).divisible);
  CHECK(one_divisible(c2.from_coords(1, 0, 0)).divisible);
  CHECK(check_L_claim(c2, 10, 5).axis_divisible[0]);
}

TEST_CASE("f_eps values, gradient, and the -xyz second derivative") {
  const SverakConstruction c = build_sverak(2);
  const double eps = 0.01, gp = 7.0;
  const SverakFunction f = sverak_f_eps(c, eps, gp);

  const Form onL = c.from_coords(1, 1, 1);
  const double nsq = norm_sq(onL);
  CHECK(f(onL) == doctest::Approx(-1.0 + eps * (nsq + nsq * nsq)));

  // off-L direction pays the penalty
  Form off = Form::basis(5, {3, 4});  // orthogonal to all of L
  CHECK(std::abs(inner(off, c.L_basis[0])) + std::abs(inner(off, c.L_basis[1])) +
            std::abs(inner(off, c.L_basis[2])) ==
        0.0);
  CHECK(f(off) == doctest::Approx(eps * 2.0 + gp));  // |off|^2 = 1

  // gradient against central differences
  Rng rng(29);
  Form xi(5, 2);
  for (int i = 0; i < xi.dim(); ++i) xi[i] = rng.normal();
  const Form grad = f.gradient(xi);
  for (int i = 0; i < xi.dim(); ++i) {
    Form xp = xi, xm = xi;
    const double h = 1e-6;
    xp[i] += h;
    xm[i] -= h;
    CHECK(grad[i] == doctest::Approx((f(xp) - f(xm)) / (2 * h)).epsilon(1e-4));
  }

  // L_g vanishes along 1-divisible directions inside L
  const SverakFunction g_only{c, 0.0, 0.0};
  for (int axis = 0; axis < 3; ++axis) {
    Form eta = c.L_basis[static_cast<std::size_t>(axis)];
    eta *= 1.0 / norm(eta);
    const Form anyxi = c.from_coords(0.4, 0.9, -1.3);
    CHECK(std::abs(sverak_second_derivative(g_only, anyxi, eta)) < 1e-12);
  }

  // monotone in gamma_pen
  const SverakFunction f2{c, eps, 2 * gp};
  const Form eta = wedge(Form::basis(5, {1}) + Form::basis(5, {3}), Form::basis(5, {4}));
  CHECK(sverak_second_derivative(f2, xi, eta) >= sverak_second_derivative(f, xi, eta) - 1e-12);
}

TEST_CASE("gamma_pen = 0 admits a violating pair for small eps") {
  const SverakConstruction c = build_sverak(2);
  const SverakFunction f{c, 0.01, 0.0};
  // eta = (e1+e2) ^ (e3+e5)/2 has coords (1/2, 0, 1/2); xi along u2 exposes it
  Form eta = wedge(Form::basis(5, {1}) + Form::basis(5, {2}),
                   Form::basis(5, {3}) + Form::basis(5, {5}));
  eta *= 1.0 / norm(eta);
  const Form xi = c.L_basis[1] * 6.25;
  CHECK(sverak_second_derivative(f, xi, eta) < -0.5);
}

TEST_CASE("calibration accepts a finite penalty and the integral stays negative") {
  const SverakConstruction c = build_sverak(2);
  const auto cal = calibrate_gamma_pen(c, 0.1, 31, 10.0, 120, 40);
  CHECK(cal.gamma_pen >= 1.0);
  CHECK(cal.worst_l >= -1e-8);
  CHECK(cal.heuristic);

  // quadrature oracle: mean of g(d omega) alone is -1/4
  CHECK(sverak_integral(c, 0.0, 0.0, 256) == doctest::Approx(-0.25).epsilon(1e-10));
  // small eps keeps it clearly negative; huge eps flips the sign
  CHECK(sverak_integral(c, 1e-3, cal.gamma_pen, 128) < -0.2);
  CHECK(sverak_integral(c, 1e3, cal.gamma_pen, 64) > 0.0);
}

TEST_CASE("warm started envelope estimate is negative") {
  const SverakConstruction c = build_sverak(2);
  const double eps = 1e-3;
  const SverakFunction f = sverak_f_eps(c, eps, 64.0);
  const GridField warm = sverak_warm_start(c, 8);
  EnvelopeOptions opt;
  opt.warm_start = &warm;
  opt.restarts = 0;
  opt.max_iter = 30;
  opt.seed = 5;
  const auto res = envelope_estimate([&](const Form& x) { return f(x); },
                                     [&](const Form& x) { return f.gradient(x); },
                                     Form(5, 2), GridSpec{5, 8, Domain::torus}, opt);
  CHECK(res.zero_field_value == doctest::Approx(0.0));
  CHECK(res.estimate < -0.1);
}

TEST_SUITE_END();
