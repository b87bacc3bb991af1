#include <doctest.h>

#include "extconvex/quasiaffine.hpp"
#include "extconvex/rng.hpp"

using namespace extconvex;

namespace {

Form random_form(int n, int k, Rng& rng) {
  Form f(n, k);
  for (int i = 0; i < f.dim(); ++i) f[i] = rng.normal();
  return f;
}

double rep_distance(const PolyaffineRep& a, const PolyaffineRep& b) {
  double m = 0.0;
  for (std::size_t s = 0; s < a.c.size(); ++s)
    for (int i = 0; i < a.c[s].dim(); ++i) m = std::max(m, std::abs(a.c[s][i] - b.c[s][i]));
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("quasiaffine");

TEST_CASE("eval: constant, linear, pfaffian") {
  PolyaffineRep c0(4, 2);
  c0.c[0][0] = 5.0;
  CHECK(eval_polyaffine(c0, Form::basis(4, {1, 3})) == 5.0);

  PolyaffineRep lin(4, 2);
  lin.c[1] = Form::basis(4, {1, 2});
  CHECK(eval_polyaffine(lin, Form::basis(4, {1, 2})) == 1.0);

  PolyaffineRep quad(4, 2);
  quad.c[2] = Form::basis(4, {1, 2, 3, 4});
  CHECK(eval_polyaffine(quad, Form::basis(4, {1, 2}) + Form::basis(4, {3, 4})) == 2.0);
}

TEST_CASE("every polyaffine rep is ext one affine; norm^2 is not") {
  Rng rng(3);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{4, 2}, {6, 2}, {6, 3}}) {
    const PolyaffineRep rep = random_polyaffine(n, k, rng.next_u64());
    auto f = [&](const Form& x) { return eval_polyaffine(rep, x); };
    const auto report = verify_ext_one_affine(f, n, k, 200, 7);
    CHECK(report.passed);
  }
  auto sq = [](const Form& x) { return norm_sq(x); };
  CHECK_FALSE(verify_ext_one_affine(sq, 4, 2, 200, 7).passed);
  auto lin = [](const Form& x) { return x[0] - 2.0 * x[3]; };
  CHECK(verify_ext_one_affine(lin, 4, 2, 200, 7).passed);
}

TEST_CASE("extraction: pfaffian-type and constant") {
  auto f = [](const Form& x) { return inner(Form::basis(4, {1, 2, 3, 4}), wedge(x, x)); };
  const auto res = extract_representation(f, 4, 2);
  CHECK(res.ok);
  CHECK(res.rep.c[2].coeff({1, 2, 3, 4}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(res.rep.c[0][0]) < 1e-10);
  CHECK(norm(res.rep.c[1]) < 1e-10);

  auto c3 = [](const Form&) { return 3.0; };
  const auto cres = extract_representation(c3, 4, 2);
  CHECK(cres.ok);
  CHECK(cres.rep.c[0][0] == doctest::Approx(3.0));
}

TEST_CASE("extraction round trip on random reps") {
  Rng rng(5);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{4, 2}, {6, 2}, {6, 3}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const PolyaffineRep rep = random_polyaffine(n, k, rng.next_u64());
      auto f = [&](const Form& x) { return eval_polyaffine(rep, x); };
      const auto res = extract_representation(f, n, k);
      CHECK(res.ok);
      CHECK(rep_distance(res.rep, rep) < 1e-9);
    }
  }
}

TEST_CASE("exact extraction reproduces integer reps exactly") {
  PolyaffineRep rep(4, 2);
  rep.c[0][0] = 2.0;
  rep.c[1] = Form::basis(4, {1, 3}) * 3.0 - Form::basis(4, {2, 4});
  rep.c[2] = Form::basis(4, {1, 2, 3, 4}) * 5.0;
  auto f = [&](const ExactForm& x) {
    Rational v(2);
    ExactForm c1(4, 2), c2(4, 4);
    c1.set_coeff({1, 3}, 3);
    c1.set_coeff({2, 4}, -1);
    c2.set_coeff({1, 2, 3, 4}, 5);
    v += inner(c1, x);
    v += inner(c2, wedge(x, x));
    return v;
  };
  const auto c = extract_representation_exact(f, 4, 2);
  CHECK(c[0][0] == Rational(2));
  CHECK(c[1].coeff({1, 3}) == Rational(3));
  CHECK(c[1].coeff({2, 4}) == Rational(-1));
  CHECK(c[2].coeff({1, 2, 3, 4}) == Rational(5));
}

TEST_CASE("one-affine sums lemma and corollary identities") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5, k = 2;
    const PolyaffineRep rep = random_polyaffine(n, k, rng.next_u64());
    auto f = [&](const Form& x) { return eval_polyaffine(rep, x); };
    const Form xi = random_form(n, k, rng);
    const Form a = random_form(n, 1, rng);

    const int N = rng.uniform_int(1, 4);
    std::vector<Form> alphas;
    std::vector<double> ts;
    Form shifted = xi;
    double expect = f(xi);
    for (int i = 0; i < N; ++i) {
      alphas.push_back(random_form(n, k - 1, rng));
      ts.push_back(rng.uniform(-2.0, 2.0));
      shifted += wedge(alphas.back(), a) * ts.back();
      expect += ts.back() * (f(xi + wedge(alphas.back(), a)) - f(xi));
    }
    CHECK(f(shifted) == doctest::Approx(expect).epsilon(1e-9));

    // corollary: swapping the 1-form factors
    const Form alpha = random_form(n, k - 1, rng);
    const Form beta = random_form(n, k - 1, rng);
    const Form b = random_form(n, 1, rng);
    const double f0 = f(xi);
    const double lhs = (f(xi + wedge(alpha, a) + wedge(beta, b)) - f0) +
                       (f(xi + wedge(beta, a) + wedge(alpha, b)) - f0);
    const double rhs = (f(xi + wedge(alpha, a)) - f0) + (f(xi + wedge(beta, a)) - f0) +
                       (f(xi + wedge(alpha, b)) - f0) + (f(xi + wedge(beta, b)) - f0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("odd degree: higher wedge powers vanish identically") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    ExactForm x(6, 3);
    for (int i = 0; i < x.dim(); ++i) x[i] = Rational(rng.uniform_int(-9, 9), 4);
    CHECK(wedge(x, x).is_zero());
  }
  // a rep with nonzero c_2 for k = 3 evaluates identically to its canonical form
  Rng rng2(13);
  PolyaffineRep rep = random_polyaffine(6, 3, 17, /*canonical_odd=*/false);
  PolyaffineRep canon = rep;
  canon.c[2] = Form(6, 6);
  for (int trial = 0; trial < 20; ++trial) {
    const Form x = random_form(6, 3, rng2);
    CHECK(eval_polyaffine(rep, x) == doctest::Approx(eval_polyaffine(canon, x)).epsilon(1e-12));
  }
}

TEST_CASE("null lagrangian quadrature") {
  const GridSpec spec{4, 8, Domain::torus};

  PolyaffineRep constant(4, 2);
  constant.c[0][0] = 2.5;
  Rng rng(17);
  const Form xi = random_form(4, 2, rng);
  const auto rep_const = null_lagrangian_check(constant, xi, spec, 3);
  CHECK(rep_const.mean_delta == 0.0);

  PolyaffineRep lin(4, 2);
  lin.c[1] = random_form(4, 2, rng);
  const auto rep_lin = null_lagrangian_check(lin, xi, spec, 5);
  // periodic telescoping: the s=1 moment is exact
  CHECK(rep_lin.moment_norms[1] < 1e-12);
  CHECK(std::abs(rep_lin.mean_delta) < 1e-12);

  PolyaffineRep quad(4, 2);
  quad.c[2] = Form::basis(4, {1, 2, 3, 4});
  const auto rep_quad = null_lagrangian_check(quad, Form(4, 2), spec, 7);
  CHECK(rep_quad.moment_norms[2] <= 10.0 * rep_quad.h);
  CHECK(std::abs(rep_quad.mean_delta) <= 10.0 * rep_quad.h);
}

TEST_CASE("jensen violation: valid witnesses, invalid witnesses, convex f") {
  // alpha = e^{123} + e^{456}: odd degree, alpha ^ alpha = 0 automatically
  const Form alpha = Form::basis(6, {1, 2, 3}) + Form::basis(6, {4, 5, 6});
  JensenWitness w;
  w.points = {alpha, -alpha};
  w.weights = {0.5, 0.5};
  const double c = 1.0;  // 1/c = sup <alpha; a^b>^2 = 1 for this alpha
  auto f = [&](const Form& x) {
    const double ip = inner(alpha, x);
    return norm_sq(x) - c * ip * ip;
  };
  const auto out = jensen_violation(f, w);
  CHECK(out.violates);
  CHECK(out.gap == doctest::Approx(2.0));  // f(0) - f(alpha) = 0 - 2(1 - 2c)

  auto convex = [](const Form& x) { return norm_sq(x) + x[0]; };
  CHECK_FALSE(jensen_violation(convex, w).violates);

  // moment failure: difference direction with a nonzero square
  JensenWitness bad;
  bad.points = {Form::basis(4, {1, 2}) + Form::basis(4, {3, 4}),
                -(Form::basis(4, {1, 2}) + Form::basis(4, {3, 4}))};
  bad.weights = {0.5, 0.5};
  auto any = [](const Form&) { return 0.0; };
  CHECK_THROWS_AS(jensen_violation(any, bad), std::invalid_argument);
}

TEST_CASE("find_jensen_witness certifies -|xi|^2 as non-polyconvex") {
  auto f = [](const Form& x) { return -norm_sq(x); };
  const auto w = find_jensen_witness(f, 4, 2, {}, 8, 23);
  REQUIRE(w.has_value());
  CHECK(w->jensen_gap > 1e-6);
  for (std::size_t s = 1; s < w->moment_residuals.size(); ++s)
    CHECK(w->moment_residuals[s] <= 1e-9);
}

TEST_SUITE_END();
