#include <doctest.h>

#include "extconvex/form.hpp"
#include "extconvex/rng.hpp"
#include "oracles.hpp"

using namespace extconvex;

namespace {

Form random_form(int n, int k, Rng& rng) {
  Form f(n, k);
  for (int i = 0; i < f.dim(); ++i) f[i] = rng.normal();
  return f;
}

double max_abs_diff(const Form& a, const Form& b) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("algebra");

TEST_CASE("wedge basis cases") {
  const Form e1 = Form::basis(3, {1});
  const Form e2 = Form::basis(3, {2});
  const Form w = wedge(e1, e2);
  CHECK(w.coeff({1, 2}) == 1.0);
  CHECK(norm_sq(w) == 1.0);

  // <e^{1234}; xi ^ xi> prototype: (e12 + e34)^2 = 2 e^{1234}
  const Form xi = Form::basis(4, {1, 2}) + Form::basis(4, {3, 4});
  const Form sq = wedge(xi, xi);
  CHECK(sq.coeff({1, 2, 3, 4}) == 2.0);
  CHECK(norm_sq(sq) == 4.0);
}

TEST_CASE("wedge of odd form with itself vanishes") {
  Rng rng(7);
  for (int n = 3; n <= 6; ++n)
    for (int k = 1; k <= n / 2; k += 2) {
      const Form x = random_form(n, k, rng);
      CHECK(norm_sq(wedge(x, x)) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("wedge errors") {
  CHECK_THROWS_AS(wedge(Form::basis(3, {1, 2}), Form::basis(3, {1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(wedge(Form::basis(3, {1}), Form::basis(4, {1})), std::invalid_argument);
  CHECK(wedge_or_zero(Form::basis(3, {1, 2}), Form::basis(3, {2, 3})).degree() == 0);
}

TEST_CASE("wedge matches full antisymmetrization oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(2, 5);
    const int p = rng.uniform_int(0, n);
    const int q = rng.uniform_int(0, n - p);
    const Form x = random_form(n, p, rng);
    const Form y = random_form(n, q, rng);
    CHECK(max_abs_diff(wedge(x, y), oracle::wedge(x, y)) < 1e-12);
  }
}

TEST_CASE("wedge associativity and graded anticommutativity") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform_int(3, 6);
    const int p = rng.uniform_int(0, 2);
    const int q = rng.uniform_int(0, 2);
    const int r = rng.uniform_int(0, n - p - q >= 0 ? std::min(2, n - p - q) : 0);
    if (p + q + r > n) continue;
    const Form x = random_form(n, p, rng);
    const Form y = random_form(n, q, rng);
    const Form z = random_form(n, r, rng);
    CHECK(max_abs_diff(wedge(wedge(x, y), z), wedge(x, wedge(y, z))) < 1e-12);
    const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
    CHECK(max_abs_diff(wedge(x, y), wedge(y, x) * sign) < 1e-12);
  }
}

TEST_CASE("exact mode: graded anticommutativity is exact") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5;
    const int p = rng.uniform_int(1, 2), q = rng.uniform_int(1, 2);
    ExactForm x(n, p), y(n, q);
    for (int i = 0; i < x.dim(); ++i) x[i] = Rational(rng.uniform_int(-9, 9), 7);
    for (int i = 0; i < y.dim(); ++i) y[i] = Rational(rng.uniform_int(-9, 9), 3);
    ExactForm lhs = wedge(x, y);
    ExactForm rhs = wedge(y, x);
    if ((p * q) % 2 == 1) rhs = -rhs;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("wedge_power conventions") {
  CHECK_THROWS_AS(wedge_power(Form::basis(3, {1, 2}), 2), std::invalid_argument);
  const Form xi = Form::basis(4, {1, 2}) + Form::basis(4, {3, 4});
  CHECK(wedge_power(xi, 2).coeff({1, 2, 3, 4}) == 2.0);
  CHECK(wedge_power(xi, 0)[0] == 1.0);  // xi^0 = 1
  // repeated factor kills the power
  CHECK(norm_sq(wedge_power(Form::basis(4, {1, 2}), 2)) == 0.0);
}

TEST_CASE("power of a sum of disjoint blocks is s! times the union") {
  // s = 2 and s = 3, cross-checked against the antisymmetrization oracle
  {
    const Form eta = Form::basis(4, {1, 2}) + Form::basis(4, {3, 4});
    const Form brute = oracle::wedge(eta, eta);
    CHECK(max_abs_diff(wedge_power(eta, 2), brute) < 1e-12);
    CHECK(brute.coeff({1, 2, 3, 4}) == doctest::Approx(2.0));
  }
  {
    const Form eta = Form::basis(6, {1, 2}) + Form::basis(6, {3, 4}) + Form::basis(6, {5, 6});
    const Form brute = oracle::wedge(oracle::wedge(eta, eta), eta);
    CHECK(max_abs_diff(wedge_power(eta, 3), brute) < 1e-12);
    CHECK(brute.coeff({1, 2, 3, 4, 5, 6}) == doctest::Approx(6.0));  // 3! sgn(id)
  }
  {
    // non-consecutive blocks pick up the merge sign
    const Form eta = Form::basis(6, {1, 4}) + Form::basis(6, {2, 5});
    const Form brute = oracle::wedge(eta, eta);
    CHECK(max_abs_diff(wedge_power(eta, 2), brute) < 1e-12);
    CHECK(brute.coeff({1, 2, 4, 5}) == doctest::Approx(2.0 * merge_sign({1, 4}, {2, 5})));
  }
}

TEST_CASE("inner product basics") {
  CHECK(inner(Form::basis(4, {1, 2}), Form::basis(4, {1, 2})) == 1.0);
  CHECK(inner(Form::basis(4, {1, 2}), Form::basis(4, {1, 3})) == 0.0);
  const Form alpha = Form::basis(6, {1, 2, 3}) + Form::basis(6, {4, 5, 6});
  CHECK(inner(alpha, alpha) == 2.0);
}

TEST_CASE("hodge star defining relation, exhaustive over basis") {
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k <= std::min(n, 4); ++k) {
      const auto& Is = multi_indices(n, k);
      const Form vol = Form::basis(n, multi_index_at(n, n, 0));
      for (const auto& I : Is)
        for (const auto& J : Is) {
          const Form x = Form::basis(n, I);
          const Form y = Form::basis(n, J);
          const Form lhs = wedge(x, hodge_star(y));
          const Form rhs = vol * inner(x, y);
          CHECK(max_abs_diff(lhs, rhs) == 0.0);  // exact: signs and 0/1 only
        }
    }
}

TEST_CASE("hodge star examples and double star") {
  CHECK(hodge_star(Form::basis(3, {1})).coeff({2, 3}) == 1.0);
  CHECK(hodge_star(Form::scalar(4, 1.0)).coeff({1, 2, 3, 4}) == 1.0);
  Rng rng(23);
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) {
      const Form x = random_form(n, k, rng);
      const double sign = (k * (n - k)) % 2 == 0 ? 1.0 : -1.0;
      CHECK(max_abs_diff(hodge_star(hodge_star(x)), x * sign) < 1e-14);
    }
}

TEST_CASE("interior product: examples and adjunction") {
  CHECK(interior_product(Form::basis(3, {1}), Form::basis(3, {1, 2})).coeff({2}) == 1.0);
  CHECK(norm_sq(interior_product(Form::basis(3, {3}), Form::basis(3, {1, 2}))) == 0.0);
  CHECK_THROWS_AS(interior_product(Form::basis(3, {1}), Form::scalar(3, 2.0)),
                  std::invalid_argument);

  // exhaustive adjunction <b ~| x, y> = <x, b ^ y> over basis triples
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i) {
        const Form b = Form::basis(n, {i});
        for (const auto& I : multi_indices(n, k))
          for (const auto& J : multi_indices(n, k - 1)) {
            const Form x = Form::basis(n, I);
            const Form y = Form::basis(n, J);
            CHECK(inner(interior_product(b, x), y) == inner(x, wedge(b, y)));
          }
      }

  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const int k = rng.uniform_int(1, n);
    const Form b = random_form(n, 1, rng);
    const Form x = random_form(n, k, rng);
    const Form y = random_form(n, k - 1, rng);
    CHECK(inner(interior_product(b, x), y) ==
          doctest::Approx(inner(x, wedge(b, y))).epsilon(1e-12));
  }
}

TEST_CASE("pullback: identity, eigenbasis, minors vs wedge oracle") {
  CHECK(pullback_matrix_eigen(LinearMap::identity(4), 2).isIdentity(1e-14));

  // symmetric T with known eigenpairs: T* epsilon^I = (prod lambda_i) epsilon^I
  Rng rng(31);
  const int n = 4;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::Vector4d lambda(1.5, -2.0, 0.5, 3.0);
  const Eigen::MatrixXd T = Q * lambda.asDiagonal() * Q.transpose();
  LinearMap Tm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Tm.entry(i, j) = T(i, j);
  for (int k = 1; k <= n; ++k) {
    const Eigen::MatrixXd P = pullback_matrix_eigen(Tm, k);
    for (const auto& I : multi_indices(n, k)) {
      // epsilon^I = wedge of eigenvector 1-forms
      Form eI = Form::scalar(n, 1.0);
      double prod = 1.0;
      for (int i : I) {
        Form v(n, 1);
        for (int r = 0; r < n; ++r) v[r] = Q(r, i - 1);
        eI = wedge(eI, v);
        prod *= lambda(i - 1);
      }
      const Eigen::VectorXd image = P * to_eigen(eI);
      CHECK((image - prod * to_eigen(eI)).norm() < 1e-10);
    }
  }

  // 2x2 minors of a random 3x3 matrix vs brute-force wedge of row images
  LinearMap R(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R.entry(i, j) = rng.normal();
  const Eigen::MatrixXd P2 = pullback_matrix_eigen(R, 2);
  const auto& Js = multi_indices(3, 2);
  for (std::size_t c = 0; c < Js.size(); ++c) {
    const Form brute = oracle::pullback_basis(R, Js[c]);
    for (std::size_t r = 0; r < Js.size(); ++r)
      CHECK(P2(static_cast<int>(r), static_cast<int>(c)) ==
            doctest::Approx(brute[static_cast<int>(r)]).epsilon(1e-12));
  }
}

TEST_CASE("pullback multiplicativity") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.uniform_int(3, 5);
    LinearMap T(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T.entry(i, j) = rng.normal();
    const int p = rng.uniform_int(1, 2);
    const int q = rng.uniform_int(1, std::max(1, n - p - 1));
    if (p + q > n) continue;
    const Form x = random_form(n, p, rng);
    const Form y = random_form(n, q, rng);
    const Form lhs = pullback_apply(T, wedge(x, y));
    const Form rhs = wedge(pullback_apply(T, x), pullback_apply(T, y));
    CHECK(max_abs_diff(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("exact pullback multiplicativity") {
  Rng rng(41);
  const int n = 4;
  BasicLinearMap<Rational> T(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) T.entry(i, j) = Rational(rng.uniform_int(-5, 5), 2);
  ExactForm x(n, 1), y(n, 2);
  for (int i = 0; i < x.dim(); ++i) x[i] = Rational(rng.uniform_int(-5, 5));
  for (int i = 0; i < y.dim(); ++i) y[i] = Rational(rng.uniform_int(-5, 5));
  CHECK(pullback_apply(T, wedge(x, y)) == wedge(pullback_apply(T, x), pullback_apply(T, y)));
}

TEST_CASE("hodge transform basics") {
  // norm^2 is invariant under the star isometry
  auto norm2 = [](const Form& f) { return norm_sq(f); };
  auto star_norm2 = hodge_transform(norm2);
  Rng rng(43);
  const Form x = random_form(5, 2, rng);  // f_* acts on Lambda^{n-k}
  CHECK(star_norm2(x) == doctest::Approx(norm_sq(x)).epsilon(1e-14));

  // linear functional transforms by star
  const Form c = random_form(5, 3, rng);
  auto lin = [&](const Form& f) { return inner(c, f); };
  auto star_lin = hodge_transform(lin);
  const Form eta = random_form(5, 2, rng);
  CHECK(star_lin(eta) == doctest::Approx(inner(c, hodge_star(eta))).epsilon(1e-12));
}

TEST_SUITE_END();
