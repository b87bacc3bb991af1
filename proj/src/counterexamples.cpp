#include "extconvex/counterexamples.hpp"

#include <cmath>
#include <limits>

#include "extconvex/divisibility.hpp"
#include "extconvex/rng.hpp"

namespace extconvex {

namespace {

int pair_rank(int i, int j) { return multi_index_rank(6, {i, j}); }

}  // namespace

std::vector<std::array<long, 15>> serre_squares() {
  std::vector<std::array<long, 15>> rows;
  auto row = [&](std::initializer_list<std::pair<std::pair<int, int>, long>> entries) {
    std::array<long, 15> r{};
    for (const auto& [ij, v] : entries) r[static_cast<std::size_t>(pair_rank(ij.first, ij.second))] = v;
    rows.push_back(r);
  };
  row({{{1, 2}, 1}});
  row({{{1, 3}, 1}});
  row({{{2, 3}, 1}});
  row({{{4, 5}, 1}});
  row({{{4, 6}, 1}});
  row({{{5, 6}, 1}});
  row({{{1, 4}, 1}, {{3, 5}, -1}, {{2, 6}, -1}});
  row({{{1, 5}, 1}, {{3, 4}, -1}, {{1, 6}, 1}});
  row({{{2, 4}, 1}, {{3, 4}, -1}, {{1, 6}, -1}});
  row({{{2, 5}, 1}});
  row({{{3, 6}, 1}});
  return rows;
}

QuadraticFormOnForms build_serre_form() {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(15, 15);
  for (const auto& r : serre_squares()) {
    Eigen::VectorXd v(15);
    for (int i = 0; i < 15; ++i) v(i) = static_cast<double>(r[static_cast<std::size_t>(i)]);
    M += v * v.transpose();
  }
  return {6, 2, M};
}

SerreViolation serre_violation(const Form& alpha4, double gamma) {
  if (alpha4.n() != 6 || alpha4.degree() != 4)
    throw std::invalid_argument("serre_violation: alpha must lie in Lambda^4(R^6)");
  if (!(gamma > 0.0)) throw std::invalid_argument("serre_violation: gamma must be positive");
  const double a1246 = alpha4.coeff({1, 2, 4, 6});
  const double a1345 = alpha4.coeff({1, 3, 4, 5});
  const double a1245 = alpha4.coeff({1, 2, 4, 5});

  SerreViolation out;
  if (a1246 > 0.0) {
    out.case_id = 1;
    out.b = 1.0;
    out.value = -2.0 * gamma - a1246;
  } else if (a1345 > 0.0) {
    out.case_id = 2;
    out.d = 1.0;
    out.value = -2.0 * gamma - a1345;
  } else if (a1245 + a1345 < 0.0) {
    out.case_id = 3;
    out.c = 1.0;
    out.value = -3.0 * gamma + (a1245 + a1345);
  } else {
    // here a1246 <= 0, a1345 <= 0 and a1245 >= -a1345 >= 0
    out.case_id = 4;
    out.a = 1.0;
    out.value = -3.0 * gamma + (a1246 - a1245);
  }
  return out;
}

JensenWitness serre_jensen_witness() {
  JensenWitness w;
  const std::array<std::array<double, 4>, 4> axes = {
      {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  for (const auto& p : axes) {
    const Form xi = serre_xi_family(p[0], p[1], p[2], p[3]);
    w.points.push_back(xi);
    w.weights.push_back(0.125);
    w.points.push_back(-xi);
    w.weights.push_back(0.125);
  }
  w.moment_residuals = witness_moment_residuals(w, 6, 2);
  return w;
}

namespace {

// e^3 ^ ... ^ e^{k+3} with e^i and e^j removed (3 <= i < j <= k+3).
Form hat_pair(int n, int i, int j) {
  MultiIndex I;
  for (int m = 3; m <= n; ++m)
    if (m != i && m != j) I.push_back(m);
  return Form::basis(n, I);
}

}  // namespace

SverakConstruction build_sverak(int k) {
  if (k < 2) throw std::invalid_argument("build_sverak: need k >= 2");
  SverakConstruction c;
  c.k = k;
  c.n = k + 3;
  const int n = c.n;

  Form alpha(n, k - 1), beta(n, k - 1), gamma(n, k - 1);
  if (k % 2 == 0) {
    const int l = k / 2;
    for (int i = 2; i <= l + 1; ++i) alpha += hat_pair(n, 2 * i, 2 * i + 1);
    beta = hat_pair(n, 3, 2 * l + 3);
    for (int i = 2; i <= l + 1; ++i) gamma += hat_pair(n, 2 * i - 1, 2 * i);
  } else {
    const int l = (k - 1) / 2;
    for (int i = 2; i <= l + 2; ++i) alpha += hat_pair(n, 2 * i - 1, 2 * i);
    if (k == 3) {
      beta = hat_pair(n, 3, 5) + hat_pair(n, 4, 6);
    } else {
      for (int i = 2; i <= l; ++i) beta += hat_pair(n, 2 * i - 1, 2 * i);
    }
    gamma = hat_pair(n, 2 * l + 1, 2 * l + 4) + hat_pair(n, 2 * l + 2, 2 * l + 3);
  }
  c.alpha = alpha;
  c.beta = beta;
  c.gamma = gamma;

  const Form e1 = Form::basis(n, {1});
  const Form e2 = Form::basis(n, {2});
  c.L_basis = {wedge(e1, alpha), wedge(e2, beta), wedge(e1 + e2, gamma)};
  const int d = c.L_basis[0].dim();
  c.P = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < 3; ++i) {
    c.basis_norm_sq[static_cast<std::size_t>(i)] = norm_sq(c.L_basis[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd u = to_eigen(c.L_basis[static_cast<std::size_t>(i)]);
    c.P += u * u.transpose() / c.basis_norm_sq[static_cast<std::size_t>(i)];
  }
  return c;
}

std::array<double, 3> SverakConstruction::coords(const Form& xi) const {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i)
    out[static_cast<std::size_t>(i)] =
        inner(xi, L_basis[static_cast<std::size_t>(i)]) / basis_norm_sq[static_cast<std::size_t>(i)];
  return out;
}

Form SverakConstruction::from_coords(double x, double y, double z) const {
  Form r = L_basis[0] * x;
  r += L_basis[1] * y;
  r += L_basis[2] * z;
  return r;
}

Form SverakConstruction::project(const Form& xi) const {
  const auto xyz = coords(xi);
  return from_coords(xyz[0], xyz[1], xyz[2]);
}

LClaimReport check_L_claim(const SverakConstruction& c, int trials, std::uint64_t seed) {
  LClaimReport rep;
  rep.trials = trials;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    double x = 0, y = 0, z = 0;
    int nonzero = 0;
    while (nonzero < 2) {
      x = rng.normal();
      y = rng.normal();
      z = rng.normal();
      // knock one coordinate out at random so two-nonzero cases get covered
      const int drop = rng.uniform_int(0, 3);
      if (drop == 0) x = 0.0;
      if (drop == 1) y = 0.0;
      if (drop == 2) z = 0.0;
      nonzero = (std::abs(x) > 0.1) + (std::abs(y) > 0.1) + (std::abs(z) > 0.1);
    }
    if (!one_divisible(c.from_coords(x, y, z)).divisible) ++rep.not_divisible;
  }
  rep.all_pass = rep.not_divisible == trials;
  for (int i = 0; i < 3; ++i)
    rep.axis_divisible[static_cast<std::size_t>(i)] =
        one_divisible(c.L_basis[static_cast<std::size_t>(i)]).divisible;
  return rep;
}

double SverakFunction::operator()(const Form& xi) const {
  const auto [x, y, z] = c.coords(xi);
  const double nsq = norm_sq(xi);
  const Form off = xi - c.from_coords(x, y, z);
  return -x * y * z + eps * nsq + eps * nsq * nsq + gamma_pen * norm_sq(off);
}

Form SverakFunction::gradient(const Form& xi) const {
  const auto [x, y, z] = c.coords(xi);
  const double nsq = norm_sq(xi);
  Form g = c.L_basis[0] * (-y * z / c.basis_norm_sq[0]);
  g += c.L_basis[1] * (-x * z / c.basis_norm_sq[1]);
  g += c.L_basis[2] * (-x * y / c.basis_norm_sq[2]);
  g += xi * (2.0 * eps + 4.0 * eps * nsq);
  Form off = xi - c.from_coords(x, y, z);
  g += off * (2.0 * gamma_pen);
  return g;
}

SverakFunction sverak_f_eps(const SverakConstruction& c, double eps, double gamma_pen) {
  if (!(eps > 0.0) || !(gamma_pen > 0.0))
    throw std::invalid_argument("sverak_f_eps: eps and gamma_pen must be positive");
  return {c, eps, gamma_pen};
}

double sverak_second_derivative(const SverakFunction& f, const Form& xi, const Form& eta) {
  const auto xc = f.c.coords(xi);
  const auto ec = f.c.coords(eta);
  const double lg = -2.0 * (xc[0] * ec[1] * ec[2] + xc[1] * ec[0] * ec[2] + xc[2] * ec[0] * ec[1]);
  const Form off = eta - f.c.project(eta);
  const double ip = inner(xi, eta);
  return lg + 2.0 * f.eps * norm_sq(eta) + 4.0 * f.eps * norm_sq(xi) * norm_sq(eta) +
         8.0 * f.eps * ip * ip + 2.0 * f.gamma_pen * norm_sq(off);
}

namespace {

// min over |xi| <= R of <m, xi> + 4 eps |xi|^2 + 8 eps <xi, eta>^2 for a
// unit eta: Sherman-Morrison solve, with a Lagrange bisection when the
// unconstrained minimizer leaves the ball.
double min_linear_plus_quadratic(const Eigen::VectorXd& m, const Eigen::VectorXd& eta,
                                 double eps, double R) {
  auto value = [&](const Eigen::VectorXd& xi) {
    const double dot = xi.dot(eta);
    return m.dot(xi) + 4.0 * eps * xi.squaredNorm() + 8.0 * eps * dot * dot;
  };
  auto solve = [&](double lambda) -> Eigen::VectorXd {
    const double a = 8.0 * eps + 2.0 * lambda;
    const Eigen::VectorXd base = -m / a;
    const double corr = 16.0 * eps * eta.dot(m) / (a * (a + 16.0 * eps));
    return base + corr * eta;
  };
  Eigen::VectorXd xi = solve(0.0);
  if (xi.norm() <= R) return value(xi);
  double lo = 0.0, hi = 1.0;
  while (solve(hi).norm() > R && hi < 1e18) hi *= 2.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (solve(mid).norm() > R)
      lo = mid;
    else
      hi = mid;
  }
  xi = solve(hi);
  return value(xi);
}

// Most negative sampled second derivative of f_eps over |xi| <= R and unit
// decomposable eta.
double adversarial_min(const SverakConstruction& c, double eps, double gamma_pen,
                       double R, int trials, std::uint64_t seed) {
  const int n = c.n, k = c.k;
  Rng root(seed);
  double worst = std::numeric_limits<double>::infinity();

  auto probe = [&](const Form& eta_unit) {
    const auto ec = c.coords(eta_unit);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(eta_unit.dim());
    m += to_eigen(c.L_basis[0]) * (-2.0 * ec[1] * ec[2] / c.basis_norm_sq[0]);
    m += to_eigen(c.L_basis[1]) * (-2.0 * ec[0] * ec[2] / c.basis_norm_sq[1]);
    m += to_eigen(c.L_basis[2]) * (-2.0 * ec[0] * ec[1] / c.basis_norm_sq[2]);
    const Form off = eta_unit - c.project(eta_unit);
    const double constant = 2.0 * eps + 2.0 * gamma_pen * norm_sq(off);
    const double xi_part = min_linear_plus_quadratic(m, to_eigen(eta_unit), eps, R);
    const double total = xi_part + constant;
    worst = std::min(worst, total);
    return total;
  };

  Form best_a(n, k - 1), best_b(n, 1);
  double best_val = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.fork(static_cast<std::uint64_t>(t));
    Form a(n, k - 1), b(n, 1);
    for (int i = 0; i < a.dim(); ++i) a[i] = rng.normal();
    for (int i = 0; i < b.dim(); ++i) b[i] = rng.normal();
    Form eta = wedge(a, b);
    const double nn = norm(eta);
    if (nn < 1e-9) continue;
    eta *= 1.0 / nn;
    const double v = probe(eta);
    if (v < best_val) {
      best_val = v;
      best_a = a;
      best_b = b;
    }
  }
  // local polish around the worst direction
  Rng rng = root.fork(0xabcdefULL);
  for (int t = 0; t < 200; ++t) {
    Form a = best_a, b = best_b;
    for (int i = 0; i < a.dim(); ++i) a[i] += 0.05 * rng.normal();
    for (int i = 0; i < b.dim(); ++i) b[i] += 0.05 * rng.normal();
    Form eta = wedge(a, b);
    const double nn = norm(eta);
    if (nn < 1e-9) continue;
    eta *= 1.0 / nn;
    if (probe(eta) <= worst) {
      best_a = a;
      best_b = b;
    }
  }
  return worst;
}

}  // namespace

CalibrationResult calibrate_gamma_pen(const SverakConstruction& c, double eps,
                                      std::uint64_t seed, double radius, int trials,
                                      int max_doublings) {
  if (!(eps > 0.0)) throw std::invalid_argument("calibrate_gamma_pen: eps must be positive");
  CalibrationResult out;
  double gamma_pen = 1.0;
  for (int i = 0; i <= max_doublings; ++i) {
    const double worst = adversarial_min(c, eps, gamma_pen, radius, trials, seed);
    if (worst >= -1e-8) {
      out.gamma_pen = gamma_pen;
      out.worst_l = worst;
      out.doublings = i;
      return out;
    }
    gamma_pen *= 2.0;
  }
  throw std::runtime_error("calibrate_gamma_pen: doubling budget exhausted");
}

double sverak_integral(const SverakConstruction& c, double eps, double gamma_pen,
                       int quad_points) {
  // eps = 0 is allowed here: the mean of the -xyz term alone is the
  // quantity the quadrature pins down.
  const SverakFunction f{c, eps, gamma_pen};
  const double two_pi = 6.283185307179586476925286766559;
  double acc = 0.0;
  for (int i = 0; i < quad_points; ++i) {
    const double x1 = two_pi * (i + 0.5) / quad_points;
    for (int j = 0; j < quad_points; ++j) {
      const double x2 = two_pi * (j + 0.5) / quad_points;
      const Form dw = c.from_coords(std::cos(x1), std::cos(x2), std::cos(x1 + x2));
      acc += f(dw);
    }
  }
  return acc / (static_cast<double>(quad_points) * quad_points);
}

GridField sverak_warm_start(const SverakConstruction& c, int N) {
  const GridSpec spec{c.n, N, Domain::torus};
  GridField w(spec, c.k - 1);
  const int nc = w.ncomp();
  const double two_pi = 6.283185307179586476925286766559;
  std::vector<std::int64_t> stride(static_cast<std::size_t>(c.n));
  std::int64_t acc = 1;
  for (int a = c.n - 1; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = acc;
    acc *= N;
  }
  for (std::int64_t idx = 0; idx < spec.nodes(); ++idx) {
    const int i1 = static_cast<int>((idx / stride[0]) % N);
    const int i2 = static_cast<int>((idx / stride[1]) % N);
    const double x1 = two_pi * i1 / N;
    const double x2 = two_pi * i2 / N;
    double* o = w.values.data() + idx * nc;
    for (int comp = 0; comp < nc; ++comp)
      o[comp] = (std::sin(x1) * c.alpha[comp] + std::sin(x2) * c.beta[comp] +
                 std::sin(x1 + x2) * c.gamma[comp]) /
                two_pi;
  }
  return w;
}

}  // namespace extconvex
