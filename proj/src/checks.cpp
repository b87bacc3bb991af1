#include "extconvex/checks.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>

#include "extconvex/counterexamples.hpp"
#include "extconvex/divisibility.hpp"
#include "extconvex/exact_linalg.hpp"
#include "extconvex/fields.hpp"
#include "extconvex/form.hpp"
#include "extconvex/quadratic.hpp"
#include "extconvex/quasiaffine.hpp"
#include "extconvex/rng.hpp"

namespace extconvex {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------- C1

json check_algebra_kernel(std::uint64_t seed, bool /*full*/, bool& passed) {
  json out;
  long hodge_checks = 0, anticomm_checks = 0, adjunction_checks = 0, pullback_checks = 0;
  bool ok = true;
  Rng rng(seed);

  for (int n = 1; n <= 6 && ok; ++n) {
    const MultiIndex top = multi_index_at(n, n, 0);
    // Hodge defining relation x ^ (*y) = <x;y> e^{1..n}, exact over basis
    for (int k = 0; k <= std::min(n, 4) && ok; ++k) {
      const auto& Is = multi_indices(n, k);
      for (const auto& I : Is)
        for (const auto& J : Is) {
          const ExactForm x = ExactForm::basis(n, I);
          const ExactForm y = ExactForm::basis(n, J);
          ExactForm rhs = ExactForm::basis(n, top);
          rhs *= inner(x, y);
          ok = ok && wedge(x, hodge_star(y)) == rhs;
          ++hodge_checks;
        }
    }
    // graded anticommutativity over basis pairs
    for (int p = 0; p <= std::min(n, 4) && ok; ++p)
      for (int q = 0; p + q <= n && q <= std::min(n, 4) && ok; ++q)
        for (const auto& I : multi_indices(n, p))
          for (const auto& J : multi_indices(n, q)) {
            const ExactForm x = ExactForm::basis(n, I);
            const ExactForm y = ExactForm::basis(n, J);
            ExactForm rhs = wedge(y, x);
            if ((p * q) % 2 == 1) rhs = -rhs;
            ok = ok && wedge(x, y) == rhs;
            ++anticomm_checks;
          }
    // interior-product adjunction over basis triples
    for (int k = 1; k <= std::min(n, 4) && ok; ++k)
      for (int i = 1; i <= n; ++i) {
        const ExactForm b = ExactForm::basis(n, {i});
        for (const auto& I : multi_indices(n, k))
          for (const auto& J : multi_indices(n, k - 1)) {
            const ExactForm x = ExactForm::basis(n, I);
            const ExactForm y = ExactForm::basis(n, J);
            ok = ok && inner(interior_product(b, x), y) == inner(x, wedge(b, y));
            ++adjunction_checks;
          }
      }
    // pullback multiplicativity with a random rational map, exact; the
    // compound matrices are precomputed once per degree
    BasicLinearMap<Rational> T(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T.entry(i, j) = Rational(rng.uniform_int(-6, 6), 3);
    std::vector<std::vector<Rational>> compound(static_cast<std::size_t>(n) + 1);
    for (int d = 0; d <= n; ++d) compound[static_cast<std::size_t>(d)] = pullback_matrix(T, d);
    auto apply = [&](const ExactForm& x) {
      const auto& P = compound[static_cast<std::size_t>(x.degree())];
      const int dim = x.dim();
      ExactForm r(n, x.degree());
      for (int i = 0; i < dim; ++i) {
        Rational acc(0);
        for (int j = 0; j < dim; ++j)
          if (!scalar_is_zero(x[j])) acc += P[static_cast<std::size_t>(i) * dim + j] * x[j];
        r[i] = acc;
      }
      return r;
    };
    for (int p = 0; p <= std::min(n, 4) && ok; ++p)
      for (int q = 0; p + q <= n && q <= std::min(n, 4) && ok; ++q)
        for (const auto& I : multi_indices(n, p))
          for (const auto& J : multi_indices(n, q)) {
            const ExactForm x = ExactForm::basis(n, I);
            const ExactForm y = ExactForm::basis(n, J);
            const ExactForm w = wedge(x, y);
            ++pullback_checks;
            if (w.is_zero()) continue;
            ok = ok && apply(w) == wedge(apply(x), apply(y));
          }
  }

  out["hodge_checks"] = hodge_checks;
  out["anticommutativity_checks"] = anticomm_checks;
  out["adjunction_checks"] = adjunction_checks;
  out["pullback_checks"] = pullback_checks;
  out["exact_mode"] = true;
  passed = ok;
  return out;
}

// ---------------------------------------------------------------- C2

json check_null_lagrangian(std::uint64_t seed, bool full, bool& passed) {
  json out;
  const int N = full ? 32 : 16;
  const GridSpec spec{4, N, Domain::torus};
  PolyaffineRep rep(4, 2);
  rep.c[2] = Form::basis(4, {1, 2, 3, 4});

  Rng rng(seed);
  Form xi(4, 2);
  for (int i = 0; i < xi.dim(); ++i) xi[i] = rng.normal();

  double worst_moment = 0.0, worst_mean = 0.0;
  const int fields = 20;
  for (int t = 0; t < fields; ++t) {
    const auto rep_out = null_lagrangian_check(rep, xi, spec, seed + 1000 + t, 0.2);
    worst_moment = std::max(worst_moment, rep_out.moment_norms[2]);
    worst_mean = std::max(worst_mean, std::abs(rep_out.mean_delta));
  }
  const double h = spec.h();
  out["grid"] = N;
  out["fields"] = fields;
  out["bound_10h"] = 10.0 * h;
  out["worst_s2_moment"] = worst_moment;
  out["worst_mean_delta"] = worst_mean;
  passed = worst_moment <= 10.0 * h && worst_mean <= 10.0 * h;
  return out;
}

// ---------------------------------------------------------------- C3

json check_quasiaffine_roundtrip(std::uint64_t seed, bool full, bool& passed) {
  json out;
  const int reps = full ? 100 : 25;
  bool ok = true;
  double worst_coeff = 0.0, worst_affine = 0.0;
  Rng root(seed);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{4, 2}, {6, 2}, {6, 3}}) {
    for (int t = 0; t < reps && ok; ++t) {
      const PolyaffineRep rep = random_polyaffine(n, k, root.next_u64());
      auto f = [&](const Form& x) { return eval_polyaffine(rep, x); };
      const auto res = extract_representation(f, n, k);
      double dist = 0.0;
      for (std::size_t s = 0; s < rep.c.size(); ++s)
        for (int i = 0; i < rep.c[s].dim(); ++i)
          dist = std::max(dist, std::abs(rep.c[s][i] - res.rep.c[s][i]));
      worst_coeff = std::max(worst_coeff, dist);
      const auto aff = verify_ext_one_affine(f, n, k, 100, root.next_u64());
      worst_affine = std::max(worst_affine, aff.max_rel_residual);
      ok = ok && res.ok && dist <= 1e-9 && aff.max_rel_residual <= 1e-9;
    }
  }
  out["reps_per_case"] = reps;
  out["worst_coefficient_error"] = worst_coeff;
  out["worst_affinity_residual"] = worst_affine;
  passed = ok;
  return out;
}

// ---------------------------------------------------------------- C4

json check_serre(std::uint64_t seed, bool full, bool& passed) {
  json out;
  const QuadraticFormOnForms g = build_serre_form();
  const int restarts = full ? 200 : 60;

  std::vector<double> gammas;
  for (int s = 0; s < 5; ++s)
    gammas.push_back(gamma_infimum(g, restarts, 1e-11, seed + s).gamma);
  const auto [lo_it, hi_it] = std::minmax_element(gammas.begin(), gammas.end());
  const double gamma = *lo_it;
  out["gamma_runs"] = gammas;
  out["gamma"] = gamma;
  out["gamma_spread"] = *hi_it - *lo_it;
  bool ok = gamma > 0.0 && (*hi_it - *lo_it) <= 1e-4;

  // exact identity of the printed expansion and g's vanishing on the family
  Rng rng(seed + 17);
  bool exact_ok = true;
  for (int t = 0; t < 50; ++t) {
    const Rational a(rng.uniform_int(-9, 9), 2), b(rng.uniform_int(-9, 9), 3);
    const Rational c(rng.uniform_int(-9, 9), 5), d(rng.uniform_int(-9, 9), 7);
    const ExactForm xi = serre_xi_family(a, b, c, d);
    ExactForm half = wedge(xi, xi);
    half *= Rational(1, 2);
    exact_ok = exact_ok && half == serre_half_wedge_printed(a, b, c, d);
    Rational gv(0);
    for (const auto& row : serre_squares()) {
      Rational term(0);
      for (int i = 0; i < 15; ++i) term += Rational(row[static_cast<std::size_t>(i)]) * xi[i];
      gv += term * term;
    }
    exact_ok = exact_ok && gv == 0;
  }
  out["exact_family_identity"] = exact_ok;
  ok = ok && exact_ok;

  // violation procedure over random alphas
  int negative = 0;
  const int trials = full ? 1000 : 250;
  for (int t = 0; t < trials; ++t) {
    Form alpha(6, 4);
    for (int i = 0; i < alpha.dim(); ++i) alpha[i] = rng.normal();
    if (serre_violation(alpha, gamma).value < 0.0) ++negative;
  }
  out["violation_trials"] = trials;
  out["violation_negative"] = negative;
  ok = ok && negative == trials;

  // jensen witness from the family certifies non-polyconvexity at gamma
  QuadraticFormOnForms f(6, 2, g.M - gamma * Eigen::MatrixXd::Identity(15, 15));
  const JensenWitness w = serre_jensen_witness();
  const auto outcome = jensen_violation([&](const Form& x) { return f.eval(x); }, w);
  out["jensen_gap"] = outcome.gap;
  ok = ok && outcome.violates;

  passed = ok;
  return out;
}

// ---------------------------------------------------------------- C5

json check_nondivisible_alpha(std::uint64_t seed, bool full, bool& passed) {
  json out;
  const Form alpha = Form::basis(6, {1, 2, 3}) + Form::basis(6, {4, 5, 6});
  const double c = proposition_c_constant(alpha, full ? 200 : 60, seed);
  const double inv_c = 1.0 / c;
  out["inv_c"] = inv_c;
  out["alpha_norm_sq"] = norm_sq(alpha);
  bool ok = inv_c < norm_sq(alpha) - 0.5;

  // grid oracle over the unit b sphere; the inner sup over a is the closed
  // form |b ~| alpha|^2
  const int ppa = full ? 20 : 10;
  {
    double best = 0.0;
    const int angles = 5;
    std::vector<int> idx(angles, 0);
    const double pi = 3.14159265358979323846;
    for (;;) {
      Form b(6, 1);
      double s = 1.0;
      for (int a = 0; a < angles; ++a) {
        const double span = (a == angles - 1) ? 2.0 * pi : pi;
        const double theta = span * (idx[static_cast<std::size_t>(a)] + 0.5) / ppa;
        b[a] = s * std::cos(theta);
        s *= std::sin(theta);
      }
      b[angles] = s;
      best = std::max(best, norm_sq(interior_product(b, alpha)));
      int a = angles - 1;
      while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == ppa)
        idx[static_cast<std::size_t>(a--)] = 0;
      if (a < 0) break;
    }
    out["grid_points_per_angle"] = ppa;
    out["grid_sup"] = best;
    ok = ok && std::abs(best - inv_c) <= 0.05 * inv_c;
  }

  // the (1/2, 1/2; alpha, -alpha) witness certifies non-polyconvexity
  auto f = [&](const Form& x) {
    const double ip = inner(alpha, x);
    return norm_sq(x) - c * ip * ip;
  };
  JensenWitness w;
  w.points = {alpha, -alpha};
  w.weights = {0.5, 0.5};
  w.moment_residuals = witness_moment_residuals(w, 6, 3);
  const auto outcome = jensen_violation(f, w);
  out["jensen_gap"] = outcome.gap;
  ok = ok && outcome.violates;

  passed = ok;
  return out;
}

// ---------------------------------------------------------------- C6

json check_marcellini(std::uint64_t seed, bool full, bool& passed) {
  json out;
  const int cases = full ? 50 : 15;
  const Eigen::MatrixXd G = pfaffian_matrix();
  Rng root(seed);
  bool ok = true;
  double worst_eig = 0.0;
  for (int t = 0; t < cases && ok; ++t) {
    Rng rng = root.fork(static_cast<std::uint64_t>(t));
    Eigen::MatrixXd M(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) M(i, j) = rng.normal();
    QuadraticFormOnForms q0(4, 2, M);
    const double gam = gamma_infimum(q0, 40, 1e-11, rng.next_u64()).gamma;
    QuadraticFormOnForms q(4, 2,
                           q0.M + (std::abs(gam) + 0.5) * Eigen::MatrixXd::Identity(6, 6));
    const auto lambda = marcellini_lambda(q);
    if (!lambda) {
      ok = false;
      break;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.M - *lambda * G,
                                                      Eigen::EigenvaluesOnly);
    worst_eig = std::min(worst_eig, es.eigenvalues()(0));
    ok = ok && es.eigenvalues()(0) >= -1e-8;
  }
  out["cases"] = cases;
  out["worst_certificate_eigenvalue"] = worst_eig;
  passed = ok;
  return out;
}

// ---------------------------------------------------------------- C7

json check_sverak(std::uint64_t seed, bool full, bool& passed) {
  json out;
  bool ok = true;
  for (int k : {2, 3}) {
    json sub;
    const SverakConstruction c = build_sverak(k);

    Eigen::MatrixXd A(3, c.alpha.dim());
    A.row(0) = to_eigen(c.alpha).transpose();
    A.row(1) = to_eigen(c.beta).transpose();
    A.row(2) = to_eigen(c.gamma).transpose();
    const bool indep = Eigen::FullPivLU<Eigen::MatrixXd>(A).rank() == 3;
    sub["independent"] = indep;

    const auto claim = check_L_claim(c, full ? 500 : 120, seed + static_cast<std::uint64_t>(k));
    sub["l_claim_trials"] = claim.trials;
    sub["l_claim_not_divisible"] = claim.not_divisible;

    const double eps = 1e-3;
    const auto cal = calibrate_gamma_pen(c, eps, seed + 10 * static_cast<std::uint64_t>(k), 10.0,
                                         full ? 200 : 80, 48);
    sub["gamma_pen"] = cal.gamma_pen;
    sub["calibration_worst_l"] = cal.worst_l;
    sub["calibration_heuristic"] = cal.heuristic;

    const double integral = sverak_integral(c, eps, cal.gamma_pen, 256);
    const double integral0 = sverak_integral(c, 0.0, 0.0, 256);
    sub["integral_eps"] = integral;
    sub["integral_zero_eps"] = integral0;

    const int N = k == 2 ? 12 : 8;
    const GridField warm = sverak_warm_start(c, N);
    const SverakFunction f = sverak_f_eps(c, eps, cal.gamma_pen);
    EnvelopeOptions opt;
    opt.warm_start = &warm;
    opt.restarts = 0;
    opt.max_iter = full ? 25 : 8;
    opt.seed = seed + 100 + static_cast<std::uint64_t>(k);
    const auto env = envelope_estimate([&](const Form& x) { return f(x); },
                                       [&](const Form& x) { return f.gradient(x); },
                                       Form(c.n, c.k), GridSpec{c.n, N, Domain::torus}, opt);
    sub["envelope_grid"] = N;
    sub["envelope_estimate"] = env.estimate;

    const bool this_ok = indep && claim.all_pass && integral <= -0.2 &&
                         std::abs(integral0 + 0.25) <= 1e-10 && env.estimate < 0.0;
    sub["ok"] = this_ok;
    ok = ok && this_ok;
    out["k" + std::to_string(k)] = sub;
  }
  passed = ok;
  return out;
}

// ---------------------------------------------------------------- C8

json check_minimization(std::uint64_t seed, bool full, bool& passed) {
  json out;
  bool ok = true;

  // quadratic integrand vs the normal-equation solve
  {
    const int N = full ? 64 : 33;
    const GridSpec spec{2, N, Domain::box};
    const double h = spec.h();
    GridField omega0(spec, 0);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        omega0.values[static_cast<std::int64_t>(i) * N + j] = i * h;

    auto f = [](const Form& x) { return norm_sq(x); };
    auto grad = [](const Form& x) { return x * 2.0; };
    MinimizeOptions opt;
    opt.max_iter = 50000;
    opt.tol = 1e-8;
    const auto rep = minimize_dirichlet(f, grad, omega0, opt);

    // independent solve: conjugate gradients on the normal equations
    const std::int64_t count = spec.nodes();
    std::vector<char> interior(static_cast<std::size_t>(count), 1);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i == 0 || j == 0 || i == N - 1 || j == N - 1)
          interior[static_cast<std::size_t>(i) * N + j] = 0;
    auto apply_A = [&](const GridField& w) {
      GridField r = discrete_d_adjoint(discrete_d(w));
      for (std::int64_t i = 0; i < count; ++i)
        if (!interior[static_cast<std::size_t>(i)]) r.values[static_cast<std::size_t>(i)] = 0.0;
      return r;
    };
    GridField rhs(spec, 0);
    {
      const GridField fullv = discrete_d_adjoint(discrete_d(omega0));
      for (std::int64_t i = 0; i < count; ++i)
        rhs.values[static_cast<std::size_t>(i)] =
            interior[static_cast<std::size_t>(i)] ? -fullv.values[static_cast<std::size_t>(i)]
                                                  : 0.0;
    }
    GridField dx(spec, 0), r = rhs, p = rhs;
    double rs = grid_inner(r, r);
    for (int it = 0; it < 20000 && rs > 1e-30; ++it) {
      const GridField Ap = apply_A(p);
      const double alpha = rs / grid_inner(p, Ap);
      for (std::size_t i = 0; i < dx.values.size(); ++i) {
        dx.values[i] += alpha * p.values[i];
        r.values[i] -= alpha * Ap.values[i];
      }
      const double rs_new = grid_inner(r, r);
      for (std::size_t i = 0; i < p.values.size(); ++i)
        p.values[i] = r.values[i] + (rs_new / rs) * p.values[i];
      rs = rs_new;
    }
    GridField x = omega0;
    for (std::size_t i = 0; i < x.values.size(); ++i) x.values[i] += dx.values[i];
    const GridField dwx = discrete_d(x);
    const double oracle_energy = grid_inner(dwx, dwx);

    out["grid"] = N;
    out["descent_energy"] = rep.final_energy;
    out["oracle_energy"] = oracle_energy;
    ok = ok && std::abs(rep.final_energy - oracle_energy) <= 1e-8 * (1.0 + oracle_energy);

    bool monotone = true;
    for (std::size_t i = 1; i < rep.energy_trace.size(); ++i)
      monotone = monotone && rep.energy_trace[i] <= rep.energy_trace[i - 1] + 1e-15;
    out["monotone_trace"] = monotone;
    ok = ok && monotone;
  }

  // ext. quasiaffine integrand: energy flat to O(h) over a bounded run
  {
    const int N = 8;
    const GridSpec spec{4, N, Domain::box};
    PolyaffineRep repq(4, 2);
    repq.c[2] = Form::basis(4, {1, 2, 3, 4});
    const Eigen::MatrixXd S = wedge_pairing_matrix(4, 2, repq.c[2]);
    auto f = [&](const Form& x) { return eval_polyaffine(repq, x); };
    auto grad = [&](const Form& x) {
      const Eigen::VectorXd v = 2.0 * (S * to_eigen(x));
      return from_eigen(4, 2, v);
    };

    // smooth boundary datum sampled from a periodic field
    GridField omega0(spec, 1);
    {
      const GridField smooth =
          random_periodic_field(GridSpec{4, N, Domain::torus}, 1, seed + 7);
      omega0.values = smooth.values;
    }
    const double e0 = [&] {
      const GridField dw = discrete_d(omega0);
      double acc = 0.0;
      Form arg(4, 2);
      for (std::int64_t idx = 0; idx < spec.nodes(); ++idx) {
        for (int comp = 0; comp < dw.ncomp(); ++comp)
          arg[comp] = dw.values[idx * dw.ncomp() + comp];
        acc += f(arg);
      }
      double hn = 1.0;
      for (int i = 0; i < 4; ++i) hn *= spec.h();
      return acc * hn;
    }();

    MinimizeOptions opt;
    opt.max_iter = 100;  // bounded run: the discrete functional is only
                         // flat to O(h) near bounded smooth fields
    opt.tol = 1e-12;
    const auto rep = minimize_dirichlet(f, grad, omega0, opt);
    const double bound = 10.0 * spec.h() * (1.0 + std::abs(e0));
    out["quasiaffine_e0"] = e0;
    out["quasiaffine_final"] = rep.final_energy;
    out["quasiaffine_bound"] = bound;
    out["quasiaffine_iterations"] = rep.iterations;
    ok = ok && std::abs(rep.final_energy - e0) <= bound;
  }

  passed = ok;
  return out;
}

// ---------------------------------------------------------------- C9

json check_hierarchy(std::uint64_t seed, bool full, bool& passed) {
  json out;
  const int total = full ? 200 : 60;
  Rng root(seed);
  bool ok = true;
  int certified = 0, fastpath = 0, planted = 0;
  const std::vector<std::pair<int, int>> spaces{{4, 2}, {5, 2}, {6, 2}, {4, 3}, {5, 3}, {6, 3}};

  for (int t = 0; t < total && ok; ++t) {
    Rng rng = root.fork(static_cast<std::uint64_t>(t));
    const auto [n, k] = spaces[static_cast<std::size_t>(t) % spaces.size()];
    const int d = static_cast<int>(binomial(n, k));
    Eigen::MatrixXd M(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) M(i, j) = rng.normal();

    const bool plant = (t % 3 == 0) && k % 2 == 0 && 2 * k <= n;
    if (plant) {
      // polyconvex by construction: S(beta) plus a PSD part
      Form beta(n, 2 * k);
      for (int i = 0; i < beta.dim(); ++i) beta[i] = rng.normal();
      M = wedge_pairing_matrix(n, k, beta) + 0.3 * (M.transpose() * M);
      ++planted;
    }
    QuadraticFormOnForms q(n, k, M);

    CertificateOptions copt;
    copt.max_iter = 1500;
    copt.polish_iter = 1200;
    const auto cert = polyconvexity_certificate(q, copt);

    if (k % 2 == 1 || 2 * k > n) {
      ++fastpath;
      const bool convex = q.min_eigenvalue() >= -1e-8;
      ok = ok && (cert.status == CertificateStatus::polyconvex) == convex;
      continue;
    }
    if (q.min_eigenvalue() >= 0.0) ok = ok && cert.status == CertificateStatus::polyconvex;
    if (plant) ok = ok && cert.status == CertificateStatus::polyconvex;
    if (cert.status == CertificateStatus::polyconvex) {
      ++certified;
      const double gamma = gamma_infimum(q, 24, 1e-10, rng.next_u64()).gamma;
      ok = ok && gamma >= -1e-6;
    }
  }
  out["total"] = total;
  out["certified"] = certified;
  out["planted"] = planted;
  out["fastpath_cases"] = fastpath;
  passed = ok;
  return out;
}

using CheckFn = json (*)(std::uint64_t, bool, bool&);

struct CheckEntry {
  const char* name;
  CheckFn fn;
};

constexpr CheckEntry kChecks[] = {
    {"C1_algebra_kernel", check_algebra_kernel},
    {"C2_null_lagrangian", check_null_lagrangian},
    {"C3_quasiaffine_roundtrip", check_quasiaffine_roundtrip},
    {"C4_serre_counterexample", check_serre},
    {"C5_nondivisible_alpha", check_nondivisible_alpha},
    {"C6_marcellini_n4", check_marcellini},
    {"C7_sverak_separation", check_sverak},
    {"C8_minimization", check_minimization},
    {"C9_hierarchy", check_hierarchy},
};

}  // namespace

std::vector<std::string> suite_check_names() {
  std::vector<std::string> names;
  for (const auto& c : kChecks) names.emplace_back(c.name);
  return names;
}

CheckResult run_suite_check(const std::string& name, std::uint64_t seed, bool full) {
  for (const auto& c : kChecks) {
    if (name != c.name) continue;
    CheckResult res;
    res.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    res.details = c.fn(seed, full, res.passed);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }
  throw std::invalid_argument("unknown check: " + name);
}

std::vector<CheckResult> run_full_suite(std::uint64_t seed, bool full) {
  std::vector<CheckResult> out;
  for (const auto& c : kChecks) out.push_back(run_suite_check(c.name, seed, full));
  return out;
}

}  // namespace extconvex
