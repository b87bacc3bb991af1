// extconvex: analyzers for convexity notions of functions of differential
// forms, the reproduction suite, and grid minimization front ends.

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <fstream>
#include <iostream>
#include <optional>

#include "extconvex/checks.hpp"
#include "extconvex/counterexamples.hpp"
#include "extconvex/divisibility.hpp"
#include "extconvex/fields.hpp"
#include "extconvex/json_io.hpp"
#include "extconvex/quadratic.hpp"
#include "extconvex/quasiaffine.hpp"
#include "extconvex/rng.hpp"

namespace {

using nlohmann::json;
using namespace extconvex;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << report.dump(2) << "\n";
  }
}

json base_report(const std::string& command, std::uint64_t seed) {
  json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["seed"] = seed;
  return j;
}

// Named evaluable functions for the envelope/minimize/quasiaffine fronts.
struct Builtin {
  FormFunction f;
  FormGradient grad;
};

Builtin make_builtin(const std::string& spec_str, int n, int k, double eps, double gamma_pen,
                     std::uint64_t seed) {
  const std::string prefix = "builtin:";
  if (spec_str.rfind(prefix, 0) != 0)
    throw std::invalid_argument("--fn expects builtin:<name>, got " + spec_str);
  const std::string name = spec_str.substr(prefix.size());

  if (name == "norm_sq") {
    return {[](const Form& x) { return norm_sq(x); }, [](const Form& x) { return x * 2.0; }};
  }
  if (name == "pfaffian") {
    if (n != 2 * k) throw std::invalid_argument("builtin:pfaffian needs n = 2k");
    const Form vol = Form::basis(n, multi_index_at(n, n, 0));
    const Eigen::MatrixXd S = wedge_pairing_matrix(n, k, vol);
    return {[S, n, k](const Form& x) { return to_eigen(x).dot(S * to_eigen(x)); },
            [S, n, k](const Form& x) { return from_eigen(n, k, 2.0 * (S * to_eigen(x))); }};
  }
  if (name == "serre_g" || name == "serre_f") {
    if (n != 6 || k != 2) throw std::invalid_argument("builtin:" + name + " needs n=6, k=2");
    QuadraticFormOnForms g = build_serre_form();
    Eigen::MatrixXd M = g.M;
    if (name == "serre_f") {
      const double gamma = gamma_infimum(g, 200, 1e-11, seed).gamma;
      M -= gamma * Eigen::MatrixXd::Identity(15, 15);
    }
    return {[M](const Form& x) { return to_eigen(x).dot(M * to_eigen(x)); },
            [M](const Form& x) { return from_eigen(6, 2, 2.0 * (M * to_eigen(x))); }};
  }
  if (name == "sverak") {
    if (n != k + 3) throw std::invalid_argument("builtin:sverak needs n = k+3");
    const SverakConstruction c = build_sverak(k);
    const SverakFunction f = sverak_f_eps(c, eps, gamma_pen);
    return {[f](const Form& x) { return f(x); }, [f](const Form& x) { return f.gradient(x); }};
  }
  throw std::invalid_argument(
      "unknown builtin \"" + name +
      "\" (available: norm_sq, pfaffian, serre_g, serre_f, sverak)");
}

json gamma_to_json(const GammaResult& g) {
  json j;
  j["gamma"] = g.gamma;
  j["argmin_a"] = form_to_json(g.argmin_a);
  j["argmin_b"] = form_to_json(g.argmin_b);
  j["restarts"] = g.restarts;
  j["converged"] = g.converged;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"convexity notions for functions of differential forms"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::string out_path;
  app.add_option("--seed", seed, "seed for all randomized procedures")->capture_default_str();
  app.add_option("--out", out_path, "write the JSON report to this path instead of stdout");

  // ------------------------------------------------------------ algebra
  auto* algebra = app.add_subcommand("algebra", "exterior algebra operations on JSON forms");
  std::string alg_op, alg_x, alg_y;
  int alg_s = 2;
  bool alg_exact = false;
  algebra->add_option("op", alg_op, "wedge | power | inner | star | interior")->required();
  algebra->add_option("--x", alg_x, "first operand (form JSON file)")->required();
  algebra->add_option("--y", alg_y, "second operand, for wedge/inner/interior");
  algebra->add_option("--s", alg_s, "exponent for power")->capture_default_str();
  algebra->add_flag("--exact", alg_exact, "exact rational arithmetic");

  // ---------------------------------------------------------- divisible
  auto* divisible = app.add_subcommand("divisible", "1-divisibility of a k-form");
  std::string div_form;
  bool div_exact = false;
  double div_tol = 1e-10;
  divisible->add_option("--form", div_form, "form JSON file")->required();
  divisible->add_flag("--exact", div_exact, "exact rational kernel test");
  divisible->add_option("--rel-tol", div_tol, "relative singular value threshold")
      ->capture_default_str();

  // ----------------------------------------------------------- classify
  auto* classify = app.add_subcommand("classify", "convexity notions of a quadratic form");
  std::string cls_matrix;
  int cls_restarts = 64;
  double cls_tol = 1e-8;
  classify->add_option("--quadratic", cls_matrix, "matrix JSON file {n,k,M}")->required();
  classify->add_option("--restarts", cls_restarts, "multistart count")->capture_default_str();
  classify->add_option("--tol", cls_tol, "nonnegativity tolerance")->capture_default_str();

  // --------------------------------------------------------- quasiaffine
  auto* qa = app.add_subcommand("quasiaffine", "ext. quasiaffine analysis");
  qa->require_subcommand(1);
  auto* qa_extract = qa->add_subcommand("extract", "recover the coefficient forms");
  auto* qa_verify = qa->add_subcommand("verify", "sample the one-affinity residual");
  std::string qa_fn;
  int qa_n = 4, qa_k = 2, qa_samples = 200;
  double qa_eps = 1e-3, qa_gamma_pen = 64.0;
  for (auto* sub : {qa_extract, qa_verify}) {
    sub->add_option("--fn", qa_fn, "builtin:<name>")->required();
    sub->add_option("--n", qa_n)->required();
    sub->add_option("--k", qa_k)->required();
    sub->add_option("--eps", qa_eps, "epsilon for builtin:sverak");
    sub->add_option("--gamma-pen", qa_gamma_pen, "penalty for builtin:sverak");
  }
  qa_verify->add_option("--samples", qa_samples)->capture_default_str();

  // ----------------------------------------------------------- reproduce
  auto* reproduce = app.add_subcommand("reproduce", "paper reproduction runs");
  reproduce->require_subcommand(1);
  auto* rep_serre = reproduce->add_subcommand("serre", "the n=6, k=2 quadratic counterexample");
  int serre_restarts = 200;
  rep_serre->add_option("--restarts", serre_restarts)->capture_default_str();
  auto* rep_sverak = reproduce->add_subcommand("sverak", "the k >= 2 oscillation counterexample");
  int sv_k = 2, sv_grid = 0;
  double sv_eps = 1e-3;
  rep_sverak->add_option("--k", sv_k, "form degree (dimension is k+3)")->capture_default_str();
  rep_sverak->add_option("--eps", sv_eps)->capture_default_str();
  rep_sverak->add_option("--grid", sv_grid, "envelope grid (default 12 for k=2, 8 otherwise)");

  // ------------------------------------------------------------ envelope
  auto* envelope = app.add_subcommand("envelope", "quasiconvex envelope estimate at xi");
  std::string env_fn, env_xi;
  int env_grid = 8, env_restarts = 2, env_max_iter = 400;
  double env_eps = 1e-3, env_gamma_pen = 64.0;
  bool env_warm = false;
  envelope->add_option("--fn", env_fn, "builtin:<name>")->required();
  envelope->add_option("--xi", env_xi, "base form JSON file")->required();
  envelope->add_option("--grid", env_grid, "points per axis")->capture_default_str();
  envelope->add_option("--restarts", env_restarts)->capture_default_str();
  envelope->add_option("--max-iter", env_max_iter)->capture_default_str();
  envelope->add_option("--eps", env_eps, "epsilon for builtin:sverak")->capture_default_str();
  envelope->add_option("--gamma-pen", env_gamma_pen, "penalty for builtin:sverak")
      ->capture_default_str();
  envelope->add_flag("--sverak-warm-start", env_warm,
                     "start from the analytic oscillation (builtin:sverak only)");

  // ------------------------------------------------------------ minimize
  auto* minimize = app.add_subcommand("minimize", "Dirichlet minimization of sum f(d omega)");
  std::string min_fn, min_boundary, min_snapshot;
  int min_grid = 17, min_max_iter = 50000;
  double min_tol = 1e-6, min_eps = 1e-3, min_gamma_pen = 64.0;
  minimize->add_option("--fn", min_fn, "builtin:<name>")->required();
  minimize->add_option("--boundary", min_boundary,
                       "grid-field file for omega0, or builtin:x1 (k=1 datum)")
      ->required();
  minimize->add_option("--grid", min_grid, "points per axis (builtin boundary)")
      ->capture_default_str();
  minimize->add_option("--max-iter", min_max_iter)->capture_default_str();
  minimize->add_option("--tol", min_tol)->capture_default_str();
  minimize->add_option("--eps", min_eps)->capture_default_str();
  minimize->add_option("--gamma-pen", min_gamma_pen)->capture_default_str();
  minimize->add_option("--snapshot", min_snapshot, "write d omega to this grid-field file");

  // --------------------------------------------------------------- suite
  auto* suite = app.add_subcommand("suite", "acceptance and reproduction checks");
  bool suite_full = false;
  std::string suite_only;
  suite->add_flag("--full", suite_full, "full problem sizes (slower)");
  suite->add_option("--check", suite_only, "run a single named check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit 1; --help is 0
  }

  // ---------------------------------------------------------------------
  if (*algebra) {
    json rep = base_report("algebra", seed);
    rep["op"] = alg_op;
    rep["exact"] = alg_exact;
    auto need_y = [&] {
      if (alg_y.empty()) throw std::invalid_argument("algebra " + alg_op + " needs --y");
    };
    if (alg_exact) {
      const ExactForm x = exact_form_from_json(load_json(alg_x));
      if (alg_op == "wedge") {
        need_y();
        rep["result"] = form_to_json(wedge(x, exact_form_from_json(load_json(alg_y))));
      } else if (alg_op == "power") {
        rep["result"] = form_to_json(wedge_power(x, alg_s));
      } else if (alg_op == "inner") {
        need_y();
        rep["result"] = inner(x, exact_form_from_json(load_json(alg_y))).str();
      } else if (alg_op == "star") {
        rep["result"] = form_to_json(hodge_star(x));
      } else if (alg_op == "interior") {
        need_y();
        rep["result"] = form_to_json(interior_product(x, exact_form_from_json(load_json(alg_y))));
      } else {
        throw std::invalid_argument("unknown algebra op: " + alg_op);
      }
    } else {
      const Form x = form_from_json(load_json(alg_x));
      if (alg_op == "wedge") {
        need_y();
        rep["result"] = form_to_json(wedge(x, form_from_json(load_json(alg_y))));
      } else if (alg_op == "power") {
        rep["result"] = form_to_json(wedge_power(x, alg_s));
      } else if (alg_op == "inner") {
        need_y();
        rep["result"] = inner(x, form_from_json(load_json(alg_y)));
      } else if (alg_op == "star") {
        rep["result"] = form_to_json(hodge_star(x));
      } else if (alg_op == "interior") {
        need_y();
        rep["result"] = form_to_json(interior_product(x, form_from_json(load_json(alg_y))));
      } else {
        throw std::invalid_argument("unknown algebra op: " + alg_op);
      }
    }
    emit(rep, out_path);
    return 0;
  }

  if (*divisible) {
    json rep = base_report("divisible", seed);
    rep["exact"] = div_exact;
    if (div_exact) {
      const auto res = one_divisible_exact(exact_form_from_json(load_json(div_form)));
      rep["divisible"] = res.divisible;
      rep["kernel_dim"] = res.kernel_dim;
      if (res.factor_a) rep["factor_a"] = form_to_json(*res.factor_a);
      if (res.factor_b) rep["factor_b"] = form_to_json(*res.factor_b);
    } else {
      const Form x = form_from_json(load_json(div_form));
      const auto res = one_divisible(x, div_tol);
      rep["divisible"] = res.divisible;
      rep["kernel_dim"] = res.kernel_dim;
      rep["form_rank"] = form_rank(x, div_tol);
      if (res.factor_a) rep["factor_a"] = form_to_json(*res.factor_a);
      if (res.factor_b) rep["factor_b"] = form_to_json(*res.factor_b);
    }
    emit(rep, out_path);
    return 0;
  }

  if (*classify) {
    const QuadraticFormOnForms q = quadratic_from_json(load_json(cls_matrix));
    json rep = base_report("classify", seed);
    rep["n"] = q.n;
    rep["k"] = q.k;
    const double lam = q.min_eigenvalue();
    rep["min_eigenvalue"] = lam;
    rep["convex"] = lam >= -cls_tol;
    const auto one = is_ext_one_convex(q, cls_tol, cls_restarts, seed);
    rep["ext_one_convex"] = one.ext_one_convex;
    rep["gamma"] = one.gamma;
    if (one.witness) rep["one_convexity_witness"] = form_to_json(*one.witness);
    const auto cert = polyconvexity_certificate(q, {.tol = cls_tol});
    json cj;
    cj["status"] = cert.status == CertificateStatus::polyconvex ? "polyconvex" : "not_certified";
    cj["achieved_min_eig"] = cert.achieved_min_eig;
    cj["iterations"] = cert.iterations;
    if (cert.beta) cj["beta"] = form_to_json(*cert.beta);
    rep["polyconvex_certificate"] = cj;
    if (q.n == 4 && q.k == 2) {
      const auto lambda = marcellini_lambda(q, cls_tol);
      rep["lambda_marcellini"] = lambda ? json(*lambda) : json(nullptr);
    }
    emit(rep, out_path);
    return 0;
  }

  if (*qa) {
    const Builtin fn = make_builtin(qa_fn, qa_n, qa_k, qa_eps, qa_gamma_pen, seed);
    if (*qa_extract) {
      json rep = base_report("quasiaffine.extract", seed);
      const auto res = extract_representation(fn.f, qa_n, qa_k, 1e-8, seed);
      rep["ok"] = res.ok;
      rep["max_residual"] = res.max_residual;
      rep["rep"] = rep_to_json(res.rep);
      emit(rep, out_path);
      return res.ok ? 0 : 2;
    }
    json rep = base_report("quasiaffine.verify", seed);
    const auto res = verify_ext_one_affine(fn.f, qa_n, qa_k, qa_samples, seed);
    rep["passed"] = res.passed;
    rep["max_rel_residual"] = res.max_rel_residual;
    rep["samples"] = res.samples;
    emit(rep, out_path);
    return 0;
  }

  if (*reproduce) {
    if (*rep_serre) {
      json rep = base_report("reproduce.serre", seed);
      const QuadraticFormOnForms g = build_serre_form();
      std::vector<double> gammas;
      for (int s = 0; s < 5; ++s)
        gammas.push_back(gamma_infimum(g, serre_restarts, 1e-11, seed + s).gamma);
      const double gamma = *std::min_element(gammas.begin(), gammas.end());
      rep["gamma"] = gamma;
      rep["gamma_runs"] = gammas;

      bool exact_ok = true;
      Rng rng(seed + 17);
      for (int t = 0; t < 25; ++t) {
        const Rational a(rng.uniform_int(-9, 9), 2), b(rng.uniform_int(-9, 9), 3);
        const Rational c(rng.uniform_int(-9, 9), 5), d(rng.uniform_int(-9, 9), 7);
        const ExactForm xi = serre_xi_family(a, b, c, d);
        ExactForm half = wedge(xi, xi);
        half *= Rational(1, 2);
        exact_ok = exact_ok && half == serre_half_wedge_printed(a, b, c, d);
      }
      rep["exact_family_identity"] = exact_ok;

      Form alpha(6, 4);
      for (int i = 0; i < alpha.dim(); ++i) alpha[i] = rng.normal();
      const auto viol = serre_violation(alpha, gamma);
      json vj;
      vj["case"] = viol.case_id;
      vj["params"] = {viol.a, viol.b, viol.c, viol.d};
      vj["value"] = viol.value;
      rep["violation_example"] = vj;

      QuadraticFormOnForms f(6, 2, g.M - gamma * Eigen::MatrixXd::Identity(15, 15));
      const auto outcome =
          jensen_violation([&](const Form& x) { return f.eval(x); }, serre_jensen_witness());
      rep["jensen_gap"] = outcome.gap;
      rep["jensen_violates"] = outcome.violates;
      rep["ext_one_convex_at_09_gamma"] =
          is_ext_one_convex(
              QuadraticFormOnForms(6, 2,
                                   g.M - 0.9 * gamma * Eigen::MatrixXd::Identity(15, 15)),
              1e-8, serre_restarts, seed + 31)
              .ext_one_convex;
      emit(rep, out_path);
      return 0;
    }
    if (*rep_sverak) {
      json rep = base_report("reproduce.sverak", seed);
      rep["k"] = sv_k;
      rep["eps"] = sv_eps;
      const SverakConstruction c = build_sverak(sv_k);
      rep["n"] = c.n;
      const auto claim = check_L_claim(c, 500, seed);
      rep["l_claim_trials"] = claim.trials;
      rep["l_claim_not_divisible"] = claim.not_divisible;
      const auto cal = calibrate_gamma_pen(c, sv_eps, seed + 1);
      rep["gamma_pen"] = cal.gamma_pen;
      rep["calibration_heuristic"] = cal.heuristic;
      rep["integral"] = sverak_integral(c, sv_eps, cal.gamma_pen, 256);
      rep["integral_zero_eps"] = sverak_integral(c, 0.0, 0.0, 256);
      const int N = sv_grid > 0 ? sv_grid : (sv_k == 2 ? 12 : 8);
      const GridField warm = sverak_warm_start(c, N);
      const SverakFunction f = sverak_f_eps(c, sv_eps, cal.gamma_pen);
      EnvelopeOptions opt;
      opt.warm_start = &warm;
      opt.restarts = 0;
      opt.max_iter = 20;
      opt.seed = seed + 2;
      const auto env = envelope_estimate([&](const Form& x) { return f(x); },
                                         [&](const Form& x) { return f.gradient(x); },
                                         Form(c.n, c.k), GridSpec{c.n, N, Domain::torus}, opt);
      rep["envelope_grid"] = N;
      rep["envelope_estimate"] = env.estimate;
      emit(rep, out_path);
      return 0;
    }
  }

  if (*envelope) {
    const Form xi = form_from_json(load_json(env_xi));
    const Builtin fn = make_builtin(env_fn, xi.n(), xi.degree(), env_eps, env_gamma_pen, seed);
    const GridSpec spec{xi.n(), env_grid, Domain::torus};
    EnvelopeOptions opt;
    opt.restarts = env_restarts;
    opt.max_iter = env_max_iter;
    opt.seed = seed;
    GridField warm;
    if (env_warm) {
      warm = sverak_warm_start(build_sverak(xi.degree()), env_grid);
      opt.warm_start = &warm;
    }
    const auto res = envelope_estimate(fn.f, fn.grad, xi, spec, opt);
    json rep = base_report("envelope", seed);
    rep["grid"] = env_grid;
    rep["estimate"] = res.estimate;
    rep["f_at_xi"] = res.zero_field_value;
    rep["iterations"] = res.iterations;
    rep["converged"] = res.converged;
    rep["upper_bound_note"] =
        "grid estimate: an upper bound on f(xi) and a discretization-biased "
        "estimate of the envelope";
    emit(rep, out_path);
    return 0;
  }

  if (*minimize) {
    GridField omega0;
    if (min_boundary == "builtin:x1") {
      const GridSpec spec{2, min_grid, Domain::box};
      omega0 = GridField(spec, 0);
      for (int i = 0; i < min_grid; ++i)
        for (int j = 0; j < min_grid; ++j)
          omega0.values[static_cast<std::int64_t>(i) * min_grid + j] = i * spec.h();
    } else {
      omega0 = read_grid_field(min_boundary);
      if (omega0.spec.domain != Domain::box)
        throw std::invalid_argument("minimize: boundary field must live on the box domain");
    }
    const Builtin fn =
        make_builtin(min_fn, omega0.spec.n, omega0.k + 1, min_eps, min_gamma_pen, seed);
    MinimizeOptions opt;
    opt.max_iter = min_max_iter;
    opt.tol = min_tol;
    const auto res = minimize_dirichlet(fn.f, fn.grad, omega0, opt);
    json rep = base_report("minimize", seed);
    rep["final_energy"] = res.final_energy;
    rep["iterations"] = res.iterations;
    rep["gradient_norm"] = res.gradient_norm;
    rep["energy_trace_head"] =
        std::vector<double>(res.energy_trace.begin(),
                            res.energy_trace.begin() +
                                std::min<std::size_t>(res.energy_trace.size(), 10));
    if (!min_snapshot.empty()) {
      write_grid_field(min_snapshot, res.d_omega);
      rep["snapshot"] = min_snapshot;
    }
    emit(rep, out_path);
    return 0;
  }

  if (*suite) {
    json rep = base_report("suite", seed);
    rep["full"] = suite_full;
    json checks = json::array();
    bool all_pass = true;
    const auto run_one = [&](const std::string& name) {
      const CheckResult res = run_suite_check(name, seed, suite_full);
      json cj;
      cj["name"] = res.name;
      cj["passed"] = res.passed;
      cj["seconds"] = res.seconds;
      cj["details"] = res.details;
      checks.push_back(cj);
      all_pass = all_pass && res.passed;
      std::fprintf(stderr, "[%s] %s (%.2fs)\n", res.passed ? "PASS" : "FAIL", res.name.c_str(),
                   res.seconds);
    };
    if (!suite_only.empty()) {
      run_one(suite_only);
    } else {
      for (const auto& name : suite_check_names()) run_one(name);
    }
    rep["checks"] = checks;
    rep["all_passed"] = all_pass;
    emit(rep, out_path);
    return all_pass ? 0 : 2;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
