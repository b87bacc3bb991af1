#include "extconvex/quasiaffine.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "extconvex/exact_linalg.hpp"
#include "extconvex/rng.hpp"

namespace extconvex {

PolyaffineRep::PolyaffineRep(int n_, int k_) : n(n_), k(k_) {
  if (k < 1 || k > n) throw std::invalid_argument("polyaffine rep: need 1 <= k <= n");
  c.push_back(Form(n, 0));
  for (int s = 1; s <= n / k; ++s) c.push_back(Form(n, s * k));
}

PolyaffineRep::PolyaffineRep(int n_, int k_, std::vector<Form> coeffs) : PolyaffineRep(n_, k_) {
  if (coeffs.size() != c.size())
    throw std::invalid_argument("polyaffine rep: expected floor(n/k)+1 coefficient forms");
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    if (coeffs[s].n() != n || coeffs[s].degree() != static_cast<int>(s) * k)
      throw std::invalid_argument("polyaffine rep: coefficient degree mismatch");
  }
  c = std::move(coeffs);
}

double eval_polyaffine(const PolyaffineRep& rep, const Form& x) {
  if (x.n() != rep.n || x.degree() != rep.k)
    throw std::invalid_argument("eval_polyaffine: degree mismatch");
  double v = rep.c[0][0];
  Form pow = Form::scalar(rep.n, 1.0);
  for (int s = 1; s <= rep.max_power(); ++s) {
    pow = wedge(pow, x);
    v += inner(rep.c[static_cast<std::size_t>(s)], pow);
  }
  return v;
}

PolyaffineRep random_polyaffine(int n, int k, std::uint64_t seed, bool canonical_odd) {
  Rng rng(seed);
  PolyaffineRep rep(n, k);
  for (std::size_t s = 0; s < rep.c.size(); ++s) {
    if (canonical_odd && k % 2 == 1 && s >= 2) continue;  // invisible to eval anyway
    for (int i = 0; i < rep.c[s].dim(); ++i) rep.c[s][i] = 0.5 * rng.normal();
  }
  return rep;
}

AffinityReport verify_ext_one_affine(const FormFunction& f, int n, int k, int samples,
                                     std::uint64_t seed, double tol) {
  Rng rng(seed);
  AffinityReport rep;
  rep.samples = samples;
  rep.tol = tol;
  for (int s = 0; s < samples; ++s) {
    Form xi(n, k), a(n, k - 1), b(n, 1);
    for (int i = 0; i < xi.dim(); ++i) xi[i] = rng.normal();
    for (int i = 0; i < a.dim(); ++i) a[i] = rng.normal();
    for (int i = 0; i < b.dim(); ++i) b[i] = rng.normal();
    const Form dir = wedge(a, b);
    const double t = rng.uniform(-2.0, 2.0);
    const double g0 = f(xi);
    const double g1 = f(xi + dir);
    Form at = xi;
    at += t * dir;
    const double gt = f(at);
    const double residual = std::abs(gt - g0 - t * (g1 - g0));
    const double scale = 1.0 + std::max({std::abs(g0), std::abs(g1), std::abs(gt)});
    rep.max_rel_residual = std::max(rep.max_rel_residual, residual / scale);
  }
  rep.passed = rep.max_rel_residual <= tol;
  return rep;
}

namespace {

double factorial(int s) {
  double r = 1.0;
  for (int i = 2; i <= s; ++i) r *= i;
  return r;
}

// e^{I^1} + ... + e^{I^s} for the consecutive k-blocks of J.
Form block_sum(int n, int k, const MultiIndex& J) {
  const int s = static_cast<int>(J.size()) / k;
  Form eta(n, k);
  for (int m = 0; m < s; ++m) {
    MultiIndex block(J.begin() + m * k, J.begin() + (m + 1) * k);
    eta[multi_index_rank(n, block)] += 1.0;
  }
  return eta;
}

}  // namespace

ExtractionResult extract_representation(const FormFunction& f, int n, int k, double tol,
                                        std::uint64_t seed) {
  const int p = n / k;
  ExtractionResult out;
  out.rep = PolyaffineRep(n, k);
  out.rep.c[0][0] = f(Form(n, k) * 0.0);

  // Vandermonde at integer nodes t = 1..p+1 separates homogeneous parts.
  Eigen::MatrixXd V(p + 1, p + 1);
  for (int i = 0; i <= p; ++i)
    for (int s = 0; s <= p; ++s) V(i, s) = std::pow(static_cast<double>(i + 1), s);
  const Eigen::FullPivLU<Eigen::MatrixXd> Vlu(V);

  Eigen::VectorXd y(p + 1);
  for (int s = 1; s <= p; ++s) {
    Form& cs = out.rep.c[static_cast<std::size_t>(s)];
    const double fact = factorial(s);
    for (const MultiIndex& J : multi_indices(n, s * k)) {
      const Form eta = block_sum(n, k, J);
      for (int i = 0; i <= p; ++i) y(i) = f(eta * static_cast<double>(i + 1));
      const Eigen::VectorXd parts = Vlu.solve(y);
      cs[multi_index_rank(n, J)] = parts(s) / fact;
    }
  }

  Rng rng(seed);
  for (int trial = 0; trial < 32; ++trial) {
    Form xi(n, k);
    for (int i = 0; i < xi.dim(); ++i) xi[i] = rng.normal();
    const double fv = f(xi);
    const double rv = eval_polyaffine(out.rep, xi);
    out.max_residual = std::max(out.max_residual, std::abs(fv - rv) / (1.0 + std::abs(fv)));
  }
  out.ok = out.max_residual <= tol;
  return out;
}

std::vector<ExactForm> extract_representation_exact(
    const std::function<Rational(const ExactForm&)>& f, int n, int k) {
  const int p = n / k;
  std::vector<ExactForm> c;
  c.push_back(ExactForm::scalar(n, f(ExactForm(n, k))));
  for (int s = 1; s <= p; ++s) c.push_back(ExactForm(n, s * k));

  RationalMatrix V(p + 1, p + 1);
  for (int i = 0; i <= p; ++i) {
    Rational t(i + 1), pw(1);
    for (int s = 0; s <= p; ++s) {
      V.at(i, s) = pw;
      pw *= t;
    }
  }

  for (int s = 1; s <= p; ++s) {
    Rational fact(1);
    for (int i = 2; i <= s; ++i) fact *= i;
    for (const MultiIndex& J : multi_indices(n, s * k)) {
      ExactForm eta(n, k);
      for (int m = 0; m < s; ++m) {
        MultiIndex block(J.begin() + m * k, J.begin() + (m + 1) * k);
        eta[multi_index_rank(n, block)] += 1;
      }
      std::vector<Rational> y(static_cast<std::size_t>(p) + 1);
      for (int i = 0; i <= p; ++i) {
        ExactForm scaled = eta;
        scaled *= Rational(i + 1);
        y[static_cast<std::size_t>(i)] = f(scaled);
      }
      const auto parts = exact::solve(V, y);
      if (!parts) throw std::runtime_error("exact extraction: singular Vandermonde");
      c[static_cast<std::size_t>(s)][multi_index_rank(n, J)] =
          (*parts)[static_cast<std::size_t>(s)] / fact;
    }
  }
  return c;
}

NullLagrangianReport null_lagrangian_check(const PolyaffineRep& rep, const Form& xi,
                                           const GridSpec& spec, std::uint64_t seed,
                                           double amplitude) {
  if (spec.domain != Domain::torus)
    throw std::invalid_argument("null_lagrangian_check: torus only");
  if (spec.n != rep.n) throw std::invalid_argument("null_lagrangian_check: dimension mismatch");
  const int n = rep.n, k = rep.k;
  const int p = rep.max_power();

  const GridField omega = random_periodic_field(spec, k - 1, seed, amplitude);
  const GridField dw = discrete_d(omega);
  const std::int64_t count = spec.nodes();
  const int nc = dw.ncomp();

  NullLagrangianReport out;
  out.h = spec.h();
  const double f_xi = eval_polyaffine(rep, xi);

  std::vector<std::vector<double>> moment_sum(static_cast<std::size_t>(p) + 1);
  for (int s = 1; s <= p; ++s)
    moment_sum[static_cast<std::size_t>(s)].assign(binomial(n, s * k), 0.0);
  double delta_sum = 0.0;

  Form arg = xi;
  for (std::int64_t idx = 0; idx < count; ++idx) {
    const double* v = dw.values.data() + idx * nc;
    for (int comp = 0; comp < nc; ++comp) arg[comp] = xi[comp] + v[comp];
    delta_sum += eval_polyaffine(rep, arg) - f_xi;
    Form pow = Form::scalar(n, 1.0);
    for (int s = 1; s <= p; ++s) {
      pow = wedge(pow, arg);
      auto& acc = moment_sum[static_cast<std::size_t>(s)];
      for (int i = 0; i < pow.dim(); ++i) acc[static_cast<std::size_t>(i)] += pow[i];
    }
  }

  out.mean_delta = delta_sum / static_cast<double>(count);
  out.moment_norms.assign(static_cast<std::size_t>(p) + 1, 0.0);
  for (int s = 1; s <= p; ++s) {
    const Form xis = wedge_power(xi, s);
    double worst = 0.0;
    const auto& acc = moment_sum[static_cast<std::size_t>(s)];
    for (int i = 0; i < xis.dim(); ++i)
      worst = std::max(worst,
                       std::abs(acc[static_cast<std::size_t>(i)] / static_cast<double>(count) - xis[i]));
    out.moment_norms[static_cast<std::size_t>(s)] = worst;
  }
  return out;
}

std::vector<double> witness_moment_residuals(const JensenWitness& witness, int n, int k) {
  const int p = n / k;
  Form bar(n, k);
  for (std::size_t i = 0; i < witness.points.size(); ++i) {
    Form scaled = witness.points[i];
    scaled *= witness.weights[i];
    bar += scaled;
  }
  std::vector<double> residuals(static_cast<std::size_t>(p) + 1, 0.0);
  for (int s = 1; s <= p; ++s) {
    Form lhs(n, s * k);
    for (std::size_t i = 0; i < witness.points.size(); ++i) {
      Form pw = wedge_power(witness.points[i], s);
      pw *= witness.weights[i];
      lhs += pw;
    }
    lhs -= wedge_power(bar, s);
    residuals[static_cast<std::size_t>(s)] = std::sqrt(norm_sq(lhs));
  }
  return residuals;
}

JensenOutcome jensen_violation(const FormFunction& f, const JensenWitness& witness,
                               double tol, double moment_tol) {
  if (witness.points.empty() || witness.points.size() != witness.weights.size())
    throw std::invalid_argument("jensen_violation: malformed witness");
  const int n = witness.points[0].n();
  const int k = witness.points[0].degree();
  double wsum = 0.0;
  for (double w : witness.weights) {
    if (w < 0.0) throw std::invalid_argument("jensen_violation: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("jensen_violation: weights must sum to 1");
  const auto residuals = witness_moment_residuals(witness, n, k);
  for (std::size_t s = 1; s < residuals.size(); ++s)
    if (residuals[s] > moment_tol)
      throw std::invalid_argument("jensen_violation: moment condition not satisfied");

  Form bar(n, k);
  double rhs = 0.0;
  for (std::size_t i = 0; i < witness.points.size(); ++i) {
    Form scaled = witness.points[i];
    scaled *= witness.weights[i];
    bar += scaled;
    rhs += witness.weights[i] * f(witness.points[i]);
  }
  JensenOutcome out;
  out.gap = f(bar) - rhs;
  out.violates = out.gap > tol;
  return out;
}

namespace {

// Nonnegative least squares || A mu - rhs || via projected gradient with an
// active-set polish; returns mu or nullopt if the polish fails.
std::optional<Eigen::VectorXd> nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs) {
  const int m = static_cast<int>(A.cols());
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(m, 1.0 / m);
  const double lip = (A.transpose() * A).norm();
  if (!(lip > 0.0)) return std::nullopt;
  const double eta = 1.0 / lip;
  for (int it = 0; it < 4000; ++it) {
    const Eigen::VectorXd g = A.transpose() * (A * mu - rhs);
    mu = (mu - eta * g).cwiseMax(0.0);
  }
  // polish on the support, dropping negatives until consistent
  for (int round = 0; round < m; ++round) {
    std::vector<int> support;
    for (int j = 0; j < m; ++j)
      if (mu(j) > 1e-10) support.push_back(j);
    if (support.empty()) return std::nullopt;
    Eigen::MatrixXd As(A.rows(), static_cast<int>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) As.col(static_cast<int>(j)) = A.col(support[j]);
    const Eigen::VectorXd sol = As.colPivHouseholderQr().solve(rhs);
    bool nonneg = true;
    for (int j = 0; j < sol.size(); ++j) nonneg &= sol(j) >= -1e-14;
    if (nonneg) {
      mu.setZero();
      for (std::size_t j = 0; j < support.size(); ++j)
        mu(support[j]) = std::max(0.0, sol(static_cast<int>(j)));
      return mu;
    }
    // zero out the most negative entry and retry
    int worst = support[0];
    double worst_val = sol(0);
    for (std::size_t j = 1; j < support.size(); ++j)
      if (sol(static_cast<int>(j)) < worst_val) {
        worst_val = sol(static_cast<int>(j));
        worst = support[j];
      }
    mu(worst) = 0.0;
  }
  return std::nullopt;
}

}  // namespace

std::optional<JensenWitness> find_jensen_witness(const FormFunction& f, int n, int k,
                                                 const std::vector<Form>& pool,
                                                 int batches, std::uint64_t seed,
                                                 double tol) {
  const int p = n / k;
  const int d = static_cast<int>(binomial(n, k));
  Rng root(seed);

  for (int batch = 0; batch < batches; ++batch) {
    Rng rng = root.fork(static_cast<std::uint64_t>(batch));
    std::vector<Form> candidates = pool;
    // random candidates only top up thin pools; caller-provided structure
    // (e.g. points of a known vanishing family) should dominate
    const int extra = candidates.empty() ? 24 : std::max(0, 16 - static_cast<int>(candidates.size()));
    for (int e = 0; e < extra; ++e) {
      Form xi(n, k);
      for (int i = 0; i < d; ++i) xi[i] = rng.normal();
      candidates.push_back(std::move(xi));
    }
    const int m = static_cast<int>(candidates.size());

    // rows: stacked even-power moments (must cancel) plus the sum-to-one row
    int rows = 1;
    for (int s = 2; s <= p; s += 2) rows += static_cast<int>(binomial(n, s * k));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
    rhs(rows - 1) = 1.0;
    for (int j = 0; j < m; ++j) {
      int r = 0;
      for (int s = 2; s <= p; s += 2) {
        const Form pw = wedge_power(candidates[static_cast<std::size_t>(j)], s);
        for (int i = 0; i < pw.dim(); ++i) A(r + i, j) = pw[i];
        r += pw.dim();
      }
      A(rows - 1, j) = 1.0;
    }

    const auto mu = nnls(A, rhs);
    if (!mu) continue;
    if ((A * (*mu) - rhs).norm() > 1e-11) continue;

    JensenWitness w;
    for (int j = 0; j < m; ++j) {
      if ((*mu)(j) < 1e-13) continue;
      w.points.push_back(candidates[static_cast<std::size_t>(j)]);
      w.weights.push_back((*mu)(j) / 2.0);
      w.points.push_back(-candidates[static_cast<std::size_t>(j)]);
      w.weights.push_back((*mu)(j) / 2.0);
    }
    if (w.points.empty()) continue;
    w.moment_residuals = witness_moment_residuals(w, n, k);
    bool moments_ok = true;
    for (std::size_t s = 1; s < w.moment_residuals.size(); ++s)
      moments_ok &= w.moment_residuals[s] <= 1e-9;
    if (!moments_ok) continue;

    const JensenOutcome outcome = jensen_violation(f, w, tol);
    if (outcome.violates) {
      w.jensen_gap = outcome.gap;
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace extconvex
