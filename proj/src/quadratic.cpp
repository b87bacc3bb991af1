#include "extconvex/quadratic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "extconvex/divisibility.hpp"
#include "extconvex/rng.hpp"

namespace extconvex {

QuadraticFormOnForms::QuadraticFormOnForms(int n_, int k_, Eigen::MatrixXd M_) : n(n_), k(k_) {
  const int d = static_cast<int>(binomial(n_, k_));
  if (M_.rows() != d || M_.cols() != d)
    throw std::invalid_argument("quadratic form matrix has wrong size");
  M = 0.5 * (M_ + M_.transpose());
}

QuadraticFormOnForms QuadraticFormOnForms::identity(int n, int k) {
  const int d = static_cast<int>(binomial(n, k));
  return {n, k, Eigen::MatrixXd::Identity(d, d)};
}

double QuadraticFormOnForms::eval(const Form& x) const {
  if (x.n() != n || x.degree() != k)
    throw std::invalid_argument("quadratic form: degree mismatch");
  const Eigen::VectorXd v = to_eigen(x);
  return v.dot(M * v);
}

double QuadraticFormOnForms::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Eigen::MatrixXd wedge_pairing_matrix(int n, int k, const Form& beta) {
  if (beta.n() != n || beta.degree() != 2 * k)
    throw std::invalid_argument("wedge_pairing_matrix: beta must have degree 2k");
  const auto& Is = multi_indices(n, k);
  const int d = static_cast<int>(Is.size());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
  MultiIndex merged;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const int sign = merge_sign(Is[i], Is[j], &merged);
      if (sign == 0) continue;
      S(i, j) = sign * beta[multi_index_rank(n, merged)];
    }
  return S;
}

Eigen::MatrixXd pfaffian_matrix() {
  return wedge_pairing_matrix(4, 2, Form::basis(4, {1, 2, 3, 4}));
}

QuadraticFormOnForms hodge_transform(const QuadraticFormOnForms& q) {
  const Eigen::MatrixXd H = hodge_star_matrix(q.n, q.n - q.k);
  return {q.n, q.n - q.k, H.transpose() * q.M * H};
}

Eigen::MatrixXd wedge_right_matrix(const Form& y, int p) {
  const int n = y.n();
  const auto& Js = multi_indices(n, p);
  const int rows = static_cast<int>(binomial(n, p + y.degree()));
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(rows, static_cast<int>(Js.size()));
  for (std::size_t j = 0; j < Js.size(); ++j) {
    const Form col = wedge(Form::basis(n, Js[j]), y);
    for (int r = 0; r < rows; ++r) W(r, static_cast<int>(j)) = col[r];
  }
  return W;
}

Eigen::MatrixXd wedge_left_matrix(const Form& y, int q) {
  const int n = y.n();
  const auto& Js = multi_indices(n, q);
  const int rows = static_cast<int>(binomial(n, q + y.degree()));
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(rows, static_cast<int>(Js.size()));
  for (std::size_t j = 0; j < Js.size(); ++j) {
    const Form col = wedge(y, Form::basis(n, Js[j]));
    for (int r = 0; r < rows; ++r) W(r, static_cast<int>(j)) = col[r];
  }
  return W;
}

namespace {

// Extremum of x^T A x subject to x^T B x = 1 with x restricted to the
// numerical range of B (B is PSD).  Returns nullopt when B ~ 0.
std::optional<std::pair<double, Eigen::VectorXd>> constrained_extremum(
    const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, OptimizeSense sense) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esB(B);
  const Eigen::VectorXd d = esB.eigenvalues();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0)) return std::nullopt;
  const double thresh = 1e-12 * dmax;
  std::vector<int> keep;
  for (int i = 0; i < d.size(); ++i)
    if (d(i) > thresh) keep.push_back(i);
  Eigen::MatrixXd C(B.rows(), static_cast<int>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    C.col(static_cast<int>(c)) = esB.eigenvectors().col(keep[c]) / std::sqrt(d(keep[c]));
  Eigen::MatrixXd E = C.transpose() * A * C;
  E = 0.5 * (E + E.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esE(E);
  const int idx = sense == OptimizeSense::minimize ? 0 : static_cast<int>(E.rows()) - 1;
  return std::make_pair(esE.eigenvalues()(idx), Eigen::VectorXd(C * esE.eigenvectors().col(idx)));
}

}  // namespace

GammaResult gamma_extremum(const QuadraticFormOnForms& q, OptimizeSense sense,
                           int restarts, double tol, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("gamma_extremum: restarts < 1");
  if (q.k < 1) throw std::invalid_argument("gamma_extremum: need k >= 1");
  const int n = q.n, k = q.k;
  const bool minimize = sense == OptimizeSense::minimize;
  const int max_alt = 200;

  GammaResult best;
  best.gamma = minimize ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
  best.restarts = restarts;
  Rng root(seed);

  for (int r = 0; r < restarts; ++r) {
    Rng rng = root.fork(static_cast<std::uint64_t>(r));
    Form a(n, k - 1), b(n, 1);
    bool ok = false;
    for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
      for (int i = 0; i < a.dim(); ++i) a[i] = rng.normal();
      for (int i = 0; i < n; ++i) b[i] = rng.normal();
      const double s = norm(wedge(a, b));
      if (s > 1e-8) {
        a *= 1.0 / s;
        ok = true;
      }
    }
    if (!ok) continue;

    double value = q.eval(wedge(a, b));
    bool run_converged = false;
    for (int it = 0; it < max_alt; ++it) {
      const Eigen::MatrixXd Wb = wedge_right_matrix(b, k - 1);
      auto step_a = constrained_extremum(Wb.transpose() * q.M * Wb, Wb.transpose() * Wb, sense);
      if (!step_a) break;
      a = from_eigen(n, k - 1, step_a->second);

      const Eigen::MatrixXd Wa = wedge_left_matrix(a, 1);
      auto step_b = constrained_extremum(Wa.transpose() * q.M * Wa, Wa.transpose() * Wa, sense);
      if (!step_b) break;
      b = from_eigen(n, 1, step_b->second);

      const double new_value = step_b->first;
      if (std::abs(new_value - value) <= tol * (1.0 + std::abs(new_value))) {
        value = new_value;
        run_converged = true;
        break;
      }
      value = new_value;
    }

    const bool better = minimize ? value < best.gamma : value > best.gamma;
    if (better) {
      best.gamma = value;
      best.argmin_a = a;
      best.argmin_b = b;
      best.converged = run_converged;
    }
  }

  if (!std::isfinite(best.gamma))
    throw std::runtime_error("gamma_extremum: all restarts degenerate");
  return best;
}

OneConvexityResult is_ext_one_convex(const QuadraticFormOnForms& q, double tol,
                                     int restarts, std::uint64_t seed) {
  const GammaResult g = gamma_infimum(q, restarts, 1e-12, seed);
  OneConvexityResult res;
  res.gamma = g.gamma;
  res.ext_one_convex = g.gamma >= -tol;
  if (!res.ext_one_convex) res.witness = wedge(g.argmin_a, g.argmin_b);
  return res;
}

namespace {

struct EigPoint {
  double lambda_min;
  Eigen::VectorXd eigvec;
};

EigPoint min_eig_point(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

}  // namespace

CertificateResult polyconvexity_certificate(const QuadraticFormOnForms& q,
                                            const CertificateOptions& opt) {
  CertificateResult res;
  const int n = q.n, k = q.k;
  const double lam_M = q.min_eigenvalue();

  // k odd or 2k > n: xi ^ xi = 0, so polyconvexity is plain convexity.
  if (k % 2 == 1 || 2 * k > n) {
    res.achieved_min_eig = lam_M;
    res.status = lam_M >= -opt.tol ? CertificateStatus::polyconvex
                                   : CertificateStatus::not_certified;
    if (2 * k <= n) res.beta = Form(n, 2 * k);
    return res;
  }
  if (lam_M >= -opt.tol && opt.warm_start == nullptr) {
    res.status = CertificateStatus::polyconvex;
    res.beta = Form(n, 2 * k);
    res.achieved_min_eig = lam_M;
    return res;
  }

  const int d2k = static_cast<int>(binomial(n, 2 * k));
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d2k);
  if (opt.warm_start) {
    if (opt.warm_start->n() != n || opt.warm_start->degree() != 2 * k)
      throw std::invalid_argument("certificate warm start must have degree 2k");
    beta = to_eigen(*opt.warm_start);
  }

  Eigen::VectorXd best_beta = beta;
  double best_phi = -std::numeric_limits<double>::infinity();
  int iters = 0;

  auto phi_and_supergrad = [&](const Eigen::VectorXd& b, Eigen::VectorXd& grad) {
    const Form bf = from_eigen(n, 2 * k, b);
    const EigPoint ep = min_eig_point(q.M - wedge_pairing_matrix(n, k, bf));
    const Form v = from_eigen(n, k, ep.eigvec);
    grad = -to_eigen(wedge(v, v));
    return ep.lambda_min;
  };

  Eigen::VectorXd grad(d2k);
  // Phase 1: diminishing-step supergradient ascent.
  for (int t = 1; t <= opt.max_iter; ++t, ++iters) {
    const double phi = phi_and_supergrad(beta, grad);
    if (phi > best_phi) {
      best_phi = phi;
      best_beta = beta;
    }
    if (best_phi >= 0.0) break;
    const double gn = grad.norm();
    if (gn < 1e-15) break;
    beta += (opt.step0 / std::sqrt(static_cast<double>(t))) * grad / gn;
  }
  // Phase 2: Polyak steps toward the zero level from the best iterate;
  // closes the gap when the maximum is actually >= 0.
  if (best_phi < 0.0 && opt.polish_iter > 0) {
    beta = best_beta;
    int stall = 0;
    for (int t = 0; t < opt.polish_iter; ++t, ++iters) {
      const double phi = phi_and_supergrad(beta, grad);
      if (phi > best_phi) {
        best_phi = phi;
        best_beta = beta;
        stall = 0;
      } else if (++stall > 300) {
        break;
      }
      if (best_phi >= 0.0) break;
      const double gn2 = grad.squaredNorm();
      if (gn2 < 1e-30) break;
      beta += ((-phi) / gn2) * grad;
    }
  }

  res.achieved_min_eig = best_phi;
  res.iterations = iters;
  res.beta = from_eigen(n, 2 * k, best_beta);
  res.status = best_phi >= -opt.tol ? CertificateStatus::polyconvex
                                    : CertificateStatus::not_certified;
  return res;
}

std::optional<double> marcellini_lambda(const QuadraticFormOnForms& q, double tol) {
  if (q.n != 4 || q.k != 2)
    throw std::invalid_argument("marcellini_lambda: defined for n=4, k=2 only");
  const Eigen::MatrixXd G = pfaffian_matrix();
  auto phi = [&](double lam) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.M - lam * G, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };

  // Bracket the concave maximum, then ternary search.
  double W = 1.0;
  const double phi0 = phi(0.0);
  for (int i = 0; i < 60 && (phi(-W) > phi0 || phi(W) > phi0); ++i) W *= 2.0;
  double lo = -W, hi = W;
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (phi(m1) < phi(m2))
      lo = m1;
    else
      hi = m2;
  }
  const double lam = 0.5 * (lo + hi);
  if (phi(lam) >= -tol) return lam;
  return std::nullopt;
}

double proposition_c_constant(const Form& alpha, int restarts, std::uint64_t seed) {
  if (one_divisible(alpha).divisible)
    throw std::invalid_argument("proposition_c_constant: alpha must not be 1-divisible");
  const Eigen::VectorXd a = to_eigen(alpha);
  QuadraticFormOnForms q(alpha.n(), alpha.degree(), a * a.transpose());
  const GammaResult sup = gamma_supremum(q, restarts, 1e-12, seed);
  if (!(sup.gamma > 0.0))
    throw std::runtime_error("proposition_c_constant: degenerate supremum");
  return 1.0 / sup.gamma;
}

}  // namespace extconvex
