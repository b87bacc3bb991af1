#include "extconvex/divisibility.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "extconvex/exact_linalg.hpp"

namespace extconvex {

namespace {

// Matrix of v in Lambda^1 -> v ^ x, size C(n,k+1) x n; k = n gives the
// zero map (no rows).
Eigen::MatrixXd wedge_by_matrix(const Form& x) {
  const int n = x.n();
  if (x.degree() == n) return Eigen::MatrixXd::Zero(0, n);
  const int rows = static_cast<int>(binomial(n, x.degree() + 1));
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, n);
  for (int i = 1; i <= n; ++i) {
    const Form col = wedge(Form::basis(n, {i}), x);
    for (int r = 0; r < rows; ++r) A(r, i - 1) = col[r];
  }
  return A;
}

RationalMatrix wedge_by_matrix_exact(const ExactForm& x) {
  const int n = x.n();
  if (x.degree() == n) return RationalMatrix(0, n);
  const int rows = static_cast<int>(binomial(n, x.degree() + 1));
  RationalMatrix A(rows, n);
  for (int i = 1; i <= n; ++i) {
    const ExactForm col = wedge(ExactForm::basis(n, {i}), x);
    for (int r = 0; r < rows; ++r) A.at(r, i - 1) = col[r];
  }
  return A;
}

// Matrix of a in Lambda^{k-1} -> a ^ v, size C(n,k) x C(n,k-1).
Eigen::MatrixXd wedge_right_matrix(const Form& v, int p) {
  const int n = v.n();
  const auto& Js = multi_indices(n, p);
  const int rows = static_cast<int>(binomial(n, p + v.degree()));
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(rows, static_cast<int>(Js.size()));
  for (std::size_t j = 0; j < Js.size(); ++j) {
    const Form col = wedge(Form::basis(n, Js[j]), v);
    for (int r = 0; r < rows; ++r) W(r, static_cast<int>(j)) = col[r];
  }
  return W;
}

}  // namespace

DivisibilityResult one_divisible(const Form& x, double rel_tol) {
  const int n = x.n();
  const int k = x.degree();
  if (k < 1 || k > n) throw std::invalid_argument("one_divisible: need 1 <= k <= n");
  DivisibilityResult res;

  if (x.is_zero()) {
    // Zero form: divisible with factors (0, e^1); kernel is everything.
    res.divisible = true;
    res.kernel_dim = n;
    res.factor_a = Form(n, k - 1);
    res.factor_b = Form::basis(n, {1});
    return res;
  }

  const Eigen::MatrixXd A = wedge_by_matrix(x);
  if (A.rows() == 0) {
    // k = n: the wedge map is identically zero and every v works.
    res.kernel_dim = n;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double thresh = rel_tol * smax;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > thresh) ++rank;
    res.kernel_dim = n - rank;
    if (res.kernel_dim == 0) {
      res.divisible = false;
      return res;
    }
    // Candidate kernel vectors, most-null direction first.
    const double xnorm = std::sqrt(norm_sq(x));
    for (int cand = n - 1; cand >= rank; --cand) {
      Form v(n, 1);
      for (int i = 0; i < n; ++i) v[i] = svd.matrixV()(i, cand);
      const Eigen::MatrixXd W = wedge_right_matrix(v, k - 1);
      const Eigen::VectorXd sol = W.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(to_eigen(x));
      const double residual = (W * sol - to_eigen(x)).norm();
      if (residual <= 1e-8 * xnorm) {
        res.divisible = true;
        res.factor_b = v;
        res.factor_a = from_eigen(n, k - 1, sol);
        return res;
      }
    }
    res.divisible = false;
    return res;
  }

  // k = n path: any unit v with a consistent least-squares solve.
  Form v = Form::basis(n, {n});
  const Eigen::MatrixXd W = wedge_right_matrix(v, k - 1);
  const Eigen::VectorXd sol = W.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(to_eigen(x));
  res.divisible = true;
  res.factor_b = v;
  res.factor_a = from_eigen(n, k - 1, sol);
  return res;
}

ExactDivisibilityResult one_divisible_exact(const ExactForm& x) {
  const int n = x.n();
  const int k = x.degree();
  if (k < 1 || k > n) throw std::invalid_argument("one_divisible: need 1 <= k <= n");
  ExactDivisibilityResult res;

  if (x.is_zero()) {
    res.divisible = true;
    res.kernel_dim = n;
    res.factor_a = ExactForm(n, k - 1);
    res.factor_b = ExactForm::basis(n, {1});
    return res;
  }

  const RationalMatrix A = wedge_by_matrix_exact(x);
  const auto kernel = exact::kernel(A);
  res.kernel_dim = static_cast<int>(kernel.size());
  if (res.kernel_dim == 0) return res;

  for (const auto& kv : kernel) {
    ExactForm v(n, 1, kv);
    // Solve a ^ v = x exactly.
    const auto& Js = multi_indices(n, k - 1);
    const int rows = static_cast<int>(binomial(n, k));
    RationalMatrix W(rows, static_cast<int>(Js.size()));
    for (std::size_t j = 0; j < Js.size(); ++j) {
      const ExactForm col = wedge(ExactForm::basis(n, Js[j]), v);
      for (int r = 0; r < rows; ++r) W.at(r, static_cast<int>(j)) = col[r];
    }
    const auto sol = exact::solve(W, x.coeffs());
    if (sol) {
      res.divisible = true;
      res.factor_b = v;
      res.factor_a = ExactForm(n, k - 1, *sol);
      return res;
    }
  }
  return res;
}

int form_rank(const Form& x, double rel_tol) {
  const int k = x.degree();
  if (k == 0) return 0;
  const int n = x.n();
  const int rows = static_cast<int>(binomial(n, k - 1));
  Eigen::MatrixXd B(rows, n);
  for (int i = 1; i <= n; ++i) {
    const Form col = interior_product(Form::basis(n, {i}), x);
    for (int r = 0; r < rows; ++r) B(r, i - 1) = col[r];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (smax == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * smax) ++rank;
  return rank;
}

int form_rank_exact(const ExactForm& x) {
  const int k = x.degree();
  if (k == 0) return 0;
  const int n = x.n();
  const int rows = static_cast<int>(binomial(n, k - 1));
  RationalMatrix B(rows, n);
  for (int i = 1; i <= n; ++i) {
    const ExactForm col = interior_product(ExactForm::basis(n, {i}), x);
    for (int r = 0; r < rows; ++r) B.at(r, i - 1) = col[r];
  }
  return exact::rank(B);
}

}  // namespace extconvex
