#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "extconvex/combinatorics.hpp"
#include "extconvex/scalar.hpp"

namespace extconvex {

/// A degree-k alternating form on R^n, stored as a dense coefficient
/// vector over the lexicographically ordered multi-indices of T^n_k.
/// Degree 0 is a single scalar.  Immutable value semantics: operations
/// return new forms.
template <class S>
class BasicForm {
 public:
  BasicForm() : n_(0), k_(0), c_(1, S(0)) {}

  BasicForm(int n, int k) : n_(n), k_(k) {
    if (n < 0 || k < 0 || k > n)
      throw std::invalid_argument("form degree must satisfy 0 <= k <= n");
    c_.assign(static_cast<std::size_t>(binomial(n, k)), S(0));
  }

  BasicForm(int n, int k, std::vector<S> coeffs) : BasicForm(n, k) {
    if (coeffs.size() != c_.size())
      throw std::invalid_argument("coefficient vector has wrong length");
    c_ = std::move(coeffs);
  }

  static BasicForm basis(int n, const MultiIndex& I) {
    if (!is_valid_multi_index(I, n))
      throw std::invalid_argument("invalid multi-index");
    BasicForm f(n, static_cast<int>(I.size()));
    f.c_[static_cast<std::size_t>(multi_index_rank(n, I))] = S(1);
    return f;
  }

  static BasicForm scalar(int n, S v) {
    BasicForm f(n, 0);
    f.c_[0] = std::move(v);
    return f;
  }

  int n() const { return n_; }
  int degree() const { return k_; }
  int dim() const { return static_cast<int>(c_.size()); }

  const std::vector<S>& coeffs() const { return c_; }
  std::vector<S>& coeffs() { return c_; }

  const S& operator[](int rank) const { return c_[static_cast<std::size_t>(rank)]; }
  S& operator[](int rank) { return c_[static_cast<std::size_t>(rank)]; }

  const S& coeff(const MultiIndex& I) const { return c_[static_cast<std::size_t>(multi_index_rank(n_, I))]; }
  void set_coeff(const MultiIndex& I, S v) { c_[static_cast<std::size_t>(multi_index_rank(n_, I))] = std::move(v); }

  bool is_zero() const {
    for (const S& v : c_)
      if (!scalar_is_zero(v)) return false;
    return true;
  }

  BasicForm& operator+=(const BasicForm& o) {
    check_same_space(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  BasicForm& operator-=(const BasicForm& o) {
    check_same_space(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  BasicForm& operator*=(const S& s) {
    for (S& v : c_) v *= s;
    return *this;
  }
  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  friend BasicForm operator*(const S& s, BasicForm a) { return a *= s; }
  friend BasicForm operator*(BasicForm a, const S& s) { return a *= s; }
  friend BasicForm operator-(BasicForm a) {
    for (S& v : a.c_) v = -v;
    return a;
  }
  friend bool operator==(const BasicForm& a, const BasicForm& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.c_ == b.c_;
  }

  void check_same_space(const BasicForm& o) const {
    if (n_ != o.n_ || k_ != o.k_)
      throw std::invalid_argument("forms live in different spaces");
  }

 private:
  int n_, k_;
  std::vector<S> c_;
};

using Form = BasicForm<double>;
using ExactForm = BasicForm<Rational>;

/// Exterior product.  Throws on dimension mismatch and on degree overflow
/// (p + q > n); callers wanting silent truncation use wedge_or_zero.
template <class S>
BasicForm<S> wedge(const BasicForm<S>& x, const BasicForm<S>& y) {
  if (x.n() != y.n()) throw std::invalid_argument("wedge: dimension mismatch");
  const int n = x.n(), p = x.degree(), q = y.degree();
  if (p + q > n) throw std::invalid_argument("wedge: total degree exceeds n");
  BasicForm<S> r(n, p + q);
  const auto& Is = multi_indices(n, p);
  const auto& Js = multi_indices(n, q);
  MultiIndex merged;
  for (std::size_t i = 0; i < Is.size(); ++i) {
    if (scalar_is_zero(x[static_cast<int>(i)])) continue;
    for (std::size_t j = 0; j < Js.size(); ++j) {
      if (scalar_is_zero(y[static_cast<int>(j)])) continue;
      const int sign = merge_sign(Is[i], Js[j], &merged);
      if (sign == 0) continue;
      const int rank = multi_index_rank(n, merged);
      S term = x[static_cast<int>(i)] * y[static_cast<int>(j)];
      if (sign < 0) term = -term;
      r[rank] += term;
    }
  }
  return r;
}

/// Like wedge, but degree overflow yields the zero 0-form as a sentinel.
template <class S>
BasicForm<S> wedge_or_zero(const BasicForm<S>& x, const BasicForm<S>& y) {
  if (x.n() != y.n()) throw std::invalid_argument("wedge: dimension mismatch");
  if (x.degree() + y.degree() > x.n()) return BasicForm<S>(x.n(), 0);
  return wedge(x, y);
}

/// s-fold exterior power, no factorial normalization; xi^0 = 1.
template <class S>
BasicForm<S> wedge_power(const BasicForm<S>& x, int s) {
  if (s < 0) throw std::invalid_argument("wedge_power: negative exponent");
  if (s * x.degree() > x.n())
    throw std::invalid_argument("wedge_power: degree s*k exceeds n");
  BasicForm<S> r = BasicForm<S>::scalar(x.n(), S(1));
  for (int i = 0; i < s; ++i) r = wedge(r, x);
  return r;
}

/// Euclidean scalar product in the orthonormal basis {e^I}.
template <class S>
S inner(const BasicForm<S>& x, const BasicForm<S>& y) {
  x.check_same_space(y);
  S r(0);
  for (int i = 0; i < x.dim(); ++i) r += x[i] * y[i];
  return r;
}

template <class S>
S norm_sq(const BasicForm<S>& x) {
  return inner(x, x);
}

inline double norm(const Form& x) { return std::sqrt(norm_sq(x)); }

/// Hodge star, defined by x ^ (*y) = <x; y> e^{1...n}.
template <class S>
BasicForm<S> hodge_star(const BasicForm<S>& x) {
  const int n = x.n(), k = x.degree();
  BasicForm<S> r(n, n - k);
  const auto& Is = multi_indices(n, k);
  for (std::size_t i = 0; i < Is.size(); ++i) {
    if (scalar_is_zero(x[static_cast<int>(i)])) continue;
    const MultiIndex comp = complement(Is[i], n);
    const int sign = merge_sign(Is[i], comp);
    S v = x[static_cast<int>(i)];
    if (sign < 0) v = -v;
    r[multi_index_rank(n, comp)] += v;
  }
  return r;
}

/// Interior product b ~| x for b of degree 1: the adjoint of left wedge,
/// <b ~| x, y> = <x, b ^ y>.
template <class S>
BasicForm<S> interior_product(const BasicForm<S>& b, const BasicForm<S>& x) {
  if (b.n() != x.n()) throw std::invalid_argument("interior: dimension mismatch");
  if (b.degree() != 1) throw std::invalid_argument("interior: left factor must have degree 1");
  if (x.degree() < 1) throw std::invalid_argument("interior: k = 0 has no interior product");
  const int n = x.n(), k = x.degree();
  BasicForm<S> r(n, k - 1);
  const auto& Js = multi_indices(n, k - 1);
  MultiIndex one(1);
  for (std::size_t j = 0; j < Js.size(); ++j) {
    S acc(0);
    for (int i = 1; i <= n; ++i) {
      if (scalar_is_zero(b[i - 1])) continue;
      one[0] = i;
      MultiIndex merged;
      const int sign = merge_sign(one, Js[j], &merged);
      if (sign == 0) continue;
      S term = b[i - 1] * x[multi_index_rank(n, merged)];
      if (sign < 0) term = -term;
      acc += term;
    }
    r[static_cast<int>(j)] = acc;
  }
  return r;
}

/// A linear map R^n -> R^n; entry(i, j) is the e^i-component of the image
/// of the j-th basis vector.
template <class S>
struct BasicLinearMap {
  int n = 0;
  std::vector<S> a;  // row-major n x n

  BasicLinearMap() = default;
  explicit BasicLinearMap(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, S(0)) {}

  static BasicLinearMap identity(int dim) {
    BasicLinearMap m(dim);
    for (int i = 0; i < dim; ++i) m.entry(i, i) = S(1);
    return m;
  }

  S& entry(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const S& entry(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

using LinearMap = BasicLinearMap<double>;

namespace detail {

// Determinant of the square submatrix with rows `rows`, columns `cols`,
// by cofactor expansion along the first row (sizes here are <= 6).
template <class S>
S minor_det(const BasicLinearMap<S>& T, const MultiIndex& rows, const MultiIndex& cols) {
  const int m = static_cast<int>(rows.size());
  if (m == 0) return S(1);
  if (m == 1) return T.entry(rows[0] - 1, cols[0] - 1);
  S det(0);
  MultiIndex sub_cols(cols.begin() + 1, cols.end());
  for (int j = 0; j < m; ++j) {
    if (j > 0) sub_cols[j - 1] = cols[j - 1];
    const S& pivot = T.entry(rows[0] - 1, cols[j] - 1);
    if (scalar_is_zero(pivot)) continue;
    MultiIndex sub_rows(rows.begin() + 1, rows.end());
    S term = pivot * minor_det(T, sub_rows, sub_cols);
    if (j % 2 == 1) term = -term;
    det += term;
  }
  return det;
}

}  // namespace detail

/// Matrix of the pullback T^*: Lambda^k -> Lambda^k on coefficient
/// vectors, row-major of size C(n,k)^2.  Entries are k x k minors of T:
/// (T^* e^J)_I = det T[J, I].
template <class S>
std::vector<S> pullback_matrix(const BasicLinearMap<S>& T, int k) {
  const int n = T.n;
  if (k < 0 || k > n) throw std::invalid_argument("pullback: invalid degree");
  const auto& Is = multi_indices(n, k);
  const int d = static_cast<int>(Is.size());
  std::vector<S> P(static_cast<std::size_t>(d) * d, S(0));
  for (int col = 0; col < d; ++col)
    for (int row = 0; row < d; ++row)
      P[static_cast<std::size_t>(row) * d + col] = detail::minor_det(T, Is[col], Is[row]);
  return P;
}

template <class S>
BasicForm<S> pullback_apply(const BasicLinearMap<S>& T, const BasicForm<S>& x) {
  const std::vector<S> P = pullback_matrix(T, x.degree());
  const int d = x.dim();
  BasicForm<S> r(x.n(), x.degree());
  for (int i = 0; i < d; ++i) {
    S acc(0);
    for (int j = 0; j < d; ++j) acc += P[static_cast<std::size_t>(i) * d + j] * x[j];
    r[i] = acc;
  }
  return r;
}

inline Eigen::MatrixXd pullback_matrix_eigen(const LinearMap& T, int k) {
  const std::vector<double> P = pullback_matrix(T, k);
  const int d = static_cast<int>(binomial(T.n, k));
  Eigen::MatrixXd M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = P[static_cast<std::size_t>(i) * d + j];
  return M;
}

/// Matrix of the Hodge star Lambda^k -> Lambda^{n-k} on coefficient vectors.
inline Eigen::MatrixXd hodge_star_matrix(int n, int k) {
  const auto& Is = multi_indices(n, k);
  const int din = static_cast<int>(Is.size());
  const int dout = static_cast<int>(binomial(n, n - k));
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dout, din);
  for (int j = 0; j < din; ++j) {
    const MultiIndex comp = complement(Is[j], n);
    H(multi_index_rank(n, comp), j) = merge_sign(Is[j], comp);
  }
  return H;
}

/// Hodge transform f_*(xi) = f(*xi), turning functions on Lambda^k into
/// functions on Lambda^{n-k}.
inline std::function<double(const Form&)> hodge_transform(std::function<double(const Form&)> f) {
  return [f = std::move(f)](const Form& xi) { return f(hodge_star(xi)); };
}

inline Eigen::VectorXd to_eigen(const Form& x) {
  Eigen::VectorXd v(x.dim());
  for (int i = 0; i < x.dim(); ++i) v[i] = x[i];
  return v;
}

inline Form from_eigen(int n, int k, const Eigen::VectorXd& v) {
  Form r(n, k);
  if (v.size() != r.dim()) throw std::invalid_argument("from_eigen: wrong length");
  for (int i = 0; i < r.dim(); ++i) r[i] = v[i];
  return r;
}

inline ExactForm to_exact(const Form& x) {
  ExactForm r(x.n(), x.degree());
  for (int i = 0; i < x.dim(); ++i) {
    // exact only for coefficients that are already rational-valued doubles
    r[i] = Rational(x[i]);
  }
  return r;
}

inline Form to_float(const ExactForm& x) {
  Form r(x.n(), x.degree());
  for (int i = 0; i < x.dim(); ++i) r[i] = to_double(x[i]);
  return r;
}

}  // namespace extconvex
