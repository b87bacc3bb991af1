// Python bindings for the main operations: the exterior algebra kernel,
// divisibility, the quadratic classifiers, quasiaffine extraction, the two
// counterexample constructions, and the grid front ends.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "extconvex/checks.hpp"
#include "extconvex/counterexamples.hpp"
#include "extconvex/divisibility.hpp"
#include "extconvex/fields.hpp"
#include "extconvex/json_io.hpp"
#include "extconvex/quadratic.hpp"
#include "extconvex/quasiaffine.hpp"

namespace py = pybind11;
using namespace extconvex;

namespace {

Form form_from_coeffs(int n, int k, const std::map<std::vector<int>, double>& coeffs) {
  Form f(n, k);
  for (const auto& [idx, v] : coeffs) f.set_coeff(idx, v);
  return f;
}

Eigen::MatrixXd matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
  Eigen::MatrixXd M(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c)
      throw std::invalid_argument("matrix rows have unequal lengths");
    for (int j = 0; j < c; ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return M;
}

std::vector<std::vector<double>> matrix_to_rows(const Eigen::MatrixXd& M) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(M.rows()));
  for (int i = 0; i < M.rows(); ++i) {
    rows[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(M.cols()));
    for (int j = 0; j < M.cols(); ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = M(i, j);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_extconvex, m) {
  m.doc() = "exterior-algebra convexity analyzers";

  py::class_<Form>(m, "Form")
      .def(py::init<int, int>(), py::arg("n"), py::arg("k"))
      .def(py::init(&form_from_coeffs), py::arg("n"), py::arg("k"), py::arg("coeffs"))
      .def_static("basis", &Form::basis, py::arg("n"), py::arg("index"))
      .def_property_readonly("n", &Form::n)
      .def_property_readonly("k", &Form::degree)
      .def_property_readonly("coeffs", [](const Form& f) { return f.coeffs(); })
      .def("coeff", [](const Form& f, const std::vector<int>& I) { return f.coeff(I); })
      .def("set_coeff",
           [](Form& f, const std::vector<int>& I, double v) { f.set_coeff(I, v); })
      .def("is_zero", &Form::is_zero)
      .def("__add__", [](const Form& a, const Form& b) { return a + b; })
      .def("__sub__", [](const Form& a, const Form& b) { return a - b; })
      .def("__neg__", [](const Form& a) { return -a; })
      .def("__mul__", [](const Form& a, double s) { return a * s; })
      .def("__rmul__", [](const Form& a, double s) { return a * s; })
      .def("__repr__", [](const Form& f) { return form_to_json(f).dump(); });

  m.def("wedge", &wedge<double>, py::arg("x"), py::arg("y"));
  m.def("wedge_power", &wedge_power<double>, py::arg("x"), py::arg("s"));
  m.def("inner", &inner<double>, py::arg("x"), py::arg("y"));
  m.def("norm_sq", &norm_sq<double>, py::arg("x"));
  m.def("hodge_star", &hodge_star<double>, py::arg("x"));
  m.def("interior_product", &interior_product<double>, py::arg("b"), py::arg("x"));
  m.def(
      "pullback_matrix",
      [](const std::vector<std::vector<double>>& T, int k) {
        const Eigen::MatrixXd M = matrix_from_rows(T);
        LinearMap lin(static_cast<int>(M.rows()));
        for (int i = 0; i < M.rows(); ++i)
          for (int j = 0; j < M.cols(); ++j) lin.entry(i, j) = M(i, j);
        return matrix_to_rows(pullback_matrix_eigen(lin, k));
      },
      py::arg("T"), py::arg("k"));

  py::class_<DivisibilityResult>(m, "DivisibilityResult")
      .def_readonly("divisible", &DivisibilityResult::divisible)
      .def_readonly("factor_a", &DivisibilityResult::factor_a)
      .def_readonly("factor_b", &DivisibilityResult::factor_b)
      .def_readonly("kernel_dim", &DivisibilityResult::kernel_dim);
  m.def("one_divisible", &one_divisible, py::arg("x"), py::arg("rel_tol") = 1e-10);
  m.def("form_rank", &form_rank, py::arg("x"), py::arg("rel_tol") = 1e-10);

  py::class_<QuadraticFormOnForms>(m, "QuadraticForm")
      .def(py::init([](int n, int k, const std::vector<std::vector<double>>& M) {
             return QuadraticFormOnForms(n, k, matrix_from_rows(M));
           }),
           py::arg("n"), py::arg("k"), py::arg("M"))
      .def_static("identity", &QuadraticFormOnForms::identity, py::arg("n"), py::arg("k"))
      .def_readonly("n", &QuadraticFormOnForms::n)
      .def_readonly("k", &QuadraticFormOnForms::k)
      .def_property_readonly("M", [](const QuadraticFormOnForms& q) { return matrix_to_rows(q.M); })
      .def("eval", &QuadraticFormOnForms::eval)
      .def("min_eigenvalue", &QuadraticFormOnForms::min_eigenvalue);
  m.def("serre_form", &build_serre_form);

  py::class_<GammaResult>(m, "GammaResult")
      .def_readonly("gamma", &GammaResult::gamma)
      .def_readonly("argmin_a", &GammaResult::argmin_a)
      .def_readonly("argmin_b", &GammaResult::argmin_b)
      .def_readonly("converged", &GammaResult::converged);
  m.def("gamma_infimum", &gamma_infimum, py::arg("q"), py::arg("restarts") = 64,
        py::arg("tol") = 1e-10, py::arg("seed") = 1);
  m.def("gamma_supremum", &gamma_supremum, py::arg("q"), py::arg("restarts") = 64,
        py::arg("tol") = 1e-10, py::arg("seed") = 1);

  py::class_<OneConvexityResult>(m, "OneConvexityResult")
      .def_readonly("ext_one_convex", &OneConvexityResult::ext_one_convex)
      .def_readonly("gamma", &OneConvexityResult::gamma)
      .def_readonly("witness", &OneConvexityResult::witness);
  m.def("is_ext_one_convex", &is_ext_one_convex, py::arg("q"), py::arg("tol") = 1e-8,
        py::arg("restarts") = 64, py::arg("seed") = 1);

  py::enum_<CertificateStatus>(m, "CertificateStatus")
      .value("polyconvex", CertificateStatus::polyconvex)
      .value("not_certified", CertificateStatus::not_certified);
  py::class_<CertificateResult>(m, "CertificateResult")
      .def_readonly("status", &CertificateResult::status)
      .def_readonly("beta", &CertificateResult::beta)
      .def_readonly("achieved_min_eig", &CertificateResult::achieved_min_eig)
      .def_readonly("iterations", &CertificateResult::iterations);
  m.def(
      "polyconvexity_certificate",
      [](const QuadraticFormOnForms& q, int max_iter, double tol) {
        CertificateOptions opt;
        opt.max_iter = max_iter;
        opt.tol = tol;
        return polyconvexity_certificate(q, opt);
      },
      py::arg("q"), py::arg("max_iter") = 5000, py::arg("tol") = 1e-8);
  m.def("marcellini_lambda", &marcellini_lambda, py::arg("q"), py::arg("tol") = 1e-8);
  m.def("proposition_c_constant", &proposition_c_constant, py::arg("alpha"),
        py::arg("restarts") = 200, py::arg("seed") = 1);

  py::class_<PolyaffineRep>(m, "PolyaffineRep")
      .def(py::init<int, int>(), py::arg("n"), py::arg("k"))
      .def(py::init<int, int, std::vector<Form>>(), py::arg("n"), py::arg("k"), py::arg("c"))
      .def_readonly("n", &PolyaffineRep::n)
      .def_readonly("k", &PolyaffineRep::k)
      .def_readonly("c", &PolyaffineRep::c);
  m.def("eval_polyaffine", &eval_polyaffine, py::arg("rep"), py::arg("x"));
  m.def("random_polyaffine", &random_polyaffine, py::arg("n"), py::arg("k"), py::arg("seed"),
        py::arg("canonical_odd") = true);
  m.def(
      "extract_representation",
      [](const std::function<double(const Form&)>& f, int n, int k) {
        const auto res = extract_representation(f, n, k);
        return py::make_tuple(res.rep, res.max_residual, res.ok);
      },
      py::arg("f"), py::arg("n"), py::arg("k"));
  m.def(
      "verify_ext_one_affine",
      [](const std::function<double(const Form&)>& f, int n, int k, int samples,
         std::uint64_t seed) {
        const auto rep = verify_ext_one_affine(f, n, k, samples, seed);
        return py::make_tuple(rep.passed, rep.max_rel_residual);
      },
      py::arg("f"), py::arg("n"), py::arg("k"), py::arg("samples") = 200, py::arg("seed") = 1);

  py::class_<SverakConstruction>(m, "SverakConstruction")
      .def_readonly("k", &SverakConstruction::k)
      .def_readonly("n", &SverakConstruction::n)
      .def_readonly("alpha", &SverakConstruction::alpha)
      .def_readonly("beta", &SverakConstruction::beta)
      .def_readonly("gamma", &SverakConstruction::gamma)
      .def("coords", &SverakConstruction::coords)
      .def("from_coords", &SverakConstruction::from_coords);
  m.def("build_sverak", &build_sverak, py::arg("k"));
  m.def("sverak_integral", &sverak_integral, py::arg("c"), py::arg("eps"),
        py::arg("gamma_pen"), py::arg("quad_points") = 256);
  m.def(
      "serre_violation",
      [](const Form& alpha, double gamma) {
        const auto v = serre_violation(alpha, gamma);
        return py::make_tuple(std::vector<double>{v.a, v.b, v.c, v.d}, v.value, v.case_id);
      },
      py::arg("alpha"), py::arg("gamma"));

  m.def(
      "run_suite_check",
      [](const std::string& name, std::uint64_t seed, bool full) {
        const auto res = run_suite_check(name, seed, full);
        return py::make_tuple(res.passed, res.seconds, res.details.dump());
      },
      py::arg("name"), py::arg("seed") = 2024, py::arg("full") = false);
  m.def("suite_check_names", &suite_check_names);

  m.def("form_to_json", [](const Form& f) { return form_to_json(f).dump(); });
  m.def("form_from_json",
        [](const std::string& s) { return form_from_json(nlohmann::json::parse(s)); });
}
