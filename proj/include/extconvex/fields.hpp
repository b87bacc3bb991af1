#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "extconvex/form.hpp"

namespace extconvex {

enum class Domain { torus, box };

/// Regular grid over the unit box: N points per axis, either periodic
/// ([0,1)^n, spacing 1/N) or with Dirichlet trace ([0,1]^n, spacing
/// 1/(N-1)).
struct GridSpec {
  int n = 1;
  int N = 2;
  Domain domain = Domain::torus;

  double h() const { return domain == Domain::torus ? 1.0 / N : 1.0 / (N - 1); }
  std::int64_t nodes() const {
    std::int64_t m = 1;
    for (int i = 0; i < n; ++i) m *= N;
    return m;
  }
  bool operator==(const GridSpec&) const = default;
};

/// Discrete k-form field: one coefficient vector per grid node, node-major
/// row-major layout (last axis fastest).
struct GridField {
  GridSpec spec;
  int k = 0;
  std::vector<double> values;

  GridField() = default;
  GridField(const GridSpec& s, int degree)
      : spec(s), k(degree),
        values(static_cast<std::size_t>(s.nodes()) * binomial(s.n, degree), 0.0) {
    if (degree < 0 || degree > s.n) throw std::invalid_argument("grid field: invalid degree");
    if (s.N < 2) throw std::invalid_argument("grid field: need N >= 2");
  }

  int ncomp() const { return static_cast<int>(binomial(spec.n, k)); }
  double* node(std::int64_t idx) { return values.data() + idx * ncomp(); }
  const double* node(std::int64_t idx) const { return values.data() + idx * ncomp(); }
};

/// Forward-difference exterior derivative (one-sided at the right edge on
/// the box).  d(d(.)) = 0 holds exactly on both domains.
GridField discrete_d(const GridField& f);

/// Exact transpose of discrete_d with respect to the plain (unweighted)
/// coefficient dot product.
GridField discrete_d_adjoint(const GridField& f);

/// Codifferential on the torus: +/- *(d_backward(*w)), signed to be the
/// grid adjoint of discrete_d.
GridField discrete_delta(const GridField& f);

/// Smooth random 1-periodic field (a few low Fourier modes per component).
GridField random_periodic_field(const GridSpec& spec, int k, std::uint64_t seed,
                                double amplitude = 0.3, int max_freq = 2);

/// Componentwise mean over all nodes.
std::vector<double> grid_mean(const GridField& f);

/// Sum of pointwise coefficient products times h^n.
double grid_inner(const GridField& a, const GridField& b);

using FormFunction = std::function<double(const Form&)>;
using FormGradient = std::function<Form(const Form&)>;

struct EnvelopeOptions {
  int restarts = 2;
  std::uint64_t seed = 1;
  int max_iter = 400;
  double tol = 1e-8;
  double init_amplitude = 0.05;
  const GridField* warm_start = nullptr;
};

struct EnvelopeResult {
  double estimate = 0.0;          // best mean found: an upper bound on f(xi)
  double zero_field_value = 0.0;  // = f(xi)
  int iterations = 0;
  bool converged = false;
};

/// Estimates the ext. quasiconvex envelope at xi by minimizing
/// mean f(xi + d omega) over periodic (k-1)-fields.  Upper bound on f(xi)
/// and a discretization-biased estimate of the envelope.
EnvelopeResult envelope_estimate(const FormFunction& f, const FormGradient& grad,
                                 const Form& xi, const GridSpec& spec,
                                 const EnvelopeOptions& opt = {});

struct MinimizeOptions {
  int max_iter = 50000;
  double tol = 1e-6;  // stop when |grad| <= tol * (1 + |energy|)
};

struct MinimizationReport {
  std::vector<double> energy_trace;  // non-increasing
  double final_energy = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  GridField d_omega;  // the gauge-invariant quantity
};

/// Minimizes sum_nodes f(d omega) * h^n over interior degrees of freedom on
/// the box; boundary nodes stay pinned to omega0.
MinimizationReport minimize_dirichlet(const FormFunction& f, const FormGradient& grad,
                                      const GridField& omega0, const MinimizeOptions& opt = {});

/// Binary format: "EXTCGRID" magic, u32 version/n/k/N/domain, float64 data;
/// a JSON sidecar with the same metadata is written next to it.
void write_grid_field(const std::string& path, const GridField& f);
GridField read_grid_field(const std::string& path);

/// Thread count for grid loops (EXTCONVEX_THREADS, default 1).  Reductions
/// are chunked deterministically, so results do not depend on this.
int grid_thread_count();

}  // namespace extconvex
