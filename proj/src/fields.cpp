#include "extconvex/fields.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <thread>

#include <nlohmann/json.hpp>

#include "extconvex/rng.hpp"

namespace extconvex {

int grid_thread_count() {
  static const int count = [] {
    const char* env = std::getenv("EXTCONVEX_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(v, 1, std::max(1, hw));
  }();
  return count;
}

namespace {

constexpr std::int64_t kChunk = 1 << 14;

// Deterministic chunked loop: body(begin, end, chunk_index).  Chunk
// boundaries are fixed, so per-chunk partial results are identical for any
// thread count.
template <class Body>
void for_chunks(std::int64_t count, std::int64_t num_chunks, const Body& body) {
  const int threads = grid_thread_count();
  if (threads <= 1 || num_chunks <= 1) {
    for (std::int64_t c = 0; c < num_chunks; ++c)
      body(c * kChunk, std::min(count, (c + 1) * kChunk), c);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::int64_t> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= num_chunks) return;
        body(c * kChunk, std::min(count, (c + 1) * kChunk), c);
      }
    });
  for (auto& th : pool) th.join();
}

template <class Body>
void parallel_nodes(std::int64_t count, const Body& body) {
  for_chunks(count, (count + kChunk - 1) / kChunk, body);
}

// Per-chunk partial sums combined in fixed chunk order.
template <class Body>
double deterministic_sum(std::int64_t count, const Body& body) {
  const std::int64_t num_chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(num_chunks), 0.0);
  for_chunks(count, num_chunks, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
    double acc = 0.0;
    body(b, e, acc);
    partial[static_cast<std::size_t>(c)] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

struct DTerm {
  int axis;     // 0-based
  int comp_in;  // rank in Lambda^k
  double sign;
};

// For every output component K of degree k+1, the k+1 source components.
std::vector<std::vector<DTerm>> d_terms(int n, int k) {
  const auto& Ks = multi_indices(n, k + 1);
  std::vector<std::vector<DTerm>> terms(Ks.size());
  for (std::size_t c = 0; c < Ks.size(); ++c) {
    const MultiIndex& K = Ks[c];
    for (std::size_t j = 0; j < K.size(); ++j) {
      MultiIndex sub;
      sub.reserve(K.size() - 1);
      for (std::size_t m = 0; m < K.size(); ++m)
        if (m != j) sub.push_back(K[m]);
      terms[c].push_back({K[j] - 1, multi_index_rank(n, sub), j % 2 == 0 ? 1.0 : -1.0});
    }
  }
  return terms;
}

struct GridGeometry {
  int n, N;
  std::vector<std::int64_t> stride;

  explicit GridGeometry(const GridSpec& s) : n(s.n), N(s.N), stride(s.n) {
    std::int64_t acc = 1;
    for (int a = n - 1; a >= 0; --a) {
      stride[a] = acc;
      acc *= N;
    }
  }

  void coords_of(std::int64_t idx, std::vector<int>& c) const {
    for (int a = n - 1; a >= 0; --a) {
      c[a] = static_cast<int>(idx % N);
      idx /= N;
    }
  }
};

}  // namespace

GridField discrete_d(const GridField& f) {
  const GridSpec& spec = f.spec;
  if (f.k >= spec.n) throw std::invalid_argument("discrete_d: k = n has no exterior derivative");
  GridField out(spec, f.k + 1);
  const auto terms = d_terms(spec.n, f.k);
  const GridGeometry geo(spec);
  const int nc_in = f.ncomp(), nc_out = out.ncomp();
  const double inv_h = 1.0 / spec.h();
  const bool torus = spec.domain == Domain::torus;
  const int N = spec.N;

  parallel_nodes(spec.nodes(), [&](std::int64_t b, std::int64_t e, std::int64_t) {
    std::vector<int> c(spec.n);
    for (std::int64_t idx = b; idx < e; ++idx) {
      geo.coords_of(idx, c);
      const double* in = f.values.data() + idx * nc_in;
      double* o = out.values.data() + idx * nc_out;
      for (int comp = 0; comp < nc_out; ++comp) {
        double acc = 0.0;
        for (const DTerm& t : terms[comp]) {
          const std::int64_t s = geo.stride[t.axis];
          double diff;
          if (c[t.axis] < N - 1) {
            diff = f.values[(idx + s) * nc_in + t.comp_in] - in[t.comp_in];
          } else if (torus) {
            diff = f.values[(idx - s * (N - 1)) * nc_in + t.comp_in] - in[t.comp_in];
          } else {
            diff = in[t.comp_in] - f.values[(idx - s) * nc_in + t.comp_in];
          }
          acc += t.sign * diff * inv_h;
        }
        o[comp] = acc;
      }
    }
  });
  return out;
}

GridField discrete_d_adjoint(const GridField& f) {
  const GridSpec& spec = f.spec;
  if (f.k < 1) throw std::invalid_argument("discrete_d_adjoint: degree must be >= 1");
  GridField out(spec, f.k - 1);
  const GridGeometry geo(spec);
  const int nc_in = f.ncomp(), nc_out = out.ncomp();
  const double inv_h = 1.0 / spec.h();
  const bool torus = spec.domain == Domain::torus;
  const int N = spec.N;

  // Gather form of the transpose: output component I at x receives, for
  // every axis a not in I with K = I u {a}, the 1-D transposed difference
  // of component K along axis a.
  const int lower = f.k - 1;
  std::vector<std::vector<DTerm>> gather(static_cast<std::size_t>(nc_out));
  {
    const auto fwd = d_terms(spec.n, lower);  // indexed by K, entries carry I
    for (std::size_t cK = 0; cK < fwd.size(); ++cK)
      for (const DTerm& t : fwd[cK])
        gather[static_cast<std::size_t>(t.comp_in)].push_back(
            {t.axis, static_cast<int>(cK), t.sign});
  }

  parallel_nodes(spec.nodes(), [&](std::int64_t b, std::int64_t e, std::int64_t) {
    std::vector<int> c(spec.n);
    for (std::int64_t idx = b; idx < e; ++idx) {
      geo.coords_of(idx, c);
      double* o = out.values.data() + idx * nc_out;
      for (int comp = 0; comp < nc_out; ++comp) {
        double acc = 0.0;
        for (const DTerm& t : gather[static_cast<std::size_t>(comp)]) {
          const std::int64_t s = geo.stride[t.axis];
          const int y = c[t.axis];
          auto w = [&](std::int64_t along) {  // component comp_in of f, offset along axis
            return f.values[(idx + s * along) * nc_in + t.comp_in];
          };
          double val = 0.0;
          if (torus) {
            // transpose of the cyclic forward difference: -backward
            const double prev = y > 0 ? w(-1) : f.values[(idx + s * (N - 1)) * nc_in + t.comp_in];
            val = (prev - w(0)) * inv_h;
          } else {
            if (y >= 1) val += w(-1) * inv_h;
            if (y <= N - 2) val -= w(0) * inv_h;
            if (y == N - 2) val -= w(1) * inv_h;         // edge row backward stencil
            if (y == N - 1) val += w(0) * inv_h;
          }
          acc += t.sign * val;
        }
        o[comp] = acc;
      }
    }
  });
  return out;
}

GridField discrete_delta(const GridField& f) {
  const GridSpec& spec = f.spec;
  if (spec.domain != Domain::torus)
    throw std::invalid_argument("discrete_delta: implemented on the torus only");
  if (f.k < 1) throw std::invalid_argument("discrete_delta: k = 0 has no codifferential");
  const int n = spec.n, k = f.k;
  const GridGeometry geo(spec);
  const int N = spec.N;
  const double inv_h = 1.0 / spec.h();

  // Pointwise star tables: Lambda^k -> Lambda^{n-k} and
  // Lambda^{n-k+1} -> Lambda^{k-1}.
  auto star_table = [&](int deg) {
    const auto& Is = multi_indices(n, deg);
    std::vector<std::pair<int, double>> tab(Is.size());
    for (std::size_t i = 0; i < Is.size(); ++i) {
      const MultiIndex comp = complement(Is[i], n);
      tab[i] = {multi_index_rank(n, comp), static_cast<double>(merge_sign(Is[i], comp))};
    }
    return tab;
  };
  const auto star_in = star_table(k);
  const auto terms = d_terms(n, n - k);  // for the middle backward-difference d
  const auto star_out = star_table(n - k + 1);

  // Adjointness of the chain fixes the sign; it flips the bare
  // (-1)^{n(k-1)} * (d(* .)) formula (integration by parts carries a minus).
  const double sign = (n * (k - 1)) % 2 == 0 ? -1.0 : 1.0;

  GridField starred(spec, n - k);
  const int nc_f = f.ncomp(), nc_st = starred.ncomp();
  parallel_nodes(spec.nodes(), [&](std::int64_t b, std::int64_t e, std::int64_t) {
    for (std::int64_t idx = b; idx < e; ++idx) {
      const double* in = f.values.data() + idx * nc_f;
      double* o = starred.values.data() + idx * nc_st;
      for (int comp = 0; comp < nc_f; ++comp)
        o[star_in[static_cast<std::size_t>(comp)].first] =
            star_in[static_cast<std::size_t>(comp)].second * in[comp];
    }
  });

  GridField mid(spec, n - k + 1);
  const int nc_mid = mid.ncomp();
  parallel_nodes(spec.nodes(), [&](std::int64_t b, std::int64_t e, std::int64_t) {
    std::vector<int> c(spec.n);
    for (std::int64_t idx = b; idx < e; ++idx) {
      geo.coords_of(idx, c);
      double* o = mid.values.data() + idx * nc_mid;
      for (int comp = 0; comp < nc_mid; ++comp) {
        double acc = 0.0;
        for (const DTerm& t : terms[static_cast<std::size_t>(comp)]) {
          const std::int64_t s = geo.stride[t.axis];
          const std::int64_t prev = c[t.axis] > 0 ? idx - s : idx + s * (N - 1);
          acc += t.sign *
                 (starred.values[idx * nc_st + t.comp_in] - starred.values[prev * nc_st + t.comp_in]) *
                 inv_h;
        }
        o[comp] = acc;
      }
    }
  });

  GridField result(spec, k - 1);
  const int nc_res = result.ncomp();
  parallel_nodes(spec.nodes(), [&](std::int64_t b, std::int64_t e, std::int64_t) {
    for (std::int64_t idx = b; idx < e; ++idx) {
      const double* in = mid.values.data() + idx * nc_mid;
      double* o = result.values.data() + idx * nc_res;
      for (int comp = 0; comp < nc_mid; ++comp)
        o[star_out[static_cast<std::size_t>(comp)].first] =
            sign * star_out[static_cast<std::size_t>(comp)].second * in[comp];
    }
  });
  return result;
}

std::vector<double> grid_mean(const GridField& f) {
  const int nc = f.ncomp();
  const std::int64_t count = f.spec.nodes();
  std::vector<double> mean(nc, 0.0);
  for (int comp = 0; comp < nc; ++comp) {
    mean[comp] = deterministic_sum(count, [&](std::int64_t b, std::int64_t e, double& acc) {
                   for (std::int64_t i = b; i < e; ++i) acc += f.values[i * nc + comp];
                 }) /
                 static_cast<double>(count);
  }
  return mean;
}

double grid_inner(const GridField& a, const GridField& b) {
  if (!(a.spec == b.spec) || a.k != b.k) throw std::invalid_argument("grid_inner: mismatch");
  const std::int64_t total = static_cast<std::int64_t>(a.values.size());
  const double s = deterministic_sum(total, [&](std::int64_t lo, std::int64_t hi, double& acc) {
    for (std::int64_t i = lo; i < hi; ++i) acc += a.values[i] * b.values[i];
  });
  double hn = 1.0;
  for (int i = 0; i < a.spec.n; ++i) hn *= a.spec.h();
  return s * hn;
}

GridField random_periodic_field(const GridSpec& spec, int k, std::uint64_t seed,
                                double amplitude, int max_freq) {
  if (spec.domain != Domain::torus)
    throw std::invalid_argument("random_periodic_field: torus only");
  GridField f(spec, k);
  const int nc = f.ncomp();
  const GridGeometry geo(spec);
  constexpr int kModes = 3;
  constexpr double two_pi = 6.283185307179586476925286766559;

  struct Mode {
    std::vector<int> freq;
    double amp, phase;
  };
  Rng root(seed);
  std::vector<std::vector<Mode>> modes(static_cast<std::size_t>(nc));
  for (int comp = 0; comp < nc; ++comp) {
    Rng rng = root.fork(static_cast<std::uint64_t>(comp));
    for (int m = 0; m < kModes; ++m) {
      Mode mode;
      mode.freq.resize(spec.n);
      bool nonzero = false;
      for (int a = 0; a < spec.n; ++a) {
        mode.freq[a] = rng.uniform_int(-max_freq, max_freq);
        nonzero |= mode.freq[a] != 0;
      }
      if (!nonzero) mode.freq[0] = 1;
      mode.amp = amplitude / kModes * rng.uniform(0.5, 1.0);
      mode.phase = rng.uniform(0.0, two_pi);
      modes[static_cast<std::size_t>(comp)].push_back(std::move(mode));
    }
  }

  parallel_nodes(spec.nodes(), [&](std::int64_t b, std::int64_t e, std::int64_t) {
    std::vector<int> c(spec.n);
    for (std::int64_t idx = b; idx < e; ++idx) {
      geo.coords_of(idx, c);
      double* o = f.values.data() + idx * nc;
      for (int comp = 0; comp < nc; ++comp) {
        double v = 0.0;
        for (const Mode& m : modes[static_cast<std::size_t>(comp)]) {
          double arg = m.phase;
          for (int a = 0; a < spec.n; ++a)
            arg += two_pi * m.freq[a] * (static_cast<double>(c[a]) / spec.N);
          v += m.amp * std::sin(arg);
        }
        o[comp] = v;
      }
    }
  });
  return f;
}

namespace {

// mean over nodes of f(xi + d omega), plus the gradient with respect to
// omega when `grad_out` is given.
double envelope_objective(const FormFunction& f, const FormGradient* grad,
                          const Form& xi, const GridField& omega, GridField* grad_out) {
  const GridField dw = discrete_d(omega);
  const std::int64_t count = omega.spec.nodes();
  const int nc = dw.ncomp();
  GridField per_node_grad;
  if (grad_out) per_node_grad = GridField(omega.spec, dw.k);

  double total = 0.0;
  {
    const std::int64_t num_chunks = (count + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<std::size_t>(num_chunks), 0.0);
    // scratch form per chunk keeps this thread-safe
    for_chunks(count, num_chunks, [&](std::int64_t b, std::int64_t e, std::int64_t c) {
      Form scratch = xi;
      double acc = 0.0;
      for (std::int64_t idx = b; idx < e; ++idx) {
        const double* v = dw.values.data() + idx * nc;
        for (int comp = 0; comp < nc; ++comp) scratch[comp] = xi[comp] + v[comp];
        acc += f(scratch);
        if (grad_out) {
          const Form g = (*grad)(scratch);
          double* go = per_node_grad.values.data() + idx * nc;
          for (int comp = 0; comp < nc; ++comp) go[comp] = g[comp];
        }
      }
      partial[static_cast<std::size_t>(c)] = acc;
    });
    for (double p : partial) total += p;
  }
  if (grad_out) {
    *grad_out = discrete_d_adjoint(per_node_grad);
    const double scale = 1.0 / static_cast<double>(count);
    for (double& v : grad_out->values) v *= scale;
  }
  return total / static_cast<double>(count);
}

double field_norm(const GridField& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(s);
}

// Monotone first-order descent with Armijo backtracking; returns the best
// objective reached.  `project` pins Dirichlet values (may be null).
template <class Objective, class Project>
double descend(GridField& x, const Objective& fg, const Project& project, int max_iter,
               double tol, int* iters_out, double* grad_norm_out,
               std::vector<double>* trace) {
  GridField grad;
  double fx = fg(x, &grad);
  project(grad);
  if (trace) trace->push_back(fx);
  double step = 1.0;
  int it = 0;
  double gn = field_norm(grad);
  for (; it < max_iter; ++it) {
    if (gn <= tol * (1.0 + std::abs(fx))) break;
    const double g2 = gn * gn;
    GridField cand;
    double fc = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      cand = x;
      for (std::size_t i = 0; i < cand.values.size(); ++i)
        cand.values[i] -= step * grad.values[i];
      GridField cand_grad;
      fc = fg(cand, &cand_grad);
      if (std::isfinite(fc) && fc <= fx - 1e-4 * step * g2) {
        x = std::move(cand);
        grad = std::move(cand_grad);
        project(grad);
        gn = field_norm(grad);
        fx = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // line search exhausted: stationary to resolution
    if (trace) trace->push_back(fx);
    step *= 2.0;
  }
  if (iters_out) *iters_out = it;
  if (grad_norm_out) *grad_norm_out = gn;
  return fx;
}

}  // namespace

EnvelopeResult envelope_estimate(const FormFunction& f, const FormGradient& grad,
                                 const Form& xi, const GridSpec& spec,
                                 const EnvelopeOptions& opt) {
  if (spec.domain != Domain::torus)
    throw std::invalid_argument("envelope_estimate: torus only");
  if (xi.n() != spec.n) throw std::invalid_argument("envelope_estimate: xi dimension mismatch");
  const int k = xi.degree();
  if (k < 1) throw std::invalid_argument("envelope_estimate: degree must be >= 1");

  EnvelopeResult res;
  res.zero_field_value = f(xi);
  if (!std::isfinite(res.zero_field_value))
    throw std::runtime_error("envelope_estimate: non-finite objective");
  res.estimate = std::numeric_limits<double>::infinity();

  auto objective = [&](const GridField& w, GridField* g) {
    const double v = envelope_objective(f, &grad, xi, w, g);
    if (!std::isfinite(v)) throw std::runtime_error("envelope_estimate: non-finite objective");
    return v;
  };
  auto no_project = [](GridField&) {};

  std::vector<GridField> starts;
  starts.emplace_back(spec, k - 1);  // zero field
  if (opt.warm_start) {
    if (!(opt.warm_start->spec == spec) || opt.warm_start->k != k - 1)
      throw std::invalid_argument("envelope_estimate: bad warm start");
    starts.push_back(*opt.warm_start);
  }
  for (int r = static_cast<int>(starts.size()); r < opt.restarts + 1; ++r)
    starts.push_back(random_periodic_field(spec, k - 1, opt.seed + static_cast<std::uint64_t>(r),
                                           opt.init_amplitude));

  for (std::size_t s = 0; s < starts.size(); ++s) {
    GridField w = starts[s];
    int iters = 0;
    double gn = 0.0;
    const double v = descend(w, objective, no_project, opt.max_iter, opt.tol, &iters, &gn, nullptr);
    res.iterations += iters;
    if (v < res.estimate) {
      res.estimate = v;
      res.converged = gn <= opt.tol * (1.0 + std::abs(v));
    }
  }
  return res;
}

MinimizationReport minimize_dirichlet(const FormFunction& f, const FormGradient& grad,
                                      const GridField& omega0, const MinimizeOptions& opt) {
  const GridSpec& spec = omega0.spec;
  if (spec.domain != Domain::box)
    throw std::invalid_argument("minimize_dirichlet: box domain required");
  const int k1 = omega0.k;  // degree of omega (= k-1 for the energy on k-forms)
  if (k1 >= spec.n) throw std::invalid_argument("minimize_dirichlet: omega degree too large");

  const GridGeometry geo(spec);
  const std::int64_t count = spec.nodes();
  const int nc = omega0.ncomp();
  std::vector<char> boundary(static_cast<std::size_t>(count), 0);
  {
    std::vector<int> c(spec.n);
    for (std::int64_t idx = 0; idx < count; ++idx) {
      geo.coords_of(idx, c);
      for (int a = 0; a < spec.n; ++a)
        if (c[a] == 0 || c[a] == spec.N - 1) {
          boundary[static_cast<std::size_t>(idx)] = 1;
          break;
        }
    }
  }

  double hn = 1.0;
  for (int i = 0; i < spec.n; ++i) hn *= spec.h();

  auto objective = [&](const GridField& w, GridField* g) {
    const double mean = envelope_objective(f, &grad, Form(spec.n, k1 + 1), w, g);
    if (g)
      for (double& v : g->values) v *= static_cast<double>(count) * hn;
    return mean * static_cast<double>(count) * hn;
  };
  auto project = [&](GridField& g) {
    for (std::int64_t idx = 0; idx < count; ++idx)
      if (boundary[static_cast<std::size_t>(idx)]) {
        double* p = g.values.data() + idx * nc;
        for (int comp = 0; comp < nc; ++comp) p[comp] = 0.0;
      }
  };

  MinimizationReport rep;
  GridField w = omega0;
  int iters = 0;
  double gn = 0.0;
  rep.final_energy =
      descend(w, objective, project, opt.max_iter, opt.tol, &iters, &gn, &rep.energy_trace);
  rep.iterations = iters;
  rep.gradient_norm = gn;
  rep.d_omega = discrete_d(w);
  return rep;
}

void write_grid_field(const std::string& path, const GridField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const char magic[8] = {'E', 'X', 'T', 'C', 'G', 'R', 'I', 'D'};
  out.write(magic, 8);
  const std::uint32_t header[5] = {1u, static_cast<std::uint32_t>(f.spec.n),
                                   static_cast<std::uint32_t>(f.k),
                                   static_cast<std::uint32_t>(f.spec.N),
                                   f.spec.domain == Domain::torus ? 0u : 1u};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed writing " + path);

  nlohmann::json meta;
  meta["format"] = "extconvex-grid-field";
  meta["version"] = 1;
  meta["n"] = f.spec.n;
  meta["k"] = f.k;
  meta["N"] = f.spec.N;
  meta["domain"] = f.spec.domain == Domain::torus ? "torus" : "box";
  meta["components"] = f.ncomp();
  std::ofstream side(path + ".json");
  side << meta.dump(2) << "\n";
}

GridField read_grid_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "EXTCGRID", 8) != 0)
    throw std::runtime_error(path + ": not a grid field file");
  std::uint32_t header[5];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || header[0] != 1u) throw std::runtime_error(path + ": unsupported version");
  GridSpec spec{static_cast<int>(header[1]), static_cast<int>(header[3]),
                header[4] == 0u ? Domain::torus : Domain::box};
  GridField f(spec, static_cast<int>(header[2]));
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error(path + ": truncated data");
  return f;
}

}  // namespace extconvex
