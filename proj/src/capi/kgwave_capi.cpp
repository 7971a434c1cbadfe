// SPDX-License-Identifier: Apache-2.0
#include "kgwave/kgwave.h"

#include <exception>
#include <memory>
#include <new>
#include <string>

#include "core/commands.hpp"
#include "core/config.hpp"
#include "core/flatlab.hpp"
#include "core/io.hpp"
#include "core/parallel.hpp"
#include "core/solver.hpp"

struct kgw_solution {
  kgw::Solution sol;
  std::unique_ptr<kgw::FieldEvaluator> ev;
};

namespace {

thread_local std::string g_last_error;

kgw_status to_status(kgw::ErrorCode c) { return static_cast<kgw_status>(static_cast<int>(c)); }

template <class F>
kgw_status guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const kgw::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KGW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KGW_ERR_INTERNAL;
  }
}

kgw::RunOptions convert(const kgw_run_options* o) {
  kgw::RunOptions r;
  if (!o) return r;
  if (o->config_path) r.config_path = o->config_path;
  if (o->out_dir) r.out_dir = o->out_dir;
  r.serial = o->serial != 0;
  if (o->tol > 0.0) r.tol = o->tol;
  if (o->tau > 0.0) r.tau = o->tau;
  if (o->ncmax > 0) r.ncmax = o->ncmax;
  if (o->grid) r.grid = std::string(o->grid);
  if (o->b_grid) r.b_grid = std::string(o->b_grid);
  r.quiet = o->quiet != 0;
  return r;
}

template <class Cmd>
kgw_status run(Cmd cmd, const kgw_run_options* opt) {
  return guarded([&] {
    if (!opt) kgw::fail(kgw::ErrorCode::InvalidArgument, "run options must not be null");
    const int rc = cmd(convert(opt));
    if (rc == 3) g_last_error = "solver did not converge";
    else if (rc != 0) g_last_error = "command reported failures";
    return rc == 0 ? KGW_OK : rc == 3 ? KGW_ERR_CONVERGENCE : KGW_ERR_INTERNAL;
  });
}

}  // namespace

extern "C" {

const char* kgw_version(void) { return kgw::kVersion; }

const char* kgw_last_error(void) { return g_last_error.c_str(); }

kgw_status kgw_set_num_threads(int n) {
  return guarded([&] {
    if (n < 0) kgw::fail(kgw::ErrorCode::InvalidArgument, "kgw_set_num_threads: n must be >= 0");
    kgw::set_num_threads(n);
    return KGW_OK;
  });
}

int kgw_get_num_threads(void) { return kgw::num_threads(); }

void kgw_run_options_init(kgw_run_options* opt) {
  if (!opt) return;
  *opt = kgw_run_options{nullptr, nullptr, 0, 0.0, 0.0, 0, nullptr, nullptr, 0};
}

kgw_status kgw_cmd_solve(const kgw_run_options* opt) { return run(kgw::cmd_solve, opt); }
kgw_status kgw_cmd_grid(const kgw_run_options* opt) { return run(kgw::cmd_grid, opt); }
kgw_status kgw_cmd_converge(const kgw_run_options* opt) { return run(kgw::cmd_converge, opt); }
kgw_status kgw_cmd_scatter(const kgw_run_options* opt) { return run(kgw::cmd_scatter, opt); }
kgw_status kgw_cmd_selftest(const kgw_run_options* opt) { return run(kgw::cmd_selftest, opt); }

kgw_status kgw_solve_json(const char* json, kgw_solution** out) {
  return guarded([&] {
    if (!json || !out) kgw::fail(kgw::ErrorCode::InvalidArgument, "kgw_solve_json: null argument");
    *out = nullptr;
    const kgw::RunConfig rc = kgw::parse_run_config(json);
    auto h = std::make_unique<kgw_solution>();
    h->sol = kgw::solve(rc.problem);
    h->ev = std::make_unique<kgw::FieldEvaluator>(h->sol);
    const bool conv = h->sol.gmres.converged;
    *out = h.release();
    if (!conv) {
      g_last_error = "solver did not converge";
      return KGW_ERR_CONVERGENCE;
    }
    return KGW_OK;
  });
}

void kgw_solution_free(kgw_solution* sol) { delete sol; }

kgw_status kgw_solution_info(const kgw_solution* sol, int* n_core, int* n_over, int* iterations,
                             double* true_residual, int* converged) {
  return guarded([&] {
    if (!sol) kgw::fail(kgw::ErrorCode::InvalidArgument, "kgw_solution_info: null handle");
    if (n_core) *n_core = sol->sol.boundary->n_core();
    if (n_over) *n_over = sol->sol.boundary->n_over();
    if (iterations) *iterations = sol->sol.gmres.iterations;
    if (true_residual) *true_residual = sol->sol.true_residual;
    if (converged) *converged = sol->sol.gmres.converged ? 1 : 0;
    return KGW_OK;
  });
}

kgw_status kgw_solution_eval(const kgw_solution* sol, size_t n, const double* xy, double* u) {
  return guarded([&] {
    if (!sol || (n > 0 && (!xy || !u))) kgw::fail(kgw::ErrorCode::InvalidArgument, "kgw_solution_eval: null argument");
    for (size_t i = 0; i < n; ++i) {
      const kgw::cplx v = sol->ev->value({xy[2 * i], xy[2 * i + 1]});
      u[2 * i] = v.real();
      u[2 * i + 1] = v.imag();
    }
    return KGW_OK;
  });
}

kgw_status kgw_solution_densities(const kgw_solution* sol, double* t, double* rho, double* mu) {
  return guarded([&] {
    if (!sol) kgw::fail(kgw::ErrorCode::InvalidArgument, "kgw_solution_densities: null handle");
    const kgw::Boundary& bd = *sol->sol.boundary;
    for (int j = 0; j < bd.n_over(); ++j) {
      if (t) t[j] = bd.t[j];
      if (rho) {
        rho[2 * j] = sol->sol.rho[j].real();
        rho[2 * j + 1] = sol->sol.rho[j].imag();
      }
      if (mu) {
        mu[2 * j] = sol->sol.mu[j].real();
        mu[2 * j + 1] = sol->sol.mu[j].imag();
      }
    }
    return KGW_OK;
  });
}

kgw_status kgw_symbol_a(double xi, double m, double E, double* a, double* a_inv) {
  return guarded([&] {
    if (a) {
      const kgw::cplx v = kgw::flat::symbol_a(xi, m, E);
      a[0] = v.real();
      a[1] = v.imag();
    }
    if (a_inv) {
      const kgw::cplx v = kgw::flat::symbol_a_inv(xi, m, E);
      a_inv[0] = v.real();
      a_inv[1] = v.imag();
    }
    return KGW_OK;
  });
}

}  // extern "C"
