// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "kgwave/kgwave.h"

namespace {

const char* kFlat = R"({"m": 2, "E": 1, "window": [-40, 40], "sources": [{"pos": [0, 2.5]}]})";

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::string(kgw_version()).size() > 0);
  kgw_solution* s = nullptr;
  CHECK(kgw_solve_json("{not json", &s) == KGW_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(std::string(kgw_last_error()).size() > 0);
  CHECK(kgw_solve_json(nullptr, &s) == KGW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("solve, inspect and evaluate through the C interface") {
  kgw_solution* s = nullptr;
  REQUIRE(kgw_solve_json(kFlat, &s) == KGW_OK);
  int n_core = 0, n_over = 0, iters = 0, conv = 0;
  double res = 1.0;
  REQUIRE(kgw_solution_info(s, &n_core, &n_over, &iters, &res, &conv) == KGW_OK);
  CHECK(conv == 1);
  CHECK(n_over > n_core);
  CHECK(res < 1e-10);

  std::vector<double> t(n_over), rho(2 * n_over), mu(2 * n_over);
  CHECK(kgw_solution_densities(s, t.data(), rho.data(), mu.data()) == KGW_OK);
  CHECK(kgw_solution_densities(s, t.data(), nullptr, nullptr) == KGW_OK);
  for (int j = 1; j < n_over; ++j) CHECK(t[j] > t[j - 1]);

  const double xy[4] = {1.0, 1.0, -2.0, 0.5};
  double u[4];
  REQUIRE(kgw_solution_eval(s, 2, xy, u) == KGW_OK);
  CHECK(std::abs(u[0] - 0.0033792574398512883) < 1e-8);
  CHECK(std::abs(u[1] - 0.0004926919286686766) < 1e-8);
  const double on[2] = {0.3, 0.0};
  CHECK(kgw_solution_eval(s, 1, on, u) == KGW_ERR_DOMAIN);
  kgw_solution_free(s);
  kgw_solution_free(nullptr);
}

TEST_CASE("symbol through the C interface") {
  double a[2], ai[2];
  REQUIRE(kgw_symbol_a(0.5, 2.0, 1.0, a, ai) == KGW_OK);
  const double re = a[0] * ai[0] - a[1] * ai[1], im = a[0] * ai[1] + a[1] * ai[0];
  CHECK(std::abs(re - 1.0) < 1e-14);
  CHECK(std::abs(im) < 1e-14);
  CHECK(kgw_symbol_a(0.5, 1.0, 2.0, a, ai) == KGW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("thread count control") {
  CHECK(kgw_set_num_threads(1) == KGW_OK);
  CHECK(kgw_get_num_threads() == 1);
  CHECK(kgw_set_num_threads(0) == KGW_OK);
  CHECK(kgw_get_num_threads() >= 1);
  CHECK(kgw_set_num_threads(-3) == KGW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("command drivers report configuration and I/O errors") {
  kgw_run_options o;
  kgw_run_options_init(&o);
  o.quiet = 1;
  o.config_path = "/nonexistent/x.json";
  o.out_dir = "/tmp";
  CHECK(kgw_cmd_solve(&o) == KGW_ERR_IO);
  CHECK(kgw_cmd_solve(nullptr) == KGW_ERR_INVALID_ARGUMENT);
}
