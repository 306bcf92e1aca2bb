// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace gem {

struct QuadResult {
  double value = 0.0;
  double error = 0.0; // estimated absolute error
  bool converged = false;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
/// Bisects the worst interval until the summed error estimate meets
/// rel_tol*|value| + abs_tol or the interval budget runs out.
QuadResult integrate_gk(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-10,
                        double abs_tol = 1e-300, int max_intervals = 4000);

/// integrate_gk that throws std::runtime_error on non-convergence.
double integrate_gk_checked(const std::function<double(double)>& f, double a,
                            double b, double rel_tol = 1e-10,
                            double abs_tol = 1e-300);

} // namespace gem
