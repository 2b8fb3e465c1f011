#include "thermoforge/newton.hpp"

#include <algorithm>
#include <cmath>

namespace thermoforge {

namespace {

double norm(const Vec2& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

bool finite(const Vec2& r) { return std::isfinite(r[0]) && std::isfinite(r[1]); }

}  // namespace

NewtonResult damped_newton(const System2& system, Vec2 start,
                           const NewtonOptions& options) {
  NewtonResult out;
  out.x = start;
  System2Eval eval = system(out.x);
  out.residual = eval.residual;
  if (!finite(out.residual)) return out;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    out.iterations = iter;
    if (norm(out.residual) <= options.tolerance) {
      out.converged = true;
      return out;
    }
    const Mat2& j = eval.jacobian;
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) return out;
    const Vec2& f = out.residual;
    const Vec2 step{(j[1][1] * f[0] - j[0][1] * f[1]) / det,
                    (j[0][0] * f[1] - j[1][0] * f[0]) / det};

    double scale = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, scale *= 0.5) {
      const Vec2 trial{out.x[0] - scale * step[0], out.x[1] - scale * step[1]};
      System2Eval trial_eval = system(trial);
      if (finite(trial_eval.residual) &&
          norm(trial_eval.residual) < norm(out.residual)) {
        out.x = trial;
        eval = trial_eval;
        out.residual = trial_eval.residual;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Stagnation at rounding level still counts if the tolerance is met.
      out.converged = norm(out.residual) <= options.tolerance;
      return out;
    }
  }
  out.iterations = options.max_iterations;
  out.converged = norm(out.residual) <= options.tolerance;
  return out;
}

}  // namespace thermoforge
