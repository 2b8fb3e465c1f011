#pragma once

#include <array>
#include <functional>

namespace thermoforge {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

// Residual and Jacobian of a two-equation system at a point.
struct System2Eval {
  Vec2 residual{};
  Mat2 jacobian{};
};

using System2 = std::function<System2Eval(const Vec2&)>;

struct NewtonOptions {
  double tolerance = 1e-13;  // on the max-norm of the residual
  int max_iterations = 200;
  int max_halvings = 40;
};

struct NewtonResult {
  Vec2 x{};
  Vec2 residual{};
  int iterations = 0;
  bool converged = false;
};

// Newton's method with step halving: a full step is accepted only if it
// lowers the residual max-norm, otherwise it is halved up to
// max_halvings times. Never throws; callers inspect `converged`.
NewtonResult damped_newton(const System2& system, Vec2 start,
                           const NewtonOptions& options = {});

}  // namespace thermoforge
