#pragma once

#include <string>
#include <vector>

#include "sks/assembly.hpp"

namespace sks {

/// Initial density u0 and chemical concentration c0. The initial flux is
/// sigma0 = grad c0, so its divergence is the Laplacian of c0 and its rot vanishes.
struct InitialData {
  ScalarFunction u0;
  ScalarFunction c0;
  std::function<Point(const Point&)> grad_c0;
  ScalarFunction laplacian_c0;

  VectorField sigma0() const { return {grad_c0, laplacian_c0, ScalarFunction{}}; }
};

/// Named closed-form initial data, evaluated at x + origin:
///   "sin_pi"          u0 = c0 = sin(pi x) sin(pi y)
///   "sin_2pi"         u0 = c0 = sin(2 pi x) sin(2 pi y)
///   "gaussian_blowup" u0 = 1000 exp(-100 |x|^2), c0 = 500 exp(-50 |x|^2)
///   "constant"        u0 = 1, c0 = 1
///   "zero"            u0 = 0, c0 = 0
/// Throws std::invalid_argument for an unknown name.
InitialData make_initial_data(const std::string& name, const Point& origin = Point::Zero());

std::vector<std::string> initial_data_names();

}  // namespace sks
