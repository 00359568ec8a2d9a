#include "sks/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sks {

namespace {

InitialData product_sine(double freq, const Point& origin) {
  const double w = freq * std::numbers::pi;
  auto f = [w, origin](const Point& p) {
    const Point x = p + origin;
    return std::sin(w * x.x()) * std::sin(w * x.y());
  };
  InitialData data;
  data.u0 = f;
  data.c0 = f;
  data.grad_c0 = [w, origin](const Point& p) {
    const Point x = p + origin;
    return Point(w * std::cos(w * x.x()) * std::sin(w * x.y()),
                 w * std::sin(w * x.x()) * std::cos(w * x.y()));
  };
  data.laplacian_c0 = [w, f](const Point& p) { return -2.0 * w * w * f(p); };
  return data;
}

ScalarFunction gaussian(double amplitude, double rate, const Point& origin) {
  return [=](const Point& p) { return amplitude * std::exp(-rate * (p + origin).squaredNorm()); };
}

InitialData gaussian_blowup(const Point& origin) {
  InitialData data;
  data.u0 = gaussian(1000.0, 100.0, origin);
  data.c0 = gaussian(500.0, 50.0, origin);
  data.grad_c0 = [origin](const Point& p) {
    const Point x = p + origin;
    return Point(-100.0 * 500.0 * std::exp(-50.0 * x.squaredNorm()) * x);
  };
  data.laplacian_c0 = [origin](const Point& p) {
    const Point x = p + origin;
    const double r2 = x.squaredNorm();
    // Laplacian of A exp(-a r^2) in 2D: A (4 a^2 r^2 - 4 a) exp(-a r^2).
    return 500.0 * (4.0 * 2500.0 * r2 - 200.0) * std::exp(-50.0 * r2);
  };
  return data;
}

InitialData constant_data(double value) {
  InitialData data;
  data.u0 = [value](const Point&) { return value; };
  data.c0 = data.u0;
  data.grad_c0 = [](const Point&) { return Point(0.0, 0.0); };
  data.laplacian_c0 = [](const Point&) { return 0.0; };
  return data;
}

}  // namespace

InitialData make_initial_data(const std::string& name, const Point& origin) {
  if (name == "sin_pi") return product_sine(1.0, origin);
  if (name == "sin_2pi") return product_sine(2.0, origin);
  if (name == "gaussian_blowup") return gaussian_blowup(origin);
  if (name == "constant") return constant_data(1.0);
  if (name == "zero") return constant_data(0.0);
  throw std::invalid_argument("unknown initial data '" + name + "'");
}

std::vector<std::string> initial_data_names() {
  return {"sin_pi", "sin_2pi", "gaussian_blowup", "constant", "zero"};
}

}  // namespace sks
