#include <cstdio>
#include <cmath>
#include "jumpform/quad.hpp"
using namespace jumpform;
int main() {
  setvbuf(stdout, nullptr, _IONBF, 0);
  double x = 0.15, y = 0.12;
  auto f = [x, y](double t) { return std::pow(t, x - 1.0) * std::pow(1.0 - t, y - 1.0); };
  QuadOptions o;
  o.abs_tol = 1e-12;
  o.singular.push_back({0.0, x - 1.0});
  o.singular.push_back({1.0, y - 1.0});
  QuadResult q = integrate(f, 0.0, 1.0, o);
  std::printf("beta-int: %.12g err=%.2e conv=%d ev=%ld\n", q.value, q.abs_error_estimate,
              q.converged, q.evaluations);
  return 0;
}
