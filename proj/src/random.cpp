#include "wmcs/random.hpp"

#include <cmath>

#include "wmcs/normal.hpp"

namespace wmcs {

double Rng::standard_normal() { return normal_quantile(uniform()); }

double Rng::standard_gamma(double shape) {
  if (shape < 1.0) {
    const double u = uniform();
    return standard_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = standard_normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace wmcs
