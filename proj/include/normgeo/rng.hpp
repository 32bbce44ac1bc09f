#pragma once

#include <cstdint>
#include <random>

#include "normgeo/vec.hpp"

namespace normgeo {

/// Seeded generator with platform-stable uniform and Gaussian draws.
/// std::distributions are implementation-defined, so the mappings are done
/// by hand here to keep reports byte-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  double uniform01() {
    return static_cast<double>(g_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  std::uint64_t next_u64() { return g_(); }

  /// Box-Muller; consumes two uniforms per pair of normals.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform direction on the Euclidean unit sphere.
  Vec unit_vector(std::size_t dim) {
    Vec v(dim);
    double n2 = 0.0;
    do {
      for (std::size_t i = 0; i < dim; ++i) v[i] = gaussian();
      n2 = dot(v, v);
    } while (n2 < 1e-30);
    return (1.0 / std::sqrt(n2)) * v;
  }

 private:
  std::mt19937_64 g_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace normgeo
