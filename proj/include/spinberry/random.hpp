#ifndef SPINBERRY_RANDOM_HPP
#define SPINBERRY_RANDOM_HPP

#include <cstdint>
#include <random>

#include <spinberry/types.hpp>

namespace spinberry {

// Seeded generator with hand-rolled distributions.  std::uniform_real_distribution
// is implementation defined, so doubles are built from raw engine output to keep
// sampled points identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform direction on the unit sphere.
  Vec3d unit_sphere() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  // Uniform direction with both the transverse part and the z component
  // bounded away from zero.  Used where axis-adjacent or equator-adjacent
  // points would make a comparison ill conditioned.
  Vec3d unit_sphere_guarded(double min_perp, double min_abs_z) {
    for (;;) {
      const Vec3d s = unit_sphere();
      if (std::hypot(s[0], s[1]) > min_perp && std::abs(s[2]) > min_abs_z)
        return s;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spinberry

#endif
