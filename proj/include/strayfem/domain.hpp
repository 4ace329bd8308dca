#pragma once

// Magnetized regions supported by the benchmark cases: an origin-centered
// ball or an origin-centered axis-aligned cube.

#include <cmath>

#include "strayfem/geom3.hpp"

namespace strayfem {

enum class DomainKind { Ball, Cube };

struct DomainShape {
  DomainKind kind = DomainKind::Ball;
  /// Ball radius, or cube half side length.
  double size = 0.0;

  static DomainShape ball(double radius) { return {DomainKind::Ball, radius}; }
  static DomainShape cube(double side) { return {DomainKind::Cube, side / 2.0}; }

  bool contains(const Vec3& x) const {
    if (kind == DomainKind::Ball) return norm2(x) <= size * size;
    return std::abs(x.x) <= size && std::abs(x.y) <= size && std::abs(x.z) <= size;
  }

  /// Radius of the smallest origin-centered ball containing the domain.
  double bounding_radius() const {
    return kind == DomainKind::Ball ? size : size * std::sqrt(3.0);
  }

  double volume() const {
    if (kind == DomainKind::Ball) return 4.0 / 3.0 * M_PI * size * size * size;
    return 8.0 * size * size * size;
  }
};

}  // namespace strayfem
