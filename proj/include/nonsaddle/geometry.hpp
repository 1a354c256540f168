#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace nonsaddle {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Rectangle [lo.x, hi.x] x [lo.y, hi.y], each axis optionally periodic.
// Covers the plane (no periodic axis), the cylinder (one) and the torus
// (both). Periodic axes identify lo with hi.
struct PhaseSpace {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
  std::array<bool, 2> periodic{false, false};

  double width(int axis) const {
    return axis == 0 ? hi.x - lo.x : hi.y - lo.y;
  }

  // Diagonal of the rectangle; used for escape radii.
  double diameter() const { return (hi - lo).norm(); }

  // Maps p into the fundamental domain along periodic axes. Non-periodic
  // coordinates pass through untouched (points may live outside the window).
  Vec2 wrap(Vec2 p) const {
    if (periodic[0]) {
      double w = width(0);
      p.x = p.x - w * std::floor((p.x - lo.x) / w);
    }
    if (periodic[1]) {
      double w = width(1);
      p.y = p.y - w * std::floor((p.y - lo.y) / w);
    }
    return p;
  }

  // Shortest displacement from a to b respecting periodic identifications.
  Vec2 delta(Vec2 a, Vec2 b) const {
    Vec2 d = b - a;
    if (periodic[0]) {
      double w = width(0);
      d.x = d.x - w * std::round(d.x / w);
    }
    if (periodic[1]) {
      double w = width(1);
      d.y = d.y - w * std::round(d.y / w);
    }
    return d;
  }

  double distance(Vec2 a, Vec2 b) const { return delta(a, b).norm(); }

  bool contains(Vec2 p) const {
    p = wrap(p);
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }

  // Window scaled about its center; periodic axes keep their extent (there
  // is nothing outside them to grow into).
  PhaseSpace inflated(double factor) const {
    PhaseSpace s = *this;
    Vec2 c = (lo + hi) * 0.5;
    if (!periodic[0]) {
      double h = 0.5 * width(0) * factor;
      s.lo.x = c.x - h;
      s.hi.x = c.x + h;
    }
    if (!periodic[1]) {
      double h = 0.5 * width(1) * factor;
      s.lo.y = c.y - h;
      s.hi.y = c.y + h;
    }
    return s;
  }
};

}  // namespace nonsaddle
