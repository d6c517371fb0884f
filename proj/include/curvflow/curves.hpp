#pragma once

// Closed-form generating curves used as exact references.

#include <memory>

#include "curvflow/profile.hpp"

namespace curvflow {

/// Generic closed-form curve: Shape provides a template eval(T u) returning
/// (r, z) in any Taylor-compatible arithmetic.
template <class Shape>
class ClosedFormCurve final : public ProfileCurve {
 public:
  explicit ClosedFormCurve(Shape shape = {}) : shape_(shape) {}

  CurvePoint point(double u) const override {
    const auto [r, z] = shape_.eval(Taylor<2>::variable(u));
    return {r.derivative(0), z.derivative(0), r.derivative(1), z.derivative(1), r.derivative(2), z.derivative(2)};
  }

  std::optional<CurveJet> jet(double u) const override {
    const auto [r, z] = shape_.eval(Jet::variable(u));
    return CurveJet{r, z};
  }

  const Shape& shape() const { return shape_; }

 private:
  Shape shape_;
};

/// r = 3 + 2 cos u, z = sqrt(2) sin u; period 2 pi.
struct EllipticTorusShape {
  template <class T>
  std::pair<T, T> eval(const T& u) const {
    return {T(3.0) + T(2.0) * cos(u), T(std::sqrt(2.0)) * sin(u)};
  }
};

/// Semicircle of radius rho parametrized by arclength s in [0, pi rho],
/// from the south pole to the north pole.
struct SphereShape {
  double radius = 1.0;
  template <class T>
  std::pair<T, T> eval(const T& s) const {
    const T t = s / T(radius);
    return {T(radius) * sin(t), T(-radius) * cos(t)};
  }
};

/// r = cosh u, z = u.
struct CatenoidShape {
  template <class T>
  std::pair<T, T> eval(const T& u) const {
    return {cosh(u), u};
  }
};

/// r = 2 cosh^2 u, z = 4 sinh u: the graph r = 2 + z^2/8 whose rotation in
/// R^4 has vanishing scalar curvature.
struct ParaboloidShape {
  template <class T>
  std::pair<T, T> eval(const T& u) const {
    const T c = cosh(u);
    return {T(2.0) * c * c, T(4.0) * sinh(u)};
  }
};

using EllipticTorusCurve = ClosedFormCurve<EllipticTorusShape>;
using SphereCurve = ClosedFormCurve<SphereShape>;
using CatenoidCurve = ClosedFormCurve<CatenoidShape>;
using ParaboloidCurve = ClosedFormCurve<ParaboloidShape>;

}  // namespace curvflow
