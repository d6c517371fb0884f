#pragma once

// Truncated Taylor series arithmetic. A Taylor<K> holds the normalized
// coefficients c_k = f^{(k)}(u0) / k! of a function around a point, so closed
// form curves written once as templates yield exact derivatives up to order K.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace curvflow {

template <std::size_t K>
class Taylor {
 public:
  static constexpr std::size_t order = K;

  constexpr Taylor() = default;
  constexpr Taylor(double value) { c_[0] = value; }  // NOLINT: implicit by design of the arithmetic

  /// Independent variable u evaluated at u0.
  static Taylor variable(double u0) {
    Taylor t(u0);
    if constexpr (K >= 1) t.c_[1] = 1.0;
    return t;
  }

  double coeff(std::size_t k) const { return c_[k]; }
  double& coeff(std::size_t k) { return c_[k]; }
  double value() const { return c_[0]; }

  /// k-th derivative at the expansion point.
  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t j = 2; j <= k; ++j) f *= static_cast<double>(j);
    return c_[k] * f;
  }

  Taylor& operator+=(const Taylor& o) {
    for (std::size_t k = 0; k <= K; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (std::size_t k = 0; k <= K; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator-(Taylor a) {
    for (auto& c : a.c_) c = -c;
    return a;
  }
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (std::size_t k = 0; k <= K; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor q;
    for (std::size_t k = 0; k <= K; ++k) {
      double s = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  friend Taylor sqrt(const Taylor& a) {
    Taylor s;
    s.c_[0] = std::sqrt(a.c_[0]);
    for (std::size_t k = 1; k <= K; ++k) {
      double acc = a.c_[k];
      for (std::size_t j = 1; j < k; ++j) acc -= s.c_[j] * s.c_[k - j];
      s.c_[k] = acc / (2.0 * s.c_[0]);
    }
    return s;
  }

  friend Taylor exp(const Taylor& a) {
    Taylor e;
    e.c_[0] = std::exp(a.c_[0]);
    for (std::size_t k = 1; k <= K; ++k) {
      double acc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a.c_[j] * e.c_[k - j];
      e.c_[k] = acc / static_cast<double>(k);
    }
    return e;
  }

  friend Taylor sin(const Taylor& a) { return sin_cos(a, -1.0).first; }
  friend Taylor cos(const Taylor& a) { return sin_cos(a, -1.0).second; }
  friend Taylor sinh(const Taylor& a) { return sin_cos(a, 1.0).first; }
  friend Taylor cosh(const Taylor& a) { return sin_cos(a, 1.0).second; }

  /// Coefficients of the derivative series, one order shorter.
  Taylor<(K > 0 ? K - 1 : 0)> differentiate() const {
    Taylor<(K > 0 ? K - 1 : 0)> d;
    for (std::size_t k = 0; k + 1 <= K; ++k) d.coeff(k) = static_cast<double>(k + 1) * c_[k + 1];
    return d;
  }

  template <std::size_t M>
  Taylor<M> truncate() const {
    static_assert(M <= K);
    Taylor<M> t;
    for (std::size_t k = 0; k <= M; ++k) t.coeff(k) = c_[k];
    return t;
  }

 private:
  // sign = -1 gives (sin, cos), sign = +1 gives (sinh, cosh).
  static std::pair<Taylor, Taylor> sin_cos(const Taylor& a, double sign) {
    Taylor s;
    Taylor c;
    if (sign < 0) {
      s.c_[0] = std::sin(a.c_[0]);
      c.c_[0] = std::cos(a.c_[0]);
    } else {
      s.c_[0] = std::sinh(a.c_[0]);
      c.c_[0] = std::cosh(a.c_[0]);
    }
    for (std::size_t k = 1; k <= K; ++k) {
      double ss = 0.0;
      double cc = 0.0;
      for (std::size_t j = 1; j <= k; ++j) {
        const double ja = static_cast<double>(j) * a.c_[j];
        ss += ja * c.c_[k - j];
        cc += ja * s.c_[k - j];
      }
      s.c_[k] = ss / static_cast<double>(k);
      c.c_[k] = sign * cc / static_cast<double>(k);
    }
    return {s, c};
  }

  std::array<double, K + 1> c_{};
};

}  // namespace curvflow
