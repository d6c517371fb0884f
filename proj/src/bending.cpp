#include <algorithm>
#include <cmath>

#include "curvflow/constructions.hpp"
#include "curvflow/quadrature.hpp"

namespace curvflow {
namespace {

constexpr int kTailPoints = 30;

// x^2 e^{-eps/x} / eps * sum_k (-1)^k (k+1)! (x/eps)^k, the asymptotic form of
// int_0^x e^{-eps/t} dt for eps/x large.
double flat_integral_asymptotic(double x, double eps) {
  const double y = eps / x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    const double next = -term * (k + 1) / y;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return x * x / eps * std::exp(-y) * sum;
}

double flat_integral(double x, double eps) {
  if (x <= 0.0) return 0.0;
  const double y = eps / x;
  if (y > 50.0) return flat_integral_asymptotic(x, eps);
  const double e1 = -std::expint(-y);
  return x * std::exp(-y) - eps * e1;
}

}  // namespace

BendingFunction::BendingFunction(double a, double b, double epsilon) : a_(a), b_(b), epsilon_(epsilon), total_(0.0) {
  if (!(a > 0.0 && b > a)) throw std::invalid_argument("bending function needs 0 < a < b");
  if (!(epsilon > 0.0)) throw std::invalid_argument("bending function needs epsilon > 0");
  total_ = flat_integral(b - a, epsilon);
}

std::array<double, 3> BendingFunction::weight(double s) const {
  const double x = s - a_;
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  const double w = std::exp(-epsilon_ / x);
  const double g = epsilon_ / (x * x);
  return {w, w * g, w * (g * g - 2.0 * epsilon_ / (x * x * x))};
}

double BendingFunction::cumulative(double z) const { return flat_integral(std::min(z, b_) - a_, epsilon_); }

double BendingFunction::tail(double z) const {
  if (z >= b_) return 0.0;
  if (z >= a_ + 0.5 * (b_ - a_)) return integrate_gauss([this](double s) { return weight(s)[0]; }, z, b_, kTailPoints);
  return total_ - cumulative(z);
}

BendingFunction::Values BendingFunction::eval(double z) const {
  if (z <= a_) return {1.0, 0.0, 0.0};
  const double q = tail(z) / total_;
  const auto w = weight(z);
  const double dq = -w[0] / total_;
  const double ddq = -w[1] / total_;
  if (q <= 0.0) return {0.0, -INFINITY, -INFINITY};
  const double phi = std::sqrt(q);
  return {phi, dq / (2.0 * phi), ddq / (2.0 * phi) - dq * dq / (4.0 * phi * phi * phi)};
}

double BendingFunction::one_minus_phi(double z) const {
  if (z <= a_) return 0.0;
  const double phi = eval(z).phi;
  return cumulative(z) / total_ / (1.0 + phi);
}

std::pair<double, double> BendingFunction::scaled_derivatives(double z) const {
  const double phi = eval(z).phi;
  const double x = z - a_;
  const double w = weight(z)[0];
  const double t = total_;
  return {-1.0 / (2.0 * t * phi), -(epsilon_ / (x * x)) / (2.0 * t * phi) - w / (4.0 * t * t * phi * phi * phi)};
}

BendingFunction::PoleChart BendingFunction::pole_chart(double w) const {
  const auto& rule = gauss_legendre(kTailPoints);
  const double w2 = w * w;
  PoleChart c;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t = 0.5 * (1.0 + rule.nodes[k]);
    const double wt = 0.5 * rule.weights[k];
    const auto W = weight(b_ - w2 * t);
    c.q += wt * W[0];
    c.dq += wt * (-2.0 * w * t * W[1]);
    c.ddq += wt * (-2.0 * t * W[1] + 4.0 * w2 * t * t * W[2]);
  }
  c.q /= total_;
  c.dq /= total_;
  c.ddq /= total_;
  return c;
}

double BendingFunction::inverse_depth(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return b_ - a_;
  const double wlim = std::sqrt(pole_chart_limit());
  auto chart = [this](double w) {
    const auto c = pole_chart(w);
    const double sq = std::sqrt(c.q);
    return std::pair{w * sq, sq + w * c.dq / (2.0 * sq)};
  };
  if (chart(wlim).first >= y) {
    // Safeguarded Newton on w sqrt(q(w)) = y.
    double lo = 0.0;
    double hi = wlim;
    double w = std::min(wlim, y / std::sqrt(pole_chart(0.0).q));
    for (int it = 0; it < 100; ++it) {
      const auto [g, dg] = chart(w);
      const double f = g - y;
      if (f > 0.0) hi = w; else lo = w;
      double next = w - f / dg;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - w) <= 1e-17 * std::max(w, 1e-300)) {
        w = next;
        break;
      }
      w = next;
    }
    return w * w;
  }
  // Graph region: Q(z) = y^2 with Q decreasing in z.
  const double target = y * y;
  double lo = a_;
  double hi = b_ - wlim * wlim;
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = tail(z) / total_ - target;
    if (f > 0.0) lo = z; else hi = z;
    const double dq = -weight(z)[0] / total_;
    double next = dq != 0.0 ? z - f / dq : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-16 * b_) {
      z = next;
      break;
    }
    z = next;
  }
  return b_ - z;
}

BendingFunction bending_function(double a, double b, const BendingParams& params) {
  BendingFunction bf(a, b, params.epsilon);
  DiagnosticReport& rep = bf.certificate_;

  rep.add("phi_at_a", "phi(a) = 1", bf.phi(a), 1.0, 0.0, CheckKind::Abs, a);
  rep.add("phi_at_b", "phi(b) = 0", bf.tail(b), 0.0, 0.0, CheckKind::Abs, b);

  // Sign conditions on a dense grid clustered at both ends. dphi and ddphi
  // carry the positive factor W, which underflows near a, so the W-free
  // parts are checked.
  std::vector<double> ts;
  const int m = std::max(params.dense_samples, 16);
  for (int j = 1; j < m; ++j) ts.push_back(static_cast<double>(j) / m);
  for (int k = 2; k <= 12; ++k) {
    ts.push_back(std::pow(10.0, -k));
    ts.push_back(1.0 - std::pow(10.0, -k));
  }
  double max_d1 = -INFINITY, max_d2 = -INFINITY, at_d1 = a, at_d2 = a;
  for (double t : ts) {
    const double z = a + t * (b - a);
    const auto [d1, d2] = bf.scaled_derivatives(z);
    if (d1 > max_d1) { max_d1 = d1; at_d1 = z; }
    if (d2 > max_d2) { max_d2 = d2; at_d2 = z; }
  }
  rep.add("dphi_negative", "dphi / W < 0 on (a, b)", max_d1, 0.0, 0.0, CheckKind::UpperBound, at_d1);
  rep.add("ddphi_negative", "ddphi / W < 0 on (a, b)", max_d2, 0.0, 0.0, CheckKind::UpperBound, at_d2);

  // Right derivatives at a from one-sided differences of 1 - phi.
  {
    const int order = std::max(params.flatness_order, 1);
    const double h = params.epsilon / 400.0;
    std::vector<double> nodes, vals;
    for (int j = 0; j <= order + 4; ++j) {
      nodes.push_back(a + j * h);
      vals.push_back(-bf.one_minus_phi(a + j * h));
    }
    const auto w = fd_weights(a, nodes, order);
    for (int k = 1; k <= order; ++k) {
      double d = 0.0;
      for (std::size_t j = 0; j < nodes.size(); ++j) d += w[k][j] * vals[j];
      rep.add("flat_d" + std::to_string(k) + "_at_a", "d^k phi / dz^k (a+) = 0", d, 0.0, params.tol_flat,
              CheckKind::Abs, a);
    }
  }

  // phi^{-1} concave, i.e. d(y) = b - phi^{-1}(y) convex, by second differences.
  {
    const int my = 400;
    std::vector<double> d(my + 1);
    for (int j = 0; j <= my; ++j) d[j] = bf.inverse_depth(static_cast<double>(j) / my);
    double worst = INFINITY;
    double at = 0.0;
    for (int j = 1; j < my; ++j) {
      const double dd = d[j + 1] - 2.0 * d[j] + d[j - 1];
      if (dd < worst) { worst = dd; at = static_cast<double>(j) / my; }
    }
    rep.add("inverse_concave", "second differences of b - phi^{-1}(y) >= 0", worst, 0.0, 1e-12,
            CheckKind::LowerBound, at);
  }

  // Odd derivatives of phi^{-1} at y = 0+.
  {
    const double h = 2e-3;
    std::vector<double> nodes, vals;
    for (int j = 0; j <= 10; ++j) {
      nodes.push_back(j * h);
      vals.push_back(bf.inverse_depth(j * h));
    }
    const int order = std::max(params.flatness_order, 1);
    const auto w = fd_weights(0.0, nodes, order);
    for (int k = 1; k <= order; k += 2) {
      double dv = 0.0;
      for (std::size_t j = 0; j < nodes.size(); ++j) dv += w[k][j] * vals[j];
      rep.add("pole_odd_d" + std::to_string(k), "d^k phi^{-1} / dy^k (0+) = 0 for odd k", dv, 0.0,
              params.tol_flat, CheckKind::Abs, 0.0);
    }
  }
  return bf;
}

}  // namespace curvflow
